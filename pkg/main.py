"""
Detection Efficiency Toolkit - Main Entry Point

Runs one command (roc, threshold, efficacy, are, re, converge, mc-validate)
and writes its artifact. Exit status is 0 on success, 1 on a computation
error and 2 on a usage error; failures also print a JSON error record to
stderr.
"""

import logging
import sys
from typing import Sequence

from adapters.catalog.factory import create_detector_catalog
from adapters.cli.arguments import parse_run_config
from adapters.storage.factory import create_storage
from adapters.storage.json_writer import JSONWriter, error_envelope
from application.usecases.run_command import RunCommandUseCase
from config.settings import (
    DEFAULT_N,
    DEFAULT_N_GRID,
    EFFICACY_N,
    LOG_LEVEL,
    SWEEP_WORKERS,
)
from domain.exceptions import ConfigurationError, DetectionError, ValidationError

# Configure logging
logging.basicConfig(
    level=LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COMPUTATION_ERROR = 1
EXIT_USAGE_ERROR = 2


def _report_error(error: Exception, command: str | None) -> None:
    operation = getattr(error, "operation", None) or command
    record = error_envelope(command, type(error).__name__, str(error), operation)
    print(JSONWriter().dumps(record, indent=None), file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    """
    Main entry point for the detection toolkit.

    Args:
        argv: Command-line arguments without the program name.

    Returns:
        Process exit status.
    """
    command = None
    try:
        config = parse_run_config(argv)
        command = config.command.value

        use_case = RunCommandUseCase(
            detector_catalog=create_detector_catalog(),
            storage=create_storage(
                config.command, config.output_path, config.output_format
            ),
            default_n=DEFAULT_N,
            efficacy_n=EFFICACY_N,
            n_grid=DEFAULT_N_GRID,
            sweep_workers=SWEEP_WORKERS,
        )
        output_path = use_case.execute(config)
    except (ConfigurationError, ValidationError) as e:
        logger.error(f"Usage error: {e}")
        _report_error(e, command)
        return EXIT_USAGE_ERROR
    except (DetectionError, OSError) as e:
        logger.error(f"{command} failed: {e}")
        _report_error(e, command)
        return EXIT_COMPUTATION_ERROR

    print(output_path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
