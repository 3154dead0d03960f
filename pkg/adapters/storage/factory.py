"""
Storage Factory
This module provides a factory function to create the result storage
adapter for one command run.
"""

import logging
from pathlib import Path

from adapters.storage.local_storage import LocalStorage
from config.settings import DETECTION_OUTPUT_DIR
from domain.models import TABULAR_COMMANDS, Command, OutputFormat
from ports.result_storage import ResultStorage

logger = logging.getLogger(__name__)


def default_format(command: Command) -> OutputFormat:
    return OutputFormat.CSV if command in TABULAR_COMMANDS else OutputFormat.JSON


def create_storage(
    command: Command,
    output_path: str | None = None,
    output_format: OutputFormat | None = None,
) -> ResultStorage:
    """
    Create storage adapter for a command.

    Without an explicit path the artifact goes to
    DETECTION_OUTPUT_DIR/<command>.<format>.
    """
    fmt = output_format or default_format(command)
    path = Path(output_path) if output_path else Path(DETECTION_OUTPUT_DIR) / f"{command.value}.{fmt.value}"

    logger.info(f"Using local storage (output: {path})")
    return LocalStorage(output_path=path)
