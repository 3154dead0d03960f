"""
CLI Argument Parsing

Translates command-line flags into a RunConfig. Usage errors raise
ConfigurationError instead of exiting so main() can emit a JSON error record.
"""

import argparse
from typing import Sequence

from config.settings import (
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    MC_BATCH_SIZE,
    MC_SEED,
    MC_TRIALS,
    SEARCH_N_MAX,
)
from domain.exceptions import ConfigurationError
from domain.models import Command, OutputFormat, RunConfig


class _RaisingParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ConfigurationError(f"{self.prog}: {message}")


def _n_grid(value: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {value!r}; expected e.g. 100,1000") from None


def _common_arguments() -> argparse.ArgumentParser:
    parent = _RaisingParser(add_help=False)

    model = parent.add_argument_group("signal model")
    model.add_argument("--mu0", type=float, default=0.0)
    model.add_argument("--sigma0-sq", type=float, default=1.0)
    model.add_argument("--mu1", type=float, default=0.0)
    model.add_argument("--sigma1-sq", type=float, default=1.0)

    detectors = parent.add_argument_group("detectors")
    detectors.add_argument("--a", "--detector", dest="detector_a", default="np")
    detectors.add_argument("--b", dest="detector_b", default="energy")

    task = parent.add_argument_group("operating point")
    task.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    task.add_argument("--beta", type=float, default=DEFAULT_BETA)
    task.add_argument("--n", type=int, default=None)
    task.add_argument("--n-grid", type=_n_grid, default=())
    task.add_argument("--n-max", type=int, default=SEARCH_N_MAX)
    task.add_argument(
        "--fractional",
        action="store_true",
        help="search sample sizes on a continuous N extension",
    )

    schedule = parent.add_argument_group("scaling schedule")
    schedule.add_argument("--c-mu", type=float, default=0.5)
    schedule.add_argument("--c-var", type=float, default=1.0)
    schedule.add_argument("--var-exponent", type=float, default=0.0)
    schedule.add_argument(
        "--mu-exponent",
        type=float,
        default=None,
        help="mu1(N) = c_mu * N**-mu_exponent (default 1/(2*nu))",
    )

    mc = parent.add_argument_group("monte carlo")
    mc.add_argument("--trials", type=int, default=MC_TRIALS)
    mc.add_argument("--seed", type=int, default=MC_SEED)
    mc.add_argument("--batch-size", type=int, default=MC_BATCH_SIZE)

    output = parent.add_argument_group("output")
    output.add_argument("--output", dest="output_path", default=None)
    output.add_argument(
        "--format",
        dest="output_format",
        choices=[f.value for f in OutputFormat],
        default=None,
    )

    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _common_arguments()
    parser = _RaisingParser(
        prog="detection",
        description="Random-signal detector performance and relative efficiency.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    helps = {
        Command.ROC: "P_D over a grid of false-alarm rates",
        Command.THRESHOLD: "threshold for a target false-alarm rate",
        Command.EFFICACY: "derivative order and efficacy of detector A",
        Command.ARE: "asymptotic relative efficiency of A with respect to B",
        Command.RE: "finite-sample relative efficiency and bridge formula terms",
        Command.CONVERGE: "RE vs ARE along a scaling schedule",
        Command.MC_VALIDATE: "Monte Carlo check of P_F, P_D and moment formulas",
    }
    for command, text in helps.items():
        subparsers.add_parser(command.value, parents=[parent], help=text)

    return parser


def parse_run_config(argv: Sequence[str] | None = None) -> RunConfig:
    """
    Parse CLI arguments.

    Raises:
        ConfigurationError: On unknown flags or malformed values.
    """
    args = build_parser().parse_args(argv)

    return RunConfig(
        command=Command(args.command),
        mu0=args.mu0,
        sigma0_sq=args.sigma0_sq,
        mu1=args.mu1,
        sigma1_sq=args.sigma1_sq,
        detector_a=args.detector_a,
        detector_b=args.detector_b,
        alpha=args.alpha,
        beta=args.beta,
        n=args.n,
        n_grid=args.n_grid,
        n_max=args.n_max,
        c_mu=args.c_mu,
        c_var=args.c_var,
        var_exponent=args.var_exponent,
        mu_exponent=args.mu_exponent,
        fractional=args.fractional,
        trials=args.trials,
        seed=args.seed,
        batch_size=args.batch_size,
        output_path=args.output_path,
        output_format=OutputFormat(args.output_format) if args.output_format else None,
    )
