from __future__ import annotations

import math
from typing import TYPE_CHECKING, Iterable, Sequence

from domain.exceptions import ValidationError

if TYPE_CHECKING:
    from domain.models import (
        DiffConfig,
        GaussianSignalModel,
        MCConfig,
        OperatingPoint,
        RunConfig,
        ScalingSchedule,
    )

MAX_SEED = 2**64 - 1
MAX_DERIVATIVE_ORDER = 4


def _require_finite(value: float, name: str) -> None:
    if value is None or not math.isfinite(value):
        raise ValidationError(f"{name} must be a finite number, got {value!r}")


def validate_probability(p: float, name: str = "probability") -> None:
    _require_finite(p, name)
    if not 0.0 < p < 1.0:
        raise ValidationError(f"{name} must lie in (0, 1), got {p}")


def validate_signal_model(model: GaussianSignalModel) -> None:
    _require_finite(model.mu0, "mu0")
    _require_finite(model.mu1, "mu1")
    _require_finite(model.sigma0_sq, "sigma0_sq")
    _require_finite(model.sigma1_sq, "sigma1_sq")

    if model.sigma0_sq <= 0:
        raise ValidationError("Noise variance sigma0_sq must be positive")

    if model.sigma1_sq <= 0:
        raise ValidationError(
            "Signal variance sigma1_sq must be positive (random-signal model)"
        )


def validate_operating_point(op_point: OperatingPoint) -> None:
    validate_probability(op_point.alpha, "alpha")
    validate_probability(op_point.beta, "beta")

    if op_point.beta <= op_point.alpha:
        raise ValidationError(
            f"Target P_D beta={op_point.beta} must exceed alpha={op_point.alpha}"
        )


def validate_diff_config(cfg: DiffConfig) -> None:
    _require_finite(cfg.base_step, "base_step")
    _require_finite(cfg.zero_tolerance, "zero_tolerance")

    if cfg.base_step <= 0:
        raise ValidationError("base_step must be positive")

    if cfg.richardson_levels < 1:
        raise ValidationError("richardson_levels must be at least 1")

    if cfg.zero_tolerance <= 0:
        raise ValidationError("zero_tolerance must be positive")


def validate_seed(seed: int) -> None:
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ValidationError(f"seed must be an integer, got {seed!r}")

    if not 0 <= seed <= MAX_SEED:
        raise ValidationError("seed must be an unsigned 64-bit integer")


def validate_mc_config(cfg: MCConfig) -> None:
    validate_seed(cfg.seed)

    if cfg.trials < 100:
        raise ValidationError("MC trials must be at least 100")

    if cfg.batch_size < 1:
        raise ValidationError("MC batch_size must be positive")

    if cfg.batch_size > cfg.trials:
        raise ValidationError("MC batch_size cannot exceed the number of trials")


def validate_grid(grid: Sequence[int], name: str = "n_grid") -> None:
    if len(grid) == 0:
        raise ValidationError(f"{name} must not be empty")

    if any(int(n) != n or n < 1 for n in grid):
        raise ValidationError(f"{name} must contain positive integers")

    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError(f"{name} must be strictly increasing")


def validate_schedule(schedule: ScalingSchedule) -> None:
    _require_finite(schedule.c_mu, "c_mu")
    _require_finite(schedule.c_var, "c_var")
    _require_finite(schedule.var_exponent, "var_exponent")
    _require_finite(schedule.sigma0_sq, "sigma0_sq")

    if schedule.c_var <= 0:
        raise ValidationError("c_var must be positive so sigma1_sq stays positive")

    if schedule.sigma0_sq <= 0:
        raise ValidationError("sigma0_sq must be positive")

    if schedule.mu_exponent is not None:
        _require_finite(schedule.mu_exponent, "mu_exponent")
        if schedule.mu_exponent < 0:
            raise ValidationError("mu_exponent must be nonnegative")


def validate_run_config(cfg: RunConfig, known_detectors: Iterable[str]) -> None:
    known = set(known_detectors)

    for label, name in (("a", cfg.detector_a), ("b", cfg.detector_b)):
        if name not in known:
            raise ValidationError(
                f"Unknown detector for --{label}: {name!r} "
                f"(choose from {', '.join(sorted(known))})"
            )

    validate_probability(cfg.alpha, "alpha")
    validate_probability(cfg.beta, "beta")

    if cfg.n is not None and cfg.n < 1:
        raise ValidationError("n must be a positive integer")

    if cfg.n_grid:
        validate_grid(cfg.n_grid)

    if cfg.n_max < 1:
        raise ValidationError("n_max must be a positive integer")
