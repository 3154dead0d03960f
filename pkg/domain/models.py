"""
Domain Models
This module defines the core domain models for the detection efficiency toolkit.
These models represent the main entities used throughout the application.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

import numpy as np

from domain.exceptions import ValidationError
from domain.validators import (
    validate_diff_config,
    validate_mc_config,
    validate_operating_point,
    validate_schedule,
    validate_seed,
    validate_signal_model,
)

# Moment map: (N, model) -> real. N may be fractional for continuous searches.
MomentMap = Callable[[float, "GaussianSignalModel"], float]
StatisticMap = Callable[[np.ndarray, "GaussianSignalModel"], "float | np.ndarray"]


class Hypothesis(str, Enum):
    """The two hypotheses of the detection problem."""

    H0 = "H0"
    H1 = "H1"


class Command(str, Enum):
    """Commands understood by the command-line surface."""

    ROC = "roc"
    THRESHOLD = "threshold"
    EFFICACY = "efficacy"
    ARE = "are"
    RE = "re"
    CONVERGE = "converge"
    MC_VALIDATE = "mc-validate"


# Commands whose natural artifact is a table.
TABULAR_COMMANDS = frozenset({Command.ROC, Command.CONVERGE})


class OutputFormat(str, Enum):
    """Serialization formats for emitted artifacts."""

    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class GaussianSignalModel:
    """Noise W ~ N(mu0, sigma0_sq) and random signal S ~ N(mu1, sigma1_sq)."""

    mu0: float = 0.0
    sigma0_sq: float = 1.0
    mu1: float = 0.0
    sigma1_sq: float = 1.0

    def __post_init__(self) -> None:
        validate_signal_model(self)

    @property
    def total_var(self) -> float:
        """Variance of an observation under H1."""
        return self.sigma0_sq + self.sigma1_sq

    def with_mu1(self, mu1: float) -> GaussianSignalModel:
        return replace(self, mu1=mu1)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Observations x[0..N-1] drawn under one hypothesis."""

    values: np.ndarray
    hypothesis: Hypothesis
    seed: int

    def __post_init__(self) -> None:
        validate_seed(self.seed)
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValidationError("SampleBatch values must be a non-empty 1-D array")

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class DiffConfig:
    """
    Finite-difference settings.

    The effective step at x0 is base_step * max(1, |x0|).
    """

    base_step: float = 1e-3
    richardson_levels: int = 3
    zero_tolerance: float = 1e-7

    def __post_init__(self) -> None:
        validate_diff_config(self)


@dataclass(frozen=True)
class DetectorSpec:
    """An asymptotically Gaussian test statistic with closed-form moments."""

    name: str
    statistic: StatisticMap
    mean_h0: MomentMap
    mean_h1: MomentMap
    var_h0: MomentMap
    var_h1: MomentMap
    description: str = ""


@dataclass(frozen=True)
class OperatingPoint:
    """Target (P_F, P_D) pair defining a detection task."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        validate_operating_point(self)


@dataclass(frozen=True)
class GeneralMomentsReport:
    """Standardization constants of T/sigma0_sq under H0 and T/(sigma0_sq+sigma1_sq) under H1."""

    h0_mean: float
    h0_var: float
    h1_mean: float
    h1_var: float


@dataclass(frozen=True)
class EfficacyReport:
    """Derivative order, per-N derivative and square-root efficacy of a detector."""

    nu: int
    derivative: float
    sqrt_efficacy: float
    n_used: int

    @property
    def efficacy(self) -> float:
        return self.sqrt_efficacy**2


@dataclass(frozen=True)
class ScalingSchedule:
    """
    Pitman-style schedule for the convergence study.

    mu1(N) = c_mu * N**(-mu_exponent), with mu_exponent defaulting to 1/(2*nu)
    (s**nu * sqrt(N) held constant). Set mu_exponent=0.5 for the literal
    "s * sqrt(N) constant" rate. sigma1_sq(N) = c_var * N**(-var_exponent).
    """

    c_mu: float
    c_var: float = 1.0
    var_exponent: float = 0.0
    sigma0_sq: float = 1.0
    mu_exponent: float | None = None

    def __post_init__(self) -> None:
        validate_schedule(self)

    def mu1_at(self, n: float, nu: int) -> float:
        exponent = self.mu_exponent if self.mu_exponent is not None else 1.0 / (2 * nu)
        return self.c_mu * n ** (-exponent)

    def sigma1_sq_at(self, n: float) -> float:
        return self.c_var * n ** (-self.var_exponent)

    def model_at(self, n: float, nu: int) -> GaussianSignalModel:
        return GaussianSignalModel(
            mu0=0.0,
            sigma0_sq=self.sigma0_sq,
            mu1=self.mu1_at(n, nu),
            sigma1_sq=self.sigma1_sq_at(n),
        )


@dataclass(frozen=True)
class UTermReport:
    """U of the RE/ARE bridge formula with its two contributions."""

    u: float
    quantile_part: float
    remainder_part: float


@dataclass(frozen=True)
class REAREReport:
    """Relative efficiency together with the terms of the RE/ARE bridge formula."""

    n_a: float
    n_b: float
    re: float
    are: float | None = None
    u: float | None = None
    variance_ratio: float | None = None
    rhs: float | None = None
    u_quantile_part: float | None = None
    u_remainder_part: float | None = None
    fractional: bool = False


@dataclass(frozen=True)
class ConvergenceRecord:
    """One row of an RE-vs-ARE sweep; NaN sizes mark a failed grid point."""

    n_a: float
    n_b: float
    mu1: float
    sigma1_sq: float
    re: float
    are: float
    u: float
    rhs: float
    relative_gap: float

    @property
    def failed(self) -> bool:
        return math.isnan(self.re)


@dataclass(frozen=True)
class MCConfig:
    """Monte Carlo settings; estimates do not depend on batch_size."""

    trials: int = 100_000
    seed: int = 20240521
    batch_size: int = 500

    def __post_init__(self) -> None:
        validate_mc_config(self)


@dataclass(frozen=True)
class MCEstimate:
    """Binomial proportion estimate with a 99% normal-approximation interval."""

    estimate: float
    stderr: float
    ci_low: float
    ci_high: float
    trials: int


@dataclass(frozen=True)
class MomentAudit:
    """Simulated vs. closed-form moments of one scaled statistic."""

    formula_mean: float
    formula_var: float
    exact_mean: float
    exact_var: float
    sample_mean: float
    sample_var: float
    mean_stderr: float
    var_stderr: float
    max_cdf_gap: float

    @property
    def mean_gap_sd(self) -> float:
        """|sample mean - formula mean| in units of the formula sd."""
        return abs(self.sample_mean - self.formula_mean) / math.sqrt(self.formula_var)

    @property
    def var_gap_rel(self) -> float:
        return abs(self.sample_var - self.formula_var) / self.formula_var

    @property
    def mean_z(self) -> float:
        """Formula mean gap in standard errors of the sample mean."""
        return abs(self.sample_mean - self.formula_mean) / self.mean_stderr

    @property
    def var_z(self) -> float:
        return abs(self.sample_var - self.formula_var) / self.var_stderr

    @property
    def exact_mean_z(self) -> float:
        return abs(self.sample_mean - self.exact_mean) / self.mean_stderr

    @property
    def exact_var_z(self) -> float:
        return abs(self.sample_var - self.exact_var) / self.var_stderr


@dataclass(frozen=True)
class ApproximationAuditReport:
    """Audit of the chi-square-plus-Gaussian decomposition at one N."""

    n: int
    trials: int
    h0: MomentAudit
    h1: MomentAudit

    @property
    def max_cdf_gap(self) -> float:
        return max(self.h0.max_cdf_gap, self.h1.max_cdf_gap)


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs."""

    command: Command
    mu0: float = 0.0
    sigma0_sq: float = 1.0
    mu1: float = 0.0
    sigma1_sq: float = 1.0
    detector_a: str = "np"
    detector_b: str = "energy"
    alpha: float = 0.1
    beta: float = 0.9
    n: int | None = None
    n_grid: tuple[int, ...] = ()
    n_max: int = 10_000_000
    c_mu: float = 0.5
    c_var: float = 1.0
    var_exponent: float = 0.0
    mu_exponent: float | None = None
    fractional: bool = False
    trials: int = 100_000
    seed: int = 20240521
    batch_size: int = 500
    output_path: str | None = None
    output_format: OutputFormat | None = None

    def model(self) -> GaussianSignalModel:
        return GaussianSignalModel(
            mu0=self.mu0,
            sigma0_sq=self.sigma0_sq,
            mu1=self.mu1,
            sigma1_sq=self.sigma1_sq,
        )
