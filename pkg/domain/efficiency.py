"""
Efficacy, ARE, finite-sample RE and the RE/ARE bridge formula.

Efficacy measures how fast the H1 mean of a statistic leaves its H0 value as
the signal mean s grows, in units of the H0 standard deviation:

    sqrt(xi) = (d^nu mean_h1 / ds^nu at s=0) / (sqrt(N) * sd_h0)

The bridge formula links the finite-sample relative efficiency to ARE:

    RE = variance_ratio * ARE / (1 - U)^2
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

from scipy import optimize

from domain.detector_perf import pd_closed_form
from domain.exceptions import (
    DetectionError,
    DomainError,
    EfficacyInstabilityError,
    IncomparableOrdersError,
    SampleSizeExceededError,
)
from domain.models import (
    ConvergenceRecord,
    DetectorSpec,
    DiffConfig,
    EfficacyReport,
    GaussianSignalModel,
    OperatingPoint,
    REAREReport,
    ScalingSchedule,
    UTermReport,
)
from domain.stats_core import derivative_at, q_inverse, smallest_nonzero_derivative_order
from domain.validators import MAX_DERIVATIVE_ORDER, validate_grid
from utils.search import smallest_satisfying

logger = logging.getLogger(__name__)

DEFAULT_EFFICACY_N = 100_000
DEFAULT_N_MAX = 10_000_000
STABILITY_TOLERANCE = 0.01
CONTINUOUS_XTOL = 1e-10


def h1_mean_as_function_of_s(
    detector: DetectorSpec, model_template: GaussianSignalModel, n: float
) -> Callable[[float], float]:
    """s -> mean_h1(n, model with mu1 = s); delta follows s through the model."""

    def mean_at(s: float) -> float:
        return detector.mean_h1(n, model_template.with_mu1(s))

    return mean_at


def _efficacy_at(
    detector: DetectorSpec, model_template: GaussianSignalModel, n: int, cfg: DiffConfig
) -> tuple[int, float, float]:
    mean_fn = h1_mean_as_function_of_s(detector, model_template, n)
    nu, derivative = smallest_nonzero_derivative_order(
        mean_fn, 0.0, MAX_DERIVATIVE_ORDER, cfg
    )
    sd_h0 = math.sqrt(detector.var_h0(n, model_template.with_mu1(0.0)))
    return nu, derivative, derivative / (math.sqrt(n) * sd_h0)


def efficacy(
    detector: DetectorSpec,
    model_template: GaussianSignalModel,
    n: int = DEFAULT_EFFICACY_N,
    cfg: DiffConfig = DiffConfig(),
) -> EfficacyReport:
    """
    Derivative order nu and square-root efficacy of a detector.

    The limit over N is taken at a single N and checked against 2N.

    Raises:
        NoNonzeroDerivativeError: If the H1 mean is flat up to order 4.
        EfficacyInstabilityError: If nu or sqrt(xi) changes between N and 2N.
    """
    if n < 1:
        raise DomainError(f"efficacy needs a positive N, got {n}", operation="efficacy")

    nu, derivative, sqrt_xi = _efficacy_at(detector, model_template, n, cfg)
    nu_2n, _, sqrt_xi_2n = _efficacy_at(detector, model_template, 2 * n, cfg)

    if nu != nu_2n:
        raise EfficacyInstabilityError(
            f"{detector.name}: derivative order changes from {nu} at N={n} "
            f"to {nu_2n} at N={2 * n}",
            values=(sqrt_xi, sqrt_xi_2n),
        )

    if abs(sqrt_xi_2n - sqrt_xi) >= STABILITY_TOLERANCE * abs(sqrt_xi):
        raise EfficacyInstabilityError(
            f"{detector.name}: efficacy not stable under doubling N "
            f"({sqrt_xi!r} vs {sqrt_xi_2n!r})",
            values=(sqrt_xi, sqrt_xi_2n),
        )

    logger.debug(f"Efficacy of {detector.name}: nu={nu}, sqrt_xi={sqrt_xi!r}")
    return EfficacyReport(
        nu=nu, derivative=derivative / n, sqrt_efficacy=sqrt_xi, n_used=n
    )


def are_from_reports(report_a: EfficacyReport, report_b: EfficacyReport) -> float:
    if report_a.nu != report_b.nu:
        raise IncomparableOrdersError(report_a.nu, report_b.nu)
    return (report_a.sqrt_efficacy / report_b.sqrt_efficacy) ** 2


def are(
    det_a: DetectorSpec,
    det_b: DetectorSpec,
    model_template: GaussianSignalModel,
    n: int = DEFAULT_EFFICACY_N,
    cfg: DiffConfig = DiffConfig(),
) -> float:
    """
    Asymptotic relative efficiency xi_A / xi_B.

    Raises:
        IncomparableOrdersError: If the detectors have different nu.
    """
    return are_from_reports(
        efficacy(det_a, model_template, n, cfg),
        efficacy(det_b, model_template, n, cfg),
    )


def _pd_reaches(
    detector: DetectorSpec, model: GaussianSignalModel, op_point: OperatingPoint
) -> Callable[[float], bool]:
    def reaches(n: float) -> bool:
        return pd_closed_form(model, detector, n, op_point.alpha) >= op_point.beta

    return reaches


def required_sample_size(
    detector: DetectorSpec,
    model: GaussianSignalModel,
    op_point: OperatingPoint,
    n_max: int = DEFAULT_N_MAX,
) -> int:
    """
    Smallest integer N <= n_max with P_D(N) >= beta at P_F = alpha.

    Raises:
        SampleSizeExceededError: If P_D stays below beta up to n_max.
    """
    n = smallest_satisfying(_pd_reaches(detector, model, op_point), upper_limit=n_max)
    if n is None:
        pd_at_max = pd_closed_form(model, detector, n_max, op_point.alpha)
        raise SampleSizeExceededError(n_max, pd_at_max)
    return n


def required_sample_size_continuous(
    detector: DetectorSpec,
    model: GaussianSignalModel,
    op_point: OperatingPoint,
    n_max: int = DEFAULT_N_MAX,
) -> float:
    """
    Fractional N at which P_D(N) crosses beta, using the moment maps at real N.

    Lies in (N_int - 1, N_int] where N_int is required_sample_size.
    """
    n_int = required_sample_size(detector, model, op_point, n_max)

    def excess(n: float) -> float:
        return pd_closed_form(model, detector, n, op_point.alpha) - op_point.beta

    lower = float(n_int - 1) if n_int > 1 else 1e-9
    if excess(lower) >= 0:
        return lower

    return float(optimize.brentq(excess, lower, float(n_int), xtol=CONTINUOUS_XTOL))


def relative_efficiency(
    det_a: DetectorSpec,
    det_b: DetectorSpec,
    model: GaussianSignalModel,
    op_point: OperatingPoint,
    n_max: int = DEFAULT_N_MAX,
    fractional: bool = False,
) -> REAREReport:
    """RE = N_B / N_A at a common operating point."""
    search = required_sample_size_continuous if fractional else required_sample_size
    n_a = search(det_a, model, op_point, n_max)
    n_b = search(det_b, model, op_point, n_max)

    return REAREReport(n_a=n_a, n_b=n_b, re=n_b / n_a, fractional=fractional)


def taylor_remainder(
    detector: DetectorSpec,
    model_template: GaussianSignalModel,
    n: float,
    s: float,
    nu: int,
    cfg: DiffConfig = DiffConfig(),
) -> float:
    """H1 mean at s minus its Taylor polynomial up to the first nonzero order nu."""
    mean_fn = h1_mean_as_function_of_s(detector, model_template, n)
    leading = derivative_at(mean_fn, 0.0, nu, cfg)
    return mean_fn(s) - mean_fn(0.0) - s**nu / math.factorial(nu) * leading


def _sd_ratio(detector: DetectorSpec, model: GaussianSignalModel, n: float) -> tuple[float, float]:
    """(sd_h0 / sd_h1, sd_h1)."""
    sd_h0 = math.sqrt(detector.var_h0(n, model))
    sd_h1 = math.sqrt(detector.var_h1(n, model))
    if not (sd_h0 > 0 and sd_h1 > 0):
        raise DomainError("standard deviations must be positive", operation="u_term")
    return sd_h0 / sd_h1, sd_h1


def u_term_report(
    det_a: DetectorSpec,
    det_b: DetectorSpec,
    model_a: GaussianSignalModel,
    model_b: GaussianSignalModel,
    n_a: float,
    n_b: float,
    alpha: float,
    s: float,
    nu: int,
    cfg: DiffConfig = DiffConfig(),
    efficacy_n: int = DEFAULT_EFFICACY_N,
) -> UTermReport:
    """
    U of the bridge formula split into its quantile and remainder contributions.

    Raises:
        DomainError: If s == 0.
    """
    if s == 0:
        raise DomainError("U is undefined at s = 0", operation="u_term")

    ratio_a, sd_h1_a = _sd_ratio(det_a, model_a, n_a)
    ratio_b, sd_h1_b = _sd_ratio(det_b, model_b, n_b)
    remainder_a = taylor_remainder(det_a, model_a, n_a, s, nu, cfg)
    remainder_b = taylor_remainder(det_b, model_b, n_b, s, nu, cfg)

    sqrt_xi_b = efficacy(det_b, model_b, efficacy_n, cfg).sqrt_efficacy
    scale = math.factorial(nu) / s**nu
    denominator = sqrt_xi_b * ratio_b * math.sqrt(n_b)

    quantile_part = scale * q_inverse(alpha) * (ratio_b - ratio_a) / denominator
    remainder_part = scale * (remainder_a / sd_h1_a - remainder_b / sd_h1_b) / denominator

    return UTermReport(
        u=quantile_part + remainder_part,
        quantile_part=quantile_part,
        remainder_part=remainder_part,
    )


def u_term(
    det_a: DetectorSpec,
    det_b: DetectorSpec,
    model_a: GaussianSignalModel,
    model_b: GaussianSignalModel,
    n_a: float,
    n_b: float,
    alpha: float,
    s: float,
    nu: int,
    cfg: DiffConfig = DiffConfig(),
) -> float:
    return u_term_report(det_a, det_b, model_a, model_b, n_a, n_b, alpha, s, nu, cfg).u


def variance_ratio(
    det_a: DetectorSpec,
    det_b: DetectorSpec,
    model_a: GaussianSignalModel,
    model_b: GaussianSignalModel,
    n_a: float,
    n_b: float,
) -> float:
    """(var_h1_B / var_h0_B) / (var_h1_A / var_h0_A)."""
    ratio_b = det_b.var_h1(n_b, model_b) / det_b.var_h0(n_b, model_b)
    ratio_a = det_a.var_h1(n_a, model_a) / det_a.var_h0(n_a, model_a)
    return ratio_b / ratio_a


def re_are_rhs(variance_ratio: float, are: float, u: float) -> float:
    """
    Right-hand side of the bridge formula.

    Raises:
        DomainError: If u >= 1.
    """
    if not u < 1:
        raise DomainError(f"bridge formula needs U < 1, got {u}", operation="re_are_rhs")
    return variance_ratio * are / (1.0 - u) ** 2


def re_are_report(
    det_a: DetectorSpec,
    det_b: DetectorSpec,
    model: GaussianSignalModel,
    op_point: OperatingPoint,
    n_max: int = DEFAULT_N_MAX,
    cfg: DiffConfig = DiffConfig(),
    efficacy_n: int = DEFAULT_EFFICACY_N,
    fractional: bool = False,
) -> REAREReport:
    """
    RE together with ARE, U and the bridge-formula right-hand side.

    U is evaluated at s = mu1; with mu1 = 0 only the RE and ARE are reported.
    """
    sizes = relative_efficiency(det_a, det_b, model, op_point, n_max, fractional)
    report_a = efficacy(det_a, model, efficacy_n, cfg)
    are_value = are_from_reports(report_a, efficacy(det_b, model, efficacy_n, cfg))

    if model.mu1 == 0:
        logger.warning("mu1 = 0: U and the bridge right-hand side are undefined")
        return REAREReport(
            n_a=sizes.n_a, n_b=sizes.n_b, re=sizes.re, are=are_value, fractional=fractional
        )

    u_report = u_term_report(
        det_a, det_b, model, model, sizes.n_a, sizes.n_b,
        op_point.alpha, model.mu1, report_a.nu, cfg, efficacy_n,
    )
    ratio = variance_ratio(det_a, det_b, model, model, sizes.n_a, sizes.n_b)

    return REAREReport(
        n_a=sizes.n_a,
        n_b=sizes.n_b,
        re=sizes.re,
        are=are_value,
        u=u_report.u,
        variance_ratio=ratio,
        rhs=re_are_rhs(ratio, are_value, u_report.u),
        u_quantile_part=u_report.quantile_part,
        u_remainder_part=u_report.remainder_part,
        fractional=fractional,
    )


def _failed_record(mu1: float, sigma1_sq: float) -> ConvergenceRecord:
    nan = math.nan
    return ConvergenceRecord(
        n_a=nan, n_b=nan, mu1=mu1, sigma1_sq=sigma1_sq,
        re=nan, are=nan, u=nan, rhs=nan, relative_gap=nan,
    )


def _sweep_point(
    det_a: DetectorSpec,
    det_b: DetectorSpec,
    schedule: ScalingSchedule,
    op_point: OperatingPoint,
    n: int,
    cfg: DiffConfig,
    n_max: int,
    efficacy_n: int,
    fractional: bool,
) -> ConvergenceRecord:
    sigma1_sq = schedule.sigma1_sq_at(n)
    mu1 = math.nan

    try:
        template = GaussianSignalModel(
            mu0=0.0, sigma0_sq=schedule.sigma0_sq, mu1=0.0, sigma1_sq=sigma1_sq
        )
        nu = efficacy(det_a, template, efficacy_n, cfg).nu
        model = schedule.model_at(n, nu)
        mu1 = model.mu1
        report = re_are_report(
            det_a, det_b, model, op_point, n_max, cfg, efficacy_n, fractional,
        )
        if report.rhs is None:
            raise DomainError("bridge formula undefined at mu1 = 0", operation="convergence_sweep")
    except DetectionError as e:
        logger.warning(f"Grid point N={n} failed: {e}")
        return _failed_record(mu1, sigma1_sq)

    return ConvergenceRecord(
        n_a=float(report.n_a),
        n_b=float(report.n_b),
        mu1=mu1,
        sigma1_sq=sigma1_sq,
        re=report.re,
        are=report.are,
        u=report.u,
        rhs=report.rhs,
        relative_gap=abs(report.re - report.rhs) / report.rhs,
    )


def gap_trend(records: Sequence[ConvergenceRecord]) -> bool:
    """True when relative gaps of the successful records never increase along the grid."""
    gaps = [r.relative_gap for r in records if not r.failed]
    return all(later <= earlier for earlier, later in zip(gaps, gaps[1:]))


def convergence_sweep(
    det_a: DetectorSpec,
    det_b: DetectorSpec,
    schedule: ScalingSchedule,
    alpha: float,
    beta: float,
    n_grid: Sequence[int],
    cfg: DiffConfig = DiffConfig(),
    n_max: int = DEFAULT_N_MAX,
    efficacy_n: int = DEFAULT_EFFICACY_N,
    fractional: bool = False,
    max_workers: int = 1,
) -> list[ConvergenceRecord]:
    """
    RE, ARE, U and bridge right-hand side along a scaling schedule.

    Grid point N sets mu1 and sigma1_sq from the schedule; sizes are then
    searched at the fixed (alpha, beta). Failed points become NaN records.
    Records follow grid order.
    """
    validate_grid(n_grid)
    op_point = OperatingPoint(alpha=alpha, beta=beta)

    def run(n: int) -> ConvergenceRecord:
        return _sweep_point(
            det_a, det_b, schedule, op_point, n, cfg, n_max, efficacy_n, fractional
        )

    logger.info(
        f"Sweeping {det_a.name} vs {det_b.name} over {len(n_grid)} grid points"
    )
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            records = list(executor.map(run, n_grid))
    else:
        records = [run(n) for n in n_grid]

    if not gap_trend(records):
        logger.warning("Relative gap |RE - RHS| / RHS increases somewhere along the grid")

    return records
