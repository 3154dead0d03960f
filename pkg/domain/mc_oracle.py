"""
Monte Carlo oracle.

Independent simulation checks of the closed-form quantities: empirical P_F
and P_D with 99% normal-approximation intervals, empirical required sample
size, and an audit of the moment formulas and the normal limit. Trials draw
from per-trial counter-based streams, so every estimate is a function of
(config, inputs) alone and does not depend on batch_size.
"""

import logging
import math
from functools import lru_cache

import numpy as np
from scipy import stats

from domain.detector_perf import (
    exact_general_moments,
    general_mu0_moments,
    np_random_signal_detector,
    statistic_threshold,
)
from domain.exceptions import DomainError, SampleSizeExceededError
from domain.models import (
    ApproximationAuditReport,
    DetectorSpec,
    GaussianSignalModel,
    GeneralMomentsReport,
    Hypothesis,
    MCConfig,
    MCEstimate,
    MomentAudit,
    OperatingPoint,
)
from domain.signal_model import simulate_trials
from domain.stats_core import normal_cdf, q_inverse
from utils.search import smallest_satisfying

logger = logging.getLogger(__name__)

CONFIDENCE = 0.99
Z_CONFIDENCE = q_inverse((1.0 - CONFIDENCE) / 2.0)

# Upper bound on simulated values held in memory at once.
MAX_CHUNK_VALUES = 2_000_000


def _binomial_estimate(hits: int, trials: int) -> MCEstimate:
    p = hits / trials
    stderr = math.sqrt(p * (1.0 - p) / trials)
    return MCEstimate(
        estimate=p,
        stderr=stderr,
        ci_low=max(0.0, p - Z_CONFIDENCE * stderr),
        ci_high=min(1.0, p + Z_CONFIDENCE * stderr),
        trials=trials,
    )


def simulate_statistic(
    detector: DetectorSpec,
    model: GaussianSignalModel,
    hypothesis: Hypothesis,
    n: int,
    cfg: MCConfig,
) -> np.ndarray:
    """Statistic value of every trial, in trial order."""
    rows_per_chunk = max(1, min(cfg.batch_size, MAX_CHUNK_VALUES // n))
    values = np.empty(cfg.trials)

    for start in range(0, cfg.trials, rows_per_chunk):
        stop = min(start + rows_per_chunk, cfg.trials)
        x = simulate_trials(model, hypothesis, n, cfg.seed, start, stop)
        values[start:stop] = detector.statistic(x, model)

    return values


def empirical_pf(
    model: GaussianSignalModel,
    detector: DetectorSpec,
    n: int,
    threshold: float,
    cfg: MCConfig = MCConfig(),
) -> MCEstimate:
    """Fraction of H0 trials whose statistic exceeds the raw-scale threshold."""
    values = simulate_statistic(detector, model, Hypothesis.H0, n, cfg)
    return _binomial_estimate(int(np.count_nonzero(values > threshold)), cfg.trials)


def empirical_pd(
    model: GaussianSignalModel,
    detector: DetectorSpec,
    n: int,
    threshold: float,
    cfg: MCConfig = MCConfig(),
) -> MCEstimate:
    """Fraction of H1 trials whose statistic exceeds the raw-scale threshold."""
    values = simulate_statistic(detector, model, Hypothesis.H1, n, cfg)
    return _binomial_estimate(int(np.count_nonzero(values > threshold)), cfg.trials)


def empirical_pf_pd(
    model: GaussianSignalModel,
    detector: DetectorSpec,
    n: int,
    threshold: float,
    cfg: MCConfig = MCConfig(),
) -> tuple[MCEstimate, MCEstimate]:
    return (
        empirical_pf(model, detector, n, threshold, cfg),
        empirical_pd(model, detector, n, threshold, cfg),
    )


def empirical_required_n(
    detector: DetectorSpec,
    model: GaussianSignalModel,
    op_point: OperatingPoint,
    cfg: MCConfig = MCConfig(),
    n_max: int = 10_000_000,
) -> int:
    """
    Smallest N whose simulated P_D reaches beta, with the threshold fixed by alpha.

    Raises:
        SampleSizeExceededError: If the target is not reached by n_max.
    """

    @lru_cache(maxsize=None)
    def pd_at(n: int) -> float:
        threshold = statistic_threshold(detector, model, n, op_point.alpha)
        estimate = empirical_pd(model, detector, n, threshold, cfg).estimate
        logger.debug(f"Empirical P_D of {detector.name} at N={n}: {estimate}")
        return estimate

    n = smallest_satisfying(lambda k: pd_at(k) >= op_point.beta, upper_limit=n_max)
    if n is None:
        raise SampleSizeExceededError(n_max, pd_at(n_max))
    return n


def _moment_audit(
    values: np.ndarray, formula: tuple[float, float], exact: tuple[float, float]
) -> MomentAudit:
    trials = values.size
    sample_mean = float(np.mean(values))
    sample_var = float(np.var(values, ddof=1))
    fourth = float(np.mean((values - sample_mean) ** 4))

    standardized = (values - sample_mean) / math.sqrt(sample_var)
    ks = stats.kstest(standardized, normal_cdf)

    return MomentAudit(
        formula_mean=formula[0],
        formula_var=formula[1],
        exact_mean=exact[0],
        exact_var=exact[1],
        sample_mean=sample_mean,
        sample_var=sample_var,
        mean_stderr=math.sqrt(sample_var / trials),
        var_stderr=math.sqrt(max(fourth - sample_var**2, 0.0) / trials),
        max_cdf_gap=float(ks.statistic),
    )


def approximation_audit(
    model: GaussianSignalModel, n: int, cfg: MCConfig = MCConfig()
) -> ApproximationAuditReport:
    """
    Simulate T/sigma0_sq under H0 and T/(sigma0_sq + sigma1_sq) under H1.

    Sample moments are compared with both the closed-form standardization
    constants and the exact moments. The CDF gap is the Kolmogorov distance
    to a normal fitted to the sample mean and variance.
    """
    if n < 2:
        raise DomainError(f"audit needs N >= 2, got {n}", operation="approximation_audit")

    detector = np_random_signal_detector()
    formula: GeneralMomentsReport = general_mu0_moments(model, n)
    exact: GeneralMomentsReport = exact_general_moments(model, n)

    h0 = simulate_statistic(detector, model, Hypothesis.H0, n, cfg) / model.sigma0_sq
    h1 = simulate_statistic(detector, model, Hypothesis.H1, n, cfg) / model.total_var

    report = ApproximationAuditReport(
        n=n,
        trials=cfg.trials,
        h0=_moment_audit(h0, (formula.h0_mean, formula.h0_var), (exact.h0_mean, exact.h0_var)),
        h1=_moment_audit(h1, (formula.h1_mean, formula.h1_var), (exact.h1_mean, exact.h1_var)),
    )
    logger.info(f"Approximation audit at N={n}: max CDF gap {report.max_cdf_gap:.4g}")
    return report
