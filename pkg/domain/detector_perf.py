"""
Detector performance: built-in detectors, thresholds, P_F and P_D.

Every detector is a DetectorSpec whose statistic is asymptotically Gaussian
with the closed-form moments attached to it. Performance follows from the
Gaussian approximation:

    P_D = 1 - Phi((sd_h0 / sd_h1) * Phi^{-1}(1 - alpha) - (mean_h1 - mean_h0) / sd_h1)
"""

import logging
import math
from typing import Iterable

from domain.exceptions import DomainError
from domain.models import DetectorSpec, GaussianSignalModel, GeneralMomentsReport
from domain.signal_model import delta, sample_sum, test_statistic
from domain.stats_core import normal_cdf, q_function, q_inverse
from domain.validators import validate_probability

logger = logging.getLogger(__name__)

NP_DETECTOR_NAME = "np"


def _require_zero_noise_mean(model: GaussianSignalModel, operation: str) -> None:
    if model.mu0 != 0.0:
        raise DomainError(
            f"{operation} assumes zero-mean noise, got mu0={model.mu0}; "
            "use the general-mu0 variant",
            operation=operation,
        )


def _require_positive_n(n: float, operation: str) -> None:
    if not n > 0:
        raise DomainError(f"sample size must be positive, got {n}", operation=operation)


def _quadratic_moments(n: float, mean: float, var: float, weight: float) -> tuple[float, float]:
    """
    Exact mean and variance of sum(x^2) + weight * sum(x) for n i.i.d. N(mean, var).

    Uses E[x^2] = var + mean^2, Var(x^2) = 2var^2 + 4mean^2 var and
    Cov(x^2, x) = 2 mean var.
    """
    first = n * (var + mean**2 + weight * mean)
    second = n * (2.0 * var**2 + 4.0 * mean**2 * var + weight**2 * var + 4.0 * weight * mean * var)
    return first, second


# Likelihood-ratio detector with the closed-form moments used for its
# threshold. The H1 moments drop the covariance of sum x^2 and sum x, so
# they are exact only at mu1 = 0.


def _np_mean_h0(n: float, model: GaussianSignalModel) -> float:
    _require_zero_noise_mean(model, "np.mean_h0")
    return n * model.sigma0_sq


def _np_var_h0(n: float, model: GaussianSignalModel) -> float:
    _require_zero_noise_mean(model, "np.var_h0")
    d = delta(model)
    return model.sigma0_sq**2 * (2.0 * n + n * d**2 / model.sigma0_sq)


def _np_mean_h1(n: float, model: GaussianSignalModel) -> float:
    _require_zero_noise_mean(model, "np.mean_h1")
    d = delta(model)
    s2 = model.total_var
    return s2 * (n + n * model.mu1**2 + n * model.mu1 * d / s2)


def _np_var_h1(n: float, model: GaussianSignalModel) -> float:
    _require_zero_noise_mean(model, "np.var_h1")
    d = delta(model)
    s2 = model.total_var
    return s2**2 * (2.0 * (n + 2.0 * n * model.mu1**2) + n * d**2 / s2)


def _np_statistic(x, model: GaussianSignalModel):
    return test_statistic(x, delta(model))


def np_random_signal_detector() -> DetectorSpec:
    """Optimal (likelihood-ratio) detector for the Gaussian random signal."""
    return DetectorSpec(
        name=NP_DETECTOR_NAME,
        statistic=_np_statistic,
        mean_h0=_np_mean_h0,
        mean_h1=_np_mean_h1,
        var_h0=_np_var_h0,
        var_h1=_np_var_h1,
        description="Neyman-Pearson detector, sum x^2 + delta * sum x",
    )


def _np_exact_h0(n: float, model: GaussianSignalModel) -> tuple[float, float]:
    return _quadratic_moments(n, model.mu0, model.sigma0_sq, delta(model))


def _np_exact_h1(n: float, model: GaussianSignalModel) -> tuple[float, float]:
    return _quadratic_moments(n, model.mu0 + model.mu1, model.total_var, delta(model))


def np_exact_detector() -> DetectorSpec:
    """Likelihood-ratio statistic with exact moments for any (mu0, sigma0_sq, mu1, sigma1_sq)."""
    return DetectorSpec(
        name="np-exact",
        statistic=_np_statistic,
        mean_h0=lambda n, m: _np_exact_h0(n, m)[0],
        mean_h1=lambda n, m: _np_exact_h1(n, m)[0],
        var_h0=lambda n, m: _np_exact_h0(n, m)[1],
        var_h1=lambda n, m: _np_exact_h1(n, m)[1],
        description="Neyman-Pearson statistic with exact moments",
    )


def _energy_h0(n: float, model: GaussianSignalModel) -> tuple[float, float]:
    return _quadratic_moments(n, model.mu0, model.sigma0_sq, 0.0)


def _energy_h1(n: float, model: GaussianSignalModel) -> tuple[float, float]:
    return _quadratic_moments(n, model.mu0 + model.mu1, model.total_var, 0.0)


def _energy_statistic(x, model: GaussianSignalModel):
    return test_statistic(x, 0.0)


def energy_detector() -> DetectorSpec:
    """Energy detector, sum x^2."""
    return DetectorSpec(
        name="energy",
        statistic=_energy_statistic,
        mean_h0=lambda n, m: _energy_h0(n, m)[0],
        mean_h1=lambda n, m: _energy_h1(n, m)[0],
        var_h0=lambda n, m: _energy_h0(n, m)[1],
        var_h1=lambda n, m: _energy_h1(n, m)[1],
        description="Energy detector, sum x^2",
    )


def _linear_statistic(x, model: GaussianSignalModel):
    return sample_sum(x)


def linear_detector() -> DetectorSpec:
    """Sample-sum detector, sum x."""
    return DetectorSpec(
        name="linear",
        statistic=_linear_statistic,
        mean_h0=lambda n, m: n * m.mu0,
        mean_h1=lambda n, m: n * (m.mu0 + m.mu1),
        var_h0=lambda n, m: n * m.sigma0_sq,
        var_h1=lambda n, m: n * m.total_var,
        description="Linear detector, sum x",
    )


def general_mu0_moments(model: GaussianSignalModel, n: float) -> GeneralMomentsReport:
    """
    Closed-form standardization constants of the likelihood-ratio statistic.

    h0_* describe T/sigma0_sq under H0 and h1_* describe
    T/(sigma0_sq + sigma1_sq) under H1, for any mu0.
    """
    _require_positive_n(n, "general_mu0_moments")
    d = delta(model)
    s0 = model.sigma0_sq
    s2 = model.total_var
    m1 = model.mu0 + model.mu1

    return GeneralMomentsReport(
        h0_mean=n + n * model.mu0**2 + n * model.mu0 * d / s0,
        h0_var=2.0 * (n + 2.0 * n * model.mu0**2) + n * d**2 / s0,
        h1_mean=n + n * m1**2 + n * m1 * d / s2,
        h1_var=2.0 * (n + 2.0 * n * m1**2) + n * d**2 / s2,
    )


def exact_general_moments(model: GaussianSignalModel, n: float) -> GeneralMomentsReport:
    """Exact counterpart of general_mu0_moments on the same scaling."""
    _require_positive_n(n, "exact_general_moments")
    h0_mean, h0_var = _np_exact_h0(n, model)
    h1_mean, h1_var = _np_exact_h1(n, model)
    s0 = model.sigma0_sq
    s2 = model.total_var

    return GeneralMomentsReport(
        h0_mean=h0_mean / s0,
        h0_var=h0_var / s0**2,
        h1_mean=h1_mean / s2,
        h1_var=h1_var / s2**2,
    )


def threshold_for_pf_general(model: GaussianSignalModel, n: float, alpha: float) -> float:
    """
    Threshold gamma' on sigma0_sq*sigma1_sq*T with false-alarm probability alpha, any mu0.

    gamma' = sigma0_sq*sigma1_sq * (Q^{-1}(alpha) * sqrt(h0_var) + h0_mean)
    """
    validate_probability(alpha, "alpha")
    _require_positive_n(n, "threshold_for_pf")
    moments = general_mu0_moments(model, n)
    scale = model.sigma0_sq * model.sigma1_sq
    return scale * (q_inverse(alpha) * math.sqrt(moments.h0_var) + moments.h0_mean)


def threshold_for_pf(model: GaussianSignalModel, n: float, alpha: float) -> float:
    """
    Threshold gamma' for zero-mean noise.

    gamma' = sigma0_sq*sigma1_sq * (Q^{-1}(alpha) * sqrt(2N + N*delta^2/sigma0_sq) + N)

    Raises:
        DomainError: If mu0 != 0.
    """
    _require_zero_noise_mean(model, "threshold_for_pf")
    return threshold_for_pf_general(model, n, alpha)


def pf_of_gamma(model: GaussianSignalModel, n: float, gamma_prime: float) -> float:
    """Closed-form P_F of the likelihood-ratio test at threshold gamma'."""
    moments = general_mu0_moments(model, n)
    scaled = gamma_prime / (model.sigma0_sq * model.sigma1_sq)
    return q_function((scaled - moments.h0_mean) / math.sqrt(moments.h0_var))


def statistic_threshold(
    detector: DetectorSpec, model: GaussianSignalModel, n: float, alpha: float
) -> float:
    """Threshold on the raw statistic: mean_h0 + Q^{-1}(alpha) * sd_h0."""
    validate_probability(alpha, "alpha")
    _require_positive_n(n, "statistic_threshold")
    return detector.mean_h0(n, model) + q_inverse(alpha) * math.sqrt(detector.var_h0(n, model))


def pf_of_threshold(
    detector: DetectorSpec, model: GaussianSignalModel, n: float, threshold: float
) -> float:
    """Gaussian-approximation P_F of a raw-statistic threshold."""
    mean = detector.mean_h0(n, model)
    sd = math.sqrt(detector.var_h0(n, model))
    return q_function((threshold - mean) / sd)


def pd_generic(
    t_mu0: float, t_mu1: float, t_sigma0: float, t_sigma1: float, alpha: float
) -> float:
    """
    Detection probability of a Gaussian statistic at false-alarm rate alpha.

    Raises:
        DomainError: If either standard deviation is not positive.
    """
    validate_probability(alpha, "alpha")
    if not (t_sigma0 > 0 and t_sigma1 > 0):
        raise DomainError(
            f"standard deviations must be positive, got {t_sigma0}, {t_sigma1}",
            operation="pd_generic",
        )

    arg = (t_sigma0 / t_sigma1) * q_inverse(alpha) - (t_mu1 - t_mu0) / t_sigma1
    return q_function(arg)


def pd_closed_form(
    model: GaussianSignalModel, detector: DetectorSpec, n: float, alpha: float
) -> float:
    """P_D of a detector at N observations and false-alarm rate alpha."""
    _require_positive_n(n, "pd_closed_form")
    return pd_generic(
        detector.mean_h0(n, model),
        detector.mean_h1(n, model),
        math.sqrt(detector.var_h0(n, model)),
        math.sqrt(detector.var_h1(n, model)),
        alpha,
    )


def pd_np_explicit(model: GaussianSignalModel, n: float, alpha: float) -> float:
    """P_D of the likelihood-ratio detector written out in the model parameters (mu0 = 0)."""
    _require_zero_noise_mean(model, "pd_np_explicit")
    validate_probability(alpha, "alpha")
    d = delta(model)
    s0 = model.sigma0_sq
    s2 = model.total_var
    mu1 = model.mu1

    sd_h1 = s2 * math.sqrt(2.0 * (n + 2.0 * n * mu1**2) + n * d**2 / s2)
    arg = (
        s0 * math.sqrt(2.0 * n + n * d**2 / s0) * q_inverse(alpha) / sd_h1
        - (s2 * (n + n * mu1**2 + n * mu1 * d / s2) - n * s0) / sd_h1
    )
    return 1.0 - normal_cdf(arg)


def pd_general(model: GaussianSignalModel, n: float, alpha: float) -> float:
    """
    P_D of the likelihood-ratio test at gamma', any mu0.

    Under H1 the statistic is compared on the T/(sigma0_sq + sigma1_sq)
    scale, where the threshold is gamma'/(sigma1_sq*(sigma0_sq + sigma1_sq)).
    """
    gamma_prime = threshold_for_pf_general(model, n, alpha)
    moments = general_mu0_moments(model, n)
    scaled = gamma_prime / (model.sigma1_sq * model.total_var)
    return q_function((scaled - moments.h1_mean) / math.sqrt(moments.h1_var))


def closed_form_operating_point(
    detector: DetectorSpec, model: GaussianSignalModel, n: float, alpha: float
) -> tuple[float, float, float]:
    """
    Raw-statistic threshold at false-alarm rate alpha with its closed-form P_F and P_D.

    The np moment maps only cover mu0 = 0; with a noise mean the np detector
    falls back to gamma'/sigma1_sq and the general-mu0 constants.
    """
    if detector.name == NP_DETECTOR_NAME and model.mu0 != 0.0:
        gamma_prime = threshold_for_pf_general(model, n, alpha)
        return (
            gamma_prime / model.sigma1_sq,
            pf_of_gamma(model, n, gamma_prime),
            pd_general(model, n, alpha),
        )

    threshold = statistic_threshold(detector, model, n, alpha)
    return (
        threshold,
        pf_of_threshold(detector, model, n, threshold),
        pd_closed_form(model, detector, n, alpha),
    )


def roc_curve(
    model: GaussianSignalModel,
    detector: DetectorSpec,
    n: float,
    alphas: Iterable[float],
) -> list[tuple[float, float]]:
    """(alpha, P_D) pairs along a false-alarm grid."""
    curve = [(alpha, pd_closed_form(model, detector, n, alpha)) for alpha in alphas]
    logger.debug(f"ROC for {detector.name} at N={n}: {len(curve)} points")
    return curve
