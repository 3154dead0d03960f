"""
Gaussian random-signal model.

Observations are x_i = w_i under H0 and x_i = w_i + s_i under H1, with
W ~ N(mu0, sigma0_sq) and S ~ N(mu1, sigma1_sq). The sampler is counter
based: every (seed, hypothesis, trial index) owns an independent Philox
stream, so a trial's draws never depend on how trials are batched.
"""

import logging
import math

import numpy as np

from domain.exceptions import DomainError
from domain.models import GaussianSignalModel, Hypothesis, SampleBatch
from domain.stats_core import normal_quantile
from domain.validators import validate_seed

logger = logging.getLogger(__name__)

_STREAMS = {Hypothesis.H0: 0, Hypothesis.H1: 1}
_MANTISSA_SHIFT = 11
_UNIT = 2.0**-53


def delta(model: GaussianSignalModel) -> float:
    """Linear weight of the likelihood-ratio statistic: 2(sigma1_sq*mu0 + sigma0_sq*mu1)/sigma1_sq."""
    return 2.0 * (model.sigma1_sq * model.mu0 + model.sigma0_sq * model.mu1) / model.sigma1_sq


def test_statistic(x, delta_value: float):
    """
    T(x) = sum x_i^2 + delta * sum x_i.

    Reduces over the last axis, so a (trials, N) matrix yields one value per
    trial.

    Raises:
        DomainError: On empty or non-finite input.
    """
    arr = np.asarray(x, dtype=float)
    if arr.size == 0 or arr.shape[-1] == 0:
        raise DomainError("test statistic needs at least one observation", operation="test_statistic")
    if not np.all(np.isfinite(arr)):
        raise DomainError("observations must be finite", operation="test_statistic")

    value = np.sum(arr * arr, axis=-1) + delta_value * np.sum(arr, axis=-1)
    if np.ndim(value) == 0:
        return float(value)
    return value


# Keep pytest from collecting the statistic as a test.
test_statistic.__test__ = False


def sample_sum(x):
    """sum x_i over the last axis, with the same input checks as test_statistic."""
    arr = np.asarray(x, dtype=float)
    if arr.size == 0 or arr.shape[-1] == 0:
        raise DomainError("sample sum needs at least one observation", operation="sample_sum")
    if not np.all(np.isfinite(arr)):
        raise DomainError("observations must be finite", operation="sample_sum")

    value = np.sum(arr, axis=-1)
    if np.ndim(value) == 0:
        return float(value)
    return value


def _bit_generator(seed: int, hypothesis: Hypothesis, index: int) -> np.random.Philox:
    key = (_STREAMS[hypothesis] << 64) | seed
    return np.random.Philox(key=key, counter=index << 192)


def uniform_draws(seed: int, hypothesis: Hypothesis, index: int, n: int) -> np.ndarray:
    """n uniforms strictly inside (0, 1) for one trial."""
    raw = _bit_generator(seed, hypothesis, index).random_raw(n)
    return ((raw >> np.uint64(_MANTISSA_SHIFT)).astype(np.float64) + 0.5) * _UNIT


def simulate_trials(
    model: GaussianSignalModel,
    hypothesis: Hypothesis,
    n: int,
    seed: int,
    start: int,
    stop: int,
) -> np.ndarray:
    """
    Observation matrix for trials start..stop-1, shape (stop - start, n).

    Row j depends only on (seed, hypothesis, start + j).
    """
    validate_seed(seed)
    if n < 1:
        raise DomainError(f"sample size must be positive, got {n}", operation="simulate_trials")
    if stop <= start or start < 0:
        raise DomainError(f"empty trial range [{start}, {stop})", operation="simulate_trials")

    uniforms = np.empty((stop - start, n))
    for row, index in enumerate(range(start, stop)):
        uniforms[row] = uniform_draws(seed, hypothesis, index, n)

    if hypothesis is Hypothesis.H0:
        mean, var = model.mu0, model.sigma0_sq
    else:
        mean, var = model.mu0 + model.mu1, model.total_var

    return mean + math.sqrt(var) * normal_quantile(uniforms)


def sample(
    model: GaussianSignalModel,
    hypothesis: Hypothesis,
    n: int,
    seed: int,
    index: int = 0,
) -> SampleBatch:
    """Draw N observations under one hypothesis; deterministic in (seed, hypothesis, index)."""
    values = simulate_trials(model, hypothesis, n, seed, index, index + 1)[0]
    return SampleBatch(values=values, hypothesis=hypothesis, seed=seed)
