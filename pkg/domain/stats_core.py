"""
Scalar statistical and numerical primitives.

Normal CDF/quantile/Q function (scalars or numpy arrays), the Gaussian limit
of the noncentral chi-square distribution, and central finite differences
with Richardson extrapolation and derivative-order detection.
"""

import logging
import math
from typing import Callable, Sequence

import numpy as np
from scipy import special

from domain.exceptions import DomainError, NoNonzeroDerivativeError, NumericError
from domain.models import DiffConfig
from domain.validators import MAX_DERIVATIVE_ORDER

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Acklam's rational approximation to the normal quantile
_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)
_P_LOW = 0.02425
_NEWTON_STEPS = 2

# Step growth per derivative order; higher orders divide by h**k.
_ORDER_STEP_SCALE = {1: 1.0, 2: 10.0, 3: 30.0, 4: 60.0}


def _as_finite_array(x, operation: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{operation} requires finite input", operation=operation)
    return arr


def _unwrap(result: np.ndarray, original):
    if np.ndim(original) == 0:
        return float(result)
    return result


def normal_pdf(x):
    """Standard normal density."""
    arr = np.asarray(x, dtype=float)
    return _unwrap(INV_SQRT_2PI * np.exp(-0.5 * arr * arr), x)


def _cdf(arr: np.ndarray) -> np.ndarray:
    # One erfc pass; relative accuracy holds in the lower tail.
    return 0.5 * special.erfc(-arr / SQRT2)


def normal_cdf(x):
    """
    Standard normal CDF Phi(x).

    Args:
        x: Finite real or array of reals.

    Returns:
        Phi(x), as a float for scalar input.

    Raises:
        DomainError: If any input is NaN or infinite.
    """
    arr = _as_finite_array(x, "normal_cdf")
    return _unwrap(_cdf(arr), x)


def q_function(x):
    """Upper-tail probability Q(x) = 1 - Phi(x), accurate far into the upper tail."""
    arr = _as_finite_array(x, "q_function")
    return _unwrap(_cdf(-arr), x)


def _rational_lower(p: np.ndarray) -> np.ndarray:
    """Acklam's initial guess for p <= 0.5."""
    guess = np.empty_like(p)

    low = p < _P_LOW
    if np.any(low):
        q = np.sqrt(-2.0 * np.log(p[low]))
        guess[low] = (
            ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        ) / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)

    mid = ~low
    if np.any(mid):
        q = p[mid] - 0.5
        r = q * q
        guess[mid] = (
            (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5])
            * q
            / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
        )

    return guess


def normal_quantile(p):
    """
    Standard normal quantile Phi^{-1}(p).

    Rational initial guess refined by two Newton steps on normal_cdf. Upper
    probabilities are reflected onto the lower half, where 1 - p is exact.

    Raises:
        DomainError: If p is not strictly inside (0, 1).
    """
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError(
            "normal_quantile requires 0 < p < 1", operation="normal_quantile"
        )

    upper = arr > 0.5
    lower_p = np.where(upper, 1.0 - arr, arr)

    x = _rational_lower(lower_p)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        for _ in range(_NEWTON_STEPS):
            density = normal_pdf(x)
            step = (_cdf(x) - lower_p) / density
            x = np.where(density > 0.0, x - step, x)

    return _unwrap(np.where(upper, -x, x), p)


def q_inverse(alpha):
    """Q^{-1}(alpha) = Phi^{-1}(1 - alpha), computed without forming 1 - alpha."""
    return -normal_quantile(alpha)


def noncentral_chi2_normal_approx(dof: int, lam: float) -> tuple[float, float]:
    """
    Gaussian limit of a noncentral chi-square distribution.

    Args:
        dof: Degrees of freedom (>= 1).
        lam: Noncentrality parameter (>= 0).

    Returns:
        (mean, variance) = (dof + lam, 2 * (dof + 2 * lam)).
    """
    if int(dof) != dof or dof < 1:
        raise DomainError(
            f"dof must be a positive integer, got {dof}",
            operation="noncentral_chi2_normal_approx",
        )
    if not math.isfinite(lam) or lam < 0:
        raise DomainError(
            f"lambda must be a finite nonnegative number, got {lam}",
            operation="noncentral_chi2_normal_approx",
        )

    return dof + lam, 2.0 * (dof + 2.0 * lam)


def _evaluate(f: Callable[[float], float], x: float) -> float:
    value = float(f(x))
    if not math.isfinite(value):
        raise NumericError(f"non-finite function value at x={x!r}", abscissa=x)
    return value


def _central_difference(
    f: Callable[[float], float], x0: float, order: int, h: float
) -> float:
    """k-th central difference; odd orders use half-steps so the error is even in h."""
    total = 0.0
    for i in range(order + 1):
        weight = (-1) ** i * math.comb(order, i)
        total += weight * _evaluate(f, x0 + (order / 2.0 - i) * h)
    return total / h**order


def richardson_extrapolate(values: Sequence[float], p: int = 2, r: float = 2.0) -> float:
    """
    Richardson extrapolation of approximations with step reduced by r each time.

    Successive passes cancel error terms of order h**p, h**(2p), ...
    """
    vals = [float(v) for v in values]
    n = len(vals)
    if n < 2:
        raise ValueError("richardson_extrapolate requires at least two values.")

    for j in range(1, n):
        factor = r ** (p * j)
        for k in range(n - 1, j - 1, -1):
            vals[k] = (factor * vals[k] - vals[k - 1]) / (factor - 1.0)

    return vals[-1]


def derivative_at(
    f: Callable[[float], float],
    x0: float,
    order: int,
    cfg: DiffConfig = DiffConfig(),
) -> float:
    """
    Estimate the order-th derivative of f at x0.

    Central differences at steps h, h/2, ..., combined by Richardson
    extrapolation (central-difference errors are even in h).

    Args:
        f: Real function, evaluable in a neighbourhood of x0.
        x0: Expansion point.
        order: Derivative order in {1, 2, 3, 4}.
        cfg: Step and extrapolation settings.

    Raises:
        DomainError: If order is outside {1, ..., 4}.
        NumericError: If f returns a non-finite value (carries the abscissa).
    """
    if order not in _ORDER_STEP_SCALE:
        raise DomainError(
            f"derivative order must be in 1..{MAX_DERIVATIVE_ORDER}, got {order}",
            operation="derivative_at",
        )

    step = cfg.base_step * max(1.0, abs(x0)) * _ORDER_STEP_SCALE[order]
    estimates = [
        _central_difference(f, x0, order, step / 2.0**level)
        for level in range(cfg.richardson_levels)
    ]

    if len(estimates) == 1:
        return estimates[0]
    return richardson_extrapolate(estimates, p=2, r=2.0)


def smallest_nonzero_derivative_order(
    f: Callable[[float], float],
    x0: float,
    max_order: int = MAX_DERIVATIVE_ORDER,
    cfg: DiffConfig = DiffConfig(),
) -> tuple[int, float]:
    """
    Find the smallest order whose derivative at x0 is nonzero.

    A derivative counts as zero when its magnitude is at most
    zero_tolerance * max(1, |f(x0)|).

    Returns:
        (nu, derivative value).

    Raises:
        NoNonzeroDerivativeError: If all orders up to max_order vanish.
    """
    if max_order < 1 or max_order > MAX_DERIVATIVE_ORDER:
        raise DomainError(
            f"max_order must be in 1..{MAX_DERIVATIVE_ORDER}, got {max_order}",
            operation="smallest_nonzero_derivative_order",
        )

    scale = max(1.0, abs(_evaluate(f, x0)))
    threshold = cfg.zero_tolerance * scale

    for order in range(1, max_order + 1):
        value = derivative_at(f, x0, order, cfg)
        logger.debug(f"Derivative of order {order} at {x0}: {value!r}")
        if abs(value) > threshold:
            return order, value

    raise NoNonzeroDerivativeError(
        f"no nonzero derivative up to order {max_order} at x0={x0}",
        max_order=max_order,
    )
