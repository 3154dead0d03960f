"""
Monotone integer search.

Exponential bracketing followed by binary search for the smallest integer
at which a nondecreasing predicate becomes true.
"""

import logging
from typing import Callable

logger = logging.getLogger(__name__)


def smallest_satisfying(
    predicate: Callable[[int], bool],
    upper_limit: int,
    lower: int = 1,
) -> int | None:
    """
    Find the smallest n in [lower, upper_limit] with predicate(n) true.

    The predicate must be monotone (false ... false, true ... true).

    Args:
        predicate: Monotone test on integers.
        upper_limit: Largest n that may be examined.
        lower: Smallest candidate.

    Returns:
        The left-most n satisfying the predicate, or None when even
        upper_limit does not.
    """
    if upper_limit < lower:
        raise ValueError(f"upper_limit {upper_limit} is below lower {lower}")

    if predicate(lower):
        return lower

    # Bracket: predicate(low) is false, predicate(high) is true.
    low = lower
    high = lower * 2
    while True:
        if high >= upper_limit:
            high = upper_limit
            if not predicate(high):
                logger.debug(f"Predicate false up to the limit {upper_limit}")
                return None
            break
        if predicate(high):
            break
        low = high
        high *= 2

    while high - low > 1:
        mid = (low + high) // 2
        if predicate(mid):
            high = mid
        else:
            low = mid

    logger.debug(f"Smallest satisfying value: {high}")
    return high
