import math
from typing import List, Sequence


def log2_ratio(err: float, prev: float) -> float:
    """Function to compute ``log2(err / prev)``, the rate between two levels of
    a refinement study (negative when the error decreases).

    Raises:
        DomainError: if any of the errors is not positive.
    """
    if not (err > 0 and prev > 0):
        raise DomainError('rates need positive errors: {}, {}'
            .format(prev, err))
    return math.log2(err / prev)


def observed_orders(errors: Sequence[float]) -> List[float]:
    """Function to get the observed orders of accuracy of a sequence of
    errors measured with the step halved each time, ``log2(e[i] / e[i+1])``.

    Args:
        errors (sequence): the errors, coarsest first.

    Returns:
        list: one order per refinement.
    """
    return [-log2_ratio(b, a) for a, b in zip(errors, errors[1:])]

from .errors import DomainError
