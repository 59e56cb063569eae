"""Scalar helpers for evaluating printed closed-form expressions."""
from __future__ import annotations

import math

from .errors import DomainError

ROUNDING_SLACK = 1e-12


def xlog2(x: float) -> float:
    """``x log2 x`` with the convention ``0 log 0 = 0``.

    Arguments in ``[-1e-12, 0]`` are rounding residue and count as 0.
    """
    if x < -ROUNDING_SLACK:
        raise DomainError(f"logarithm of negative argument {x!r}")
    if x <= 0.0:
        return 0.0
    return x * math.log2(x)


def sqrt0(x: float) -> float:
    if x < -ROUNDING_SLACK:
        raise DomainError(f"square root of negative argument {x!r}")
    return math.sqrt(max(0.0, x))
