"""Pile heights: finite integers plus the two infinities.

A height is either a Python int or one of the float infinities.  The float
infinities compare correctly against ints (MINUS_INF < any int < PLUS_INF)
and absorb finite additions, which is exactly the arithmetic needed here.
Finite heights are kept within signed 64-bit range; crossing it raises.
"""

from __future__ import annotations

import math

Height = int | float

PLUS_INF: Height = math.inf
MINUS_INF: Height = -math.inf

_LIMIT = 2**63


def is_finite(h: Height) -> bool:
    return not isinstance(h, float)


def check_height(h: Height) -> Height:
    """Validate a height value (finite int in range, or an infinity)."""
    if isinstance(h, bool):
        raise TypeError("height must be an int or +/-inf")
    if isinstance(h, int):
        if not -_LIMIT <= h < _LIMIT:
            raise OverflowError(f"height {h} outside 64-bit range")
        return h
    if h == PLUS_INF or h == MINUS_INF:
        return h
    raise TypeError(f"not a height: {h!r}")


def add(h: Height, n: int) -> Height:
    """h + n with infinities absorbing and finite overflow checked."""
    if isinstance(h, float):
        return h
    v = h + n
    if not -_LIMIT <= v < _LIMIT:
        raise OverflowError(f"height overflow: {h} + {n}")
    return v


def format_height(h: Height) -> str:
    if h == PLUS_INF:
        return "+inf"
    if h == MINUS_INF:
        return "-inf"
    return str(h)


def parse_height(text: str) -> Height:
    if text == "+inf" or text == "inf":
        return PLUS_INF
    if text == "-inf":
        return MINUS_INF
    return int(text)
