# src/lattice/index.py
"""Exponent arithmetic with a symbolic infinity.

Indices are plain floats in (0, inf) or ``INF``. Every formula goes through
``inv`` so that 1/inf = 0 and the "usual modification" of an l^p sum is a max.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import numpy as np

from src.errors import DomainError

INF = math.inf

IndexLike = Union[int, float, str, Fraction]


def parse_index(value: IndexLike) -> float:
    """Parse ``2``, ``"3/2"``, ``"inf"`` or ``"∞"`` into an index."""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in {"inf", "infinity", "∞", "+inf"}:
            return INF
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"cannot parse index {value!r}") from e
    p = float(value)
    if math.isnan(p) or p <= 0:
        raise DomainError(f"index must lie in (0, inf], got {value!r}")
    return p


def is_inf(p: float) -> bool:
    return math.isinf(p)


def inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def conjugate(p: float) -> float:
    """Hölder conjugate p' with 1 <-> inf."""
    if p < 1:
        raise DomainError(f"conjugate exponent undefined for p={p} < 1")
    if p == 1:
        return INF
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def format_index(p: float) -> Union[float, str]:
    return "inf" if math.isinf(p) else p


def lp_combine(values, p: float, axis: int = -1):
    """(sum |v|^p)^(1/p) along ``axis``; the maximum when p is infinite."""
    values = np.abs(np.asarray(values, dtype=float))
    if math.isinf(p):
        return values.max(axis=axis, initial=0.0)
    return np.power(np.power(values, p).sum(axis=axis), 1.0 / p)
