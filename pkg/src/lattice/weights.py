# src/lattice/weights.py
"""Weight functions w on (0, inf) with exactly evaluable primitives W."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from src.errors import DomainError


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Power(c, a): w(t) = c·t^a, or PiecewiseConstant(breakpoints, levels).

    PiecewiseConstant takes len(levels) == len(breakpoints) + 1: levels[0] on
    (0, b_1), levels[k] on [b_k, b_{k+1}), the last level on [b_m, inf).
    """

    kind: Literal["power", "piecewise"]
    c: float = 1.0
    a: float = 0.0
    breakpoints: tuple[float, ...] = ()
    levels: tuple[float, ...] = ()
    _knots: np.ndarray = field(init=False, repr=False)
    _cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind == "power":
            if not (self.c > 0 and np.isfinite(self.c)):
                raise DomainError(f"power weight needs c > 0, got {self.c}")
            if not (self.a > -1 and np.isfinite(self.a)):
                raise DomainError(f"power weight needs a > -1, got {self.a}")
            object.__setattr__(self, "_knots", np.zeros(0))
            object.__setattr__(self, "_cumulative", np.zeros(0))
            return
        if self.kind != "piecewise":
            raise DomainError(f"unknown weight kind {self.kind!r}")
        knots = np.asarray(self.breakpoints, dtype=float)
        levels = np.asarray(self.levels, dtype=float)
        if levels.size != knots.size + 1:
            raise DomainError("piecewise weight needs len(levels) == len(breakpoints) + 1")
        if np.any(knots <= 0) or np.any(np.diff(knots) <= 0) or not np.all(np.isfinite(knots)):
            raise DomainError("breakpoints must be positive, finite and strictly increasing")
        if np.any(levels < 0) or not np.all(np.isfinite(levels)):
            raise DomainError("weight levels must be finite and nonnegative")
        edges = np.concatenate(([0.0], knots))
        cumulative = np.concatenate(([0.0], np.cumsum(levels[:-1] * np.diff(edges))))
        object.__setattr__(self, "breakpoints", tuple(knots.tolist()))
        object.__setattr__(self, "levels", tuple(levels.tolist()))
        object.__setattr__(self, "_knots", edges)
        object.__setattr__(self, "_cumulative", cumulative)

    @classmethod
    def power(cls, c: float, a: float) -> "WeightFunction":
        return cls("power", c=float(c), a=float(a))

    @classmethod
    def piecewise(cls, breakpoints, levels) -> "WeightFunction":
        return cls("piecewise", breakpoints=tuple(breakpoints), levels=tuple(levels))

    @classmethod
    def lorentz(cls, p: float, r: float) -> "WeightFunction":
        """w(t) = (r/p)·t^{r/p-1}, so W(t) = t^{r/p}."""
        return cls.power(r / p, r / p - 1.0)

    @classmethod
    def with_primitive_power(cls, exponent: float) -> "WeightFunction":
        """The weight whose primitive is W(t) = t^exponent."""
        return cls.power(exponent, exponent - 1.0)

    def w(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            return self.c * np.power(t, self.a)
        idx = np.searchsorted(self._knots, t, side="right") - 1
        return np.asarray(self.levels)[np.clip(idx, 0, len(self.levels) - 1)]

    def W(self, t):
        """Exact primitive ∫_0^t w."""
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            return self.c * np.power(t, self.a + 1.0) / (self.a + 1.0)
        idx = np.clip(np.searchsorted(self._knots, t, side="right") - 1, 0, len(self.levels) - 1)
        return self._cumulative[idx] + np.asarray(self.levels)[idx] * (t - self._knots[idx])

    @property
    def is_nonincreasing(self) -> bool:
        if self.kind == "power":
            return self.a <= 0
        return bool(np.all(np.diff(self.levels) <= 0))

    def describe(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "c": self.c, "a": self.a}
        return {"kind": "piecewise", "breakpoints": list(self.breakpoints), "levels": list(self.levels)}
