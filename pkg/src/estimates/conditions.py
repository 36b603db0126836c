# src/estimates/conditions.py
"""Grid diagnostics for the weight hypotheses of the Lorentz-space estimates."""
from __future__ import annotations

from typing import Optional

import numpy as np

from src.config import config
from src.errors import DomainError
from src.lattice.index import inv, is_inf
from src.lattice.weights import WeightFunction
from src.models import ConditionCheck

RELATIVE_SLACK = 1e-12


def _grid(grid: Optional[np.ndarray]) -> np.ndarray:
    grid = config.default_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(grid <= 0) or not np.all(np.isfinite(grid)):
        raise DomainError("grid must be a nonempty list of positive finite reals")
    return grid


def _pairwise(F: WeightFunction, e: float, grid: np.ndarray):
    """F(t1+t2)^e and F(t1)^e + F(t2)^e over the pairs t1 <= t2 of the grid."""
    i, j = np.triu_indices(grid.size)
    lhs = np.power(F.W(grid[i] + grid[j]), e)
    single = np.power(F.W(grid), e)
    return i, j, lhs, single[i] + single[j]


def _report(grid, i, j, ratio, bad) -> ConditionCheck:
    violation = None
    if np.any(bad):
        k = int(np.argmax(bad))
        violation = [float(grid[i[k]]), float(grid[j[k]])]
    return ConditionCheck(holds=violation is None, violation=violation, worst_ratio=float(ratio), grid_points=grid.size)


def convexity_check_w(W: WeightFunction, p: float, r: float, grid: Optional[np.ndarray] = None) -> ConditionCheck:
    """W(t1+t2)^{p/r} >= W(t1)^{p/r} + W(t2)^{p/r} on every grid pair.

    ``worst_ratio`` is the smallest lhs/rhs seen; the first violating pair in
    grid order is reported.
    """
    if not (r > 0 and p >= r) or is_inf(p):
        raise DomainError(f"convexity check needs finite p >= r > 0, got p={p}, r={r}")
    grid = _grid(grid)
    e = p / r
    i, j, lhs, rhs = _pairwise(W, e, grid)
    ratio = np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1.0), np.inf)
    bad = lhs < rhs * (1.0 - RELATIVE_SLACK)
    return _report(grid, i, j, ratio.min(), bad)


def concavity_check_v(V: WeightFunction, q: float, s: float, grid: Optional[np.ndarray] = None) -> ConditionCheck:
    """V(t1+t2)^{q/s} <= V(t1)^{q/s} + V(t2)^{q/s} on every grid pair; ``worst_ratio`` is the largest lhs/rhs."""
    if not (q > 0 and s >= q) or is_inf(q):
        raise DomainError(f"concavity check needs s >= q > 0 with q finite, got q={q}, s={s}")
    grid = _grid(grid)
    e = q * inv(s)
    if e == 0:
        raise DomainError("concavity check needs a finite s")
    i, j, lhs, rhs = _pairwise(V, e, grid)
    ratio = np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1.0), np.where(lhs > 0, np.inf, 0.0))
    bad = lhs > rhs * (1.0 + RELATIVE_SLACK)
    return _report(grid, i, j, ratio.max(), bad)


def fourier_weight_condition(
    V: WeightFunction, W: WeightFunction, r: float, s: float, grid: Optional[np.ndarray] = None
) -> float:
    """Grid supremum of z·V(1/z)^{1/r}·W(z)^{-1/s}; a diagnostic, not a proof of finiteness."""
    grid = _grid(grid)
    w_values = W.W(grid)
    if np.any(w_values <= 0):
        raise DomainError("W vanishes on the grid")
    values = grid * np.power(V.W(1.0 / grid), inv(r)) * np.power(w_values, -inv(s))
    return float(values.max())
