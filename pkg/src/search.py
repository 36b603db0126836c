# src/search.py
"""Seeded multi-restart coordinate ascent for scale-invariant ratios.

Objectives take a stack of candidate points, shape (k, dim), and return k
values; -inf marks an invalid point (e.g. a zero denominator).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from src.models import SearchConfig
from src.observability import get_tracer

BatchObjective = Callable[[np.ndarray], np.ndarray]


@dataclass
class SearchOutcome:
    x: np.ndarray
    value: float
    evaluations: int
    restarts: int


def safe_ratio(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    numerator = np.asarray(numerator, dtype=float)
    denominator = np.asarray(denominator, dtype=float)
    out = np.full(np.broadcast(numerator, denominator).shape, -np.inf)
    ok = denominator > 0
    np.divide(numerator, denominator, out=out, where=ok)
    return np.where(np.isfinite(out), out, -np.inf)


def _candidates(xi: float, step: float, scale: float, signed: bool) -> list[float]:
    if xi == 0.0:
        out = [step * scale]
        if signed:
            out.append(-step * scale)
        return out
    out = [xi * (1.0 + step), xi * (1.0 - step), 0.0]
    if signed:
        out += [xi + step * scale, xi - step * scale, -xi]
    return out


def coordinate_ascent(
    objective: BatchObjective,
    x0: np.ndarray,
    cfg: SearchConfig,
    rng: np.random.Generator,
    signed: bool = False,
) -> tuple[np.ndarray, float, int]:
    x = np.array(x0, dtype=float)
    if not signed:
        x = np.abs(x)
    best = float(objective(x[None, :])[0])
    evaluations = 1
    step = cfg.step_initial
    for _ in range(cfg.iterations):
        improved = False
        scale = float(np.abs(x).max()) or 1.0
        for i in rng.permutation(x.size):
            options = _candidates(float(x[i]), step, scale, signed)
            trial = np.repeat(x[None, :], len(options), axis=0)
            trial[:, i] = options
            values = objective(trial)
            evaluations += len(options)
            k = int(np.argmax(values))
            if values[k] > best:
                best = float(values[k])
                x = trial[k]
                improved = True
        if not improved:
            step *= cfg.step_decay
            if step < cfg.step_min:
                break
    return x, best, evaluations


def random_start(rng: np.random.Generator, dim: int, signed: bool) -> np.ndarray:
    if signed:
        x = rng.standard_normal(dim)
    else:
        x = rng.exponential(size=dim) ** rng.uniform(0.5, 3.0)
    x[rng.random(dim) < 0.25] = 0.0
    if not np.any(x):
        x[rng.integers(dim)] = 1.0
    return x


def maximize(
    objective: BatchObjective,
    dim: int,
    cfg: SearchConfig,
    starts: Sequence[np.ndarray] = (),
    signed: bool = False,
    entropy: Iterable[int] = (),
) -> SearchOutcome:
    """Run the supplied starts plus ``cfg.restarts`` random restarts and keep the best.

    Every run draws from its own child of SeedSequence([seed, *entropy]), and
    the reduction picks the first maximiser in run order, so the result does
    not depend on ``cfg.workers``.
    """
    starts = [np.asarray(s, dtype=float) for s in starts]
    children = np.random.SeedSequence([cfg.seed, *[int(e) for e in entropy]]).spawn(len(starts) + cfg.restarts)

    def run(k: int):
        rng = np.random.default_rng(children[k])
        x0 = starts[k] if k < len(starts) else random_start(rng, dim, signed)
        return coordinate_ascent(objective, x0, cfg, rng, signed)

    indices = range(len(children))
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run, indices))
    else:
        results = [run(k) for k in indices]

    best: Optional[tuple[np.ndarray, float, int]] = None
    evaluations = 0
    for x, value, evals in results:
        evaluations += evals
        if best is None or value > best[1]:
            best = (x, value, evals)
    get_tracer().log_tool("coordinate_ascent", dim=dim, restarts=len(results), evaluations=evaluations, value=best[1])
    return SearchOutcome(x=best[0], value=best[1], evaluations=evaluations, restarts=len(results))
