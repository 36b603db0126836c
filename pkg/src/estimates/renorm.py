# src/estimates/renorm.py
"""Partition renormings: sup (lower p) and inf (upper q) of (Σ‖fχ_H‖^e)^{1/e}."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Optional

import numpy as np

from src.config import config
from src.errors import DimensionMismatch, NotNormed, SupportTooLarge, UnknownKappa
from src.estimates.partitions import lp_partition_extremum, random_partition, subset_table
from src.lattice.duality import kothe_dual_functional
from src.lattice.index import conjugate, format_index, inv, lp_combine
from src.lattice.norms import QuasiNorm, optional_kappa
from src.lattice.spaces import LatticeVector
from src.models import EstimateResult, SearchConfig, SearchStats
from src.search import maximize, safe_ratio


def _support(values: np.ndarray) -> np.ndarray:
    return np.flatnonzero(values)


def _exhaustive(norm: QuasiNorm, exponent: float, values: np.ndarray, maximize_: bool, cap: int) -> float:
    values = np.abs(np.asarray(values, dtype=float))
    support = _support(values)
    k = support.size
    if k == 0:
        return 0.0
    if k > cap:
        raise SupportTooLarge(f"support of {k} atoms exceeds the enumeration cap {cap}")
    table = subset_table(k)
    stack = np.zeros((table.shape[0], values.size))
    stack[:, support] = table * values[support]
    block_norms = np.asarray(norm.evaluate(stack))
    return lp_partition_extremum(block_norms, k, exponent, maximize_)


def renorm_lower_p(norm: QuasiNorm, p: float, f: LatticeVector, cap: Optional[int] = None) -> float:
    """‖f‖_{E_(p)}: the sup over set partitions of supp f, enumerated exactly."""
    if not f.space.same_as(norm.space):
        raise DimensionMismatch("vector does not live on the norm's space")
    return _exhaustive(norm, p, f.values, True, cap or config.PARTITION_CAP)


def renorm_upper_q(norm: QuasiNorm, q: float, f: LatticeVector, cap: Optional[int] = None) -> float:
    """‖f‖_{F^(q)}: the inf over set partitions of supp f, enumerated exactly."""
    if not f.space.same_as(norm.space):
        raise DimensionMismatch("vector does not live on the norm's space")
    return _exhaustive(norm, q, f.values, False, cap or config.PARTITION_CAP)


def _sampled(norm: QuasiNorm, exponent: float, f: LatticeVector, cfg: SearchConfig, maximize_: bool) -> EstimateResult:
    values = np.abs(np.asarray(f.values, dtype=float))
    support = _support(values)
    if support.size == 0:
        return EstimateResult(value=0.0, exact=True, method="zero")
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, support.size]))
    best, best_blocks = float(norm.evaluate(values)), [list(range(support.size))]
    for _ in range(cfg.max_partitions):
        blocks = random_partition(support.size, support.size, rng)
        masks = np.zeros((len(blocks), values.size))
        for j, block in enumerate(blocks):
            masks[j, support[block]] = 1.0
        value = float(lp_combine(norm.evaluate(masks * values), exponent))
        if (value > best) if maximize_ else (value < best):
            best, best_blocks = value, blocks
    witness = []
    for block in best_blocks:
        piece = np.zeros_like(values)
        piece[support[block]] = values[support[block]]
        witness.append(piece.tolist())
    return EstimateResult(
        value=best,
        exact=False,
        witness=witness,
        trials=SearchStats(partitions=cfg.max_partitions, partitions_exhaustive=False),
        method="sampled-partitions" if maximize_ else "sampled-partitions-upper-bound",
    )


def renorm_lower_p_sampled(norm: QuasiNorm, p: float, f: LatticeVector, cfg: SearchConfig) -> EstimateResult:
    """Seeded random partitions; a lower bound on ‖f‖_{E_(p)}."""
    return _sampled(norm, p, f, cfg, True)


def renorm_upper_q_sampled(norm: QuasiNorm, q: float, f: LatticeVector, cfg: SearchConfig) -> EstimateResult:
    """Seeded random partitions; an upper bound on ‖f‖_{F^(q)} (the renorm is an infimum)."""
    return _sampled(norm, q, f, cfg, False)


@dataclass(frozen=True, eq=False)
class RenormedLowerP(QuasiNorm):
    """E_(p) as a norm object, so it can be fed back into the estimate search."""

    base: Optional[QuasiNorm] = None
    p: float = 1.0
    cap: int = field(default_factory=lambda: config.PARTITION_CAP)
    family: ClassVar[str] = "renorm-lower"
    rearrangement_invariant: ClassVar[bool] = False

    def evaluate(self, values):
        values = self._check(values)
        flat = values.reshape(-1, values.shape[-1])
        out = np.array([_exhaustive(self.base, self.p, row, True, self.cap) for row in flat])
        return out.reshape(values.shape[:-1]) if values.ndim > 1 else float(out[0])

    @property
    def kappa(self) -> float:
        raise UnknownKappa("the lower p-renorming has no tabulated triangle constant")

    def params(self) -> dict:
        return {"base": self.base.describe(), "p": format_index(self.p)}


@dataclass(frozen=True, eq=False)
class RenormedUpperQ(QuasiNorm):
    base: Optional[QuasiNorm] = None
    q: float = 1.0
    cap: int = field(default_factory=lambda: config.PARTITION_CAP)
    family: ClassVar[str] = "renorm-upper"
    rearrangement_invariant: ClassVar[bool] = False

    def evaluate(self, values):
        values = self._check(values)
        flat = values.reshape(-1, values.shape[-1])
        out = np.array([_exhaustive(self.base, self.q, row, False, self.cap) for row in flat])
        return out.reshape(values.shape[:-1]) if values.ndim > 1 else float(out[0])

    @property
    def kappa(self) -> float:
        return max(2.0, 2.0 ** inv(self.q))

    def params(self) -> dict:
        return {"base": self.base.describe(), "q": format_index(self.q)}


def renorm_upper_q_dual_route(norm: QuasiNorm, q: float, g: LatticeVector, cfg: SearchConfig) -> EstimateResult:
    """‖g‖_{F^(q)} through the Köthe dual: sup_f Σ|f g|μ / ‖f‖_{E_(q')} with E = F'."""
    if optional_kappa(norm) != 1.0:
        raise NotNormed("the dual route needs a normed lattice")
    if not g.space.same_as(norm.space):
        raise DimensionMismatch("vector does not live on the norm's space")
    dual = kothe_dual_functional(norm, cfg)
    p = conjugate(q)
    weight = np.abs(np.asarray(g.values, dtype=float)) * norm.space.mu
    support = _support(weight)
    if support.size == 0:
        return EstimateResult(value=0.0, exact=True, method="zero")
    renormed = RenormedLowerP(norm.space, dual, p)

    def embed(x: np.ndarray) -> np.ndarray:
        full = np.zeros(x.shape[:-1] + (norm.space.size,))
        full[..., support] = x
        return full

    def objective(x: np.ndarray) -> np.ndarray:
        return safe_ratio(np.abs(x) @ weight[support], renormed.evaluate(embed(x)))

    starts = [np.ones(support.size), np.abs(np.asarray(g.values))[support]]
    outcome = maximize(objective, support.size, cfg, starts=starts)
    return EstimateResult(
        value=max(outcome.value, 0.0),
        exact=False,
        witness=[embed(np.abs(outcome.x)).tolist()],
        trials=SearchStats(restarts=outcome.restarts, evaluations=outcome.evaluations),
        method="dual-route",
    )
