# src/lattice/duality.py
"""Köthe dual norms: closed forms where Hölder applies, certified search otherwise."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Optional

import numpy as np

from src.errors import DimensionMismatch
from src.lattice.index import conjugate
from src.lattice.norms import Amalgam, QuasiNorm, WeightedLp
from src.lattice.spaces import LatticeVector
from src.models import EstimateResult, SearchConfig, SearchStats
from src.search import maximize, safe_ratio


@dataclass(frozen=True, eq=False)
class AtomicSup(QuasiNorm):
    """max_i |g_i|·μ_i^exponent; the Köthe dual of L^p(μ) for p < 1 has exponent 1 - 1/p."""

    exponent: float = 0.0
    family: ClassVar[str] = "atomic-sup"

    def evaluate(self, values):
        values = np.abs(self._check(values))
        return (values * np.power(self.space.mu, self.exponent)).max(axis=-1)

    @property
    def kappa(self) -> float:
        return 1.0

    def params(self) -> dict:
        return {"exponent": self.exponent}


@dataclass(frozen=True, eq=False)
class SearchedKotheDual(QuasiNorm):
    """sup{Σ|f g|μ : ‖f‖ ≤ 1} evaluated by search; values are lower bounds."""

    primal: Optional[QuasiNorm] = None
    cfg: SearchConfig = field(default_factory=SearchConfig)
    family: ClassVar[str] = "kothe-dual"
    rearrangement_invariant: ClassVar[bool] = False

    def evaluate(self, values):
        values = self._check(values)
        if values.ndim == 1:
            return _dual_search(self.primal, values, self.cfg).value
        flat = values.reshape(-1, values.shape[-1])
        return np.array([_dual_search(self.primal, row, self.cfg).value for row in flat]).reshape(values.shape[:-1])

    @property
    def kappa(self) -> float:
        return 1.0

    def params(self) -> dict:
        return {"primal": self.primal.describe() if self.primal else None}


def exact_dual(norm: QuasiNorm) -> Optional[QuasiNorm]:
    """The Köthe dual as a closed-form norm, or None."""
    if isinstance(norm, WeightedLp):
        if norm.p >= 1:
            return WeightedLp(norm.space, conjugate(norm.p))
        return AtomicSup(norm.space, 1.0 - 1.0 / norm.p)
    if isinstance(norm, Amalgam) and norm.r >= 1 and norm.s >= 1:
        return Amalgam(norm.space, conjugate(norm.r), conjugate(norm.s), norm.blocks)
    return None


def kothe_dual_functional(norm: QuasiNorm, cfg: SearchConfig) -> QuasiNorm:
    return exact_dual(norm) or SearchedKotheDual(norm.space, norm, cfg)


def _dual_search(norm: QuasiNorm, g: np.ndarray, cfg: SearchConfig) -> EstimateResult:
    weight = np.abs(g) * norm.space.mu
    support = np.flatnonzero(weight)
    if support.size == 0:
        return EstimateResult(value=0.0, exact=True, method="zero")
    n = norm.space.size

    def embed(x: np.ndarray) -> np.ndarray:
        full = np.zeros(x.shape[:-1] + (n,))
        full[..., support] = x
        return full

    def objective(x: np.ndarray) -> np.ndarray:
        return safe_ratio(np.abs(x) @ weight[support], norm.evaluate(embed(x)))

    starts = [np.abs(g[support]), np.ones(support.size)] + [np.eye(support.size)[k] for k in range(support.size)]
    outcome = maximize(objective, support.size, cfg, starts=starts)
    witness = embed(np.abs(outcome.x))
    scale = float(norm.evaluate(witness))
    witness = witness / scale if scale > 0 else witness
    value = float(objective(np.abs(outcome.x)[None, :])[0])
    return EstimateResult(
        value=max(value, 0.0),
        exact=False,
        witness=[witness.tolist()],
        trials=SearchStats(restarts=outcome.restarts, evaluations=outcome.evaluations),
        method="coordinate-ascent",
    )


def kothe_dual_norm(norm: QuasiNorm, g: LatticeVector, cfg: SearchConfig) -> EstimateResult:
    """sup{Σ_i |f_i g_i| μ_i : ‖f‖ ≤ 1}."""
    if not g.space.same_as(norm.space):
        raise DimensionMismatch("g does not live on the norm's space")
    dual = exact_dual(norm)
    if dual is not None:
        return EstimateResult.closed_form(float(dual.evaluate(g.values)), method=f"holder:{dual.family}")
    return _dual_search(norm, np.asarray(g.values, dtype=float), cfg)

