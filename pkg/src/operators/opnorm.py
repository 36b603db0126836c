# src/operators/opnorm.py
from __future__ import annotations

from typing import Optional

import numpy as np

from src.lattice.duality import exact_dual
from src.lattice.index import is_inf
from src.lattice.norms import QuasiNorm, WeightedLp
from src.models import EstimateResult, SearchConfig, SearchStats
from src.operators.linear import LinearOp
from src.search import maximize, safe_ratio


def op_norm_exact(T: LinearOp, dom: QuasiNorm, cod: QuasiNorm) -> Optional[float]:
    """‖T‖ between weighted Lebesgue spaces where a closed form exists, else None."""
    if not (isinstance(dom, WeightedLp) and isinstance(cod, WeightedLp)):
        return None
    p, q = dom.p, cod.p
    if p <= min(1.0, q):
        # extreme points of the unit ball are normalized deltas
        columns = np.abs(T.matrix.T)
        return float((np.asarray(cod.evaluate(columns)) * np.power(T.domain.mu, -1.0 / p)).max())
    if is_inf(q):
        rows = np.abs(T.matrix) / T.domain.mu[None, :]
        return float(np.asarray(exact_dual(dom).evaluate(rows)).max())
    if p == 2 and q == 2:
        weighted = np.sqrt(T.codomain.mu)[:, None] * T.matrix / np.sqrt(T.domain.mu)[None, :]
        return float(np.linalg.norm(weighted, 2))
    return None


def op_norm_search(T: LinearOp, dom: QuasiNorm, cod: QuasiNorm, cfg: SearchConfig) -> EstimateResult:
    """Certified lower bound on sup ‖Tf‖/‖f‖ over real f, with the maximiser as witness."""
    n = T.domain.size

    def objective(x: np.ndarray) -> np.ndarray:
        return safe_ratio(cod.evaluate(np.abs(T(x))), dom.evaluate(x))

    starts = [np.eye(n)[k] for k in range(n)] + [np.ones(n)]
    outcome = maximize(objective, n, cfg, starts=starts, signed=True)
    x = outcome.x
    return EstimateResult(
        value=max(float(objective(x[None, :])[0]), 0.0),
        exact=False,
        witness=[x.tolist()],
        trials=SearchStats(restarts=outcome.restarts, evaluations=outcome.evaluations),
        method="coordinate-ascent",
    )


def operator_norm(T: LinearOp, dom: QuasiNorm, cod: QuasiNorm, cfg: SearchConfig) -> EstimateResult:
    """Closed form when available, otherwise the searched lower bound."""
    exact = op_norm_exact(T, dom, cod)
    if exact is not None:
        return EstimateResult.closed_form(exact, method="closed-form")
    return op_norm_search(T, dom, cod, cfg)
