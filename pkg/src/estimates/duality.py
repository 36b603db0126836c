# src/estimates/duality.py
from __future__ import annotations

from src.errors import NotNormed
from src.estimates.estimate import lower_estimate_const, upper_estimate_const
from src.lattice.duality import kothe_dual_functional
from src.lattice.index import conjugate, format_index
from src.lattice.norms import QuasiNorm, optional_kappa
from src.models import DualityReport, SearchConfig
from src.observability import get_tracer


def duality_check(norm: QuasiNorm, p: float, n: int, cfg: SearchConfig) -> DualityReport:
    """Compare ℓ_(p),n(E) with u^(p'),n(E') and u^(p),n(E) with ℓ_(p'),n(E')."""
    if optional_kappa(norm) != 1.0:
        raise NotNormed(f"{norm.family} is not a normed family; Köthe duality identities need κ = 1")
    pc = conjugate(p)
    dual = kothe_dual_functional(norm, cfg)
    tracer = get_tracer()
    tracer.log_node("duality", "start", family=norm.family, dual=dual.family, p=format_index(p), n=n)

    lower = lower_estimate_const(norm, p, n, cfg)
    dual_upper = upper_estimate_const(dual, pc, n, cfg)
    mirror_upper = upper_estimate_const(norm, p, n, cfg)
    mirror_dual_lower = lower_estimate_const(dual, pc, n, cfg)

    report = DualityReport(
        p=format_index(p),
        p_conjugate=format_index(pc),
        n=n,
        lower=lower,
        dual_upper=dual_upper,
        gap=abs(lower.value - dual_upper.value),
        mirror_upper=mirror_upper,
        mirror_dual_lower=mirror_dual_lower,
        mirror_gap=abs(mirror_upper.value - mirror_dual_lower.value),
    )
    tracer.log_node("duality", "done", gap=report.gap, mirror_gap=report.mirror_gap)
    return report
