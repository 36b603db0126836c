# src/estimates/closed_form.py
"""Two-term estimate constants that are known exactly."""
from __future__ import annotations

from typing import Literal, Optional

from src.lattice.index import inv, is_inf
from src.lattice.norms import Amalgam, ClassicalLorentz, LorentzLambda, QuasiNorm, WeakLorentz, WeightedLp

Side = Literal["lower", "upper"]


def amalgam_two_term_lower(p: float, r: float, s: float) -> float:
    """ℓ_(p),2 of W(L^r, l^s): 2^{1/p - 1/max(p, r, s)}."""
    return 2.0 ** (inv(p) - inv(max(p, r, s)))


def amalgam_two_term_upper(q: float, r: float, s: float) -> float:
    """u^(q),2 of W(L^r, l^s): 2^{1/min(q, r, s) - 1/q}."""
    return 2.0 ** (inv(min(q, r, s)) - inv(q))


def effective_exponents(norm: Amalgam) -> tuple[float, ...]:
    """Exponents a pair of disjoint functions can actually exercise on this block structure."""
    out = []
    if any(stop - start >= 2 for start, stop in norm.blocks):
        out.append(norm.r)
    if len(norm.blocks) >= 2:
        out.append(norm.s)
    return tuple(out)


def _amalgam(norm: Amalgam, exponent: float, side: Side) -> float:
    usable = effective_exponents(norm)
    if side == "lower":
        return 2.0 ** (inv(exponent) - inv(max((exponent, *usable))))
    return 2.0 ** (inv(min((exponent, *usable))) - inv(exponent))


def _power_lorentz(r: float, a: float, exponent: float, side: Side) -> Optional[float]:
    # W(t) ∝ t^{a+1}, so W(t^{p/r}) is convex iff (a+1)p/r >= 1
    ratio = (a + 1.0) * exponent / r
    if side == "lower" and r <= exponent and ratio >= 1:
        return 1.0
    if side == "upper" and exponent <= r and ratio <= 1:
        return 1.0
    return None


def two_term_closed_form(norm: QuasiNorm, exponent: float, side: Side) -> Optional[float]:
    """Exact ℓ_(p),2 (side="lower") or u^(q),2 (side="upper"), or None when unknown."""
    if norm.space.size == 1:
        return 1.0
    if side == "lower" and is_inf(exponent):
        # max ‖f_j‖ <= ‖Σ f_j‖ in every lattice
        return 1.0
    if isinstance(norm, WeightedLp):
        return _amalgam(Amalgam(norm.space, norm.p, norm.p), exponent, side)
    if isinstance(norm, Amalgam):
        return _amalgam(norm, exponent, side)
    if isinstance(norm, ClassicalLorentz):
        if is_inf(norm.r):
            return 1.0 if side == "upper" and exponent <= norm.p else None
        return _power_lorentz(norm.r, norm.r / norm.p - 1.0, exponent, side)
    if isinstance(norm, WeakLorentz):
        return 1.0 if side == "upper" and exponent <= norm.q else None
    if isinstance(norm, LorentzLambda) and norm.weight.kind == "power":
        return _power_lorentz(norm.r, norm.weight.a, exponent, side)
    return None


def lp_estimate_constant(norm: WeightedLp, exponent: float, n: int, side: Side) -> float:
    """ℓ_(p),n or u^(q),n of L^{p0}(μ): k^{|1/p - 1/p0|} on the stronger side, else 1."""
    k = min(n, norm.space.size)
    if side == "lower":
        return float(k) ** max(0.0, inv(exponent) - inv(norm.p))
    return float(k) ** max(0.0, inv(norm.p) - inv(exponent))


def estimate_bound(norm: QuasiNorm, exponent: float, n: int, side: Side) -> Optional[float]:
    """An upper bound for ℓ_(p),n or u^(q),n, None outside the families covered.

    Amalgams satisfy a lower max-estimate and an upper min-estimate with
    constant 1 over their effective exponents, L_(p,r) over (p, r); Hölder on
    the k = min(n, atoms) pieces moves those to ``exponent``. Exact for
    weighted Lebesgue spaces and for two-term amalgam constants.
    """
    if isinstance(norm, WeightedLp):
        return lp_estimate_constant(norm, exponent, n, side)
    if isinstance(norm, Amalgam):
        usable = effective_exponents(norm)
    elif isinstance(norm, ClassicalLorentz) and not is_inf(norm.r):
        usable = (norm.p, norm.r)
    else:
        return None
    k = float(min(n, norm.space.size))
    if side == "lower":
        return k ** (inv(exponent) - inv(max((exponent, *usable))))
    return k ** (inv(min((exponent, *usable))) - inv(exponent))
