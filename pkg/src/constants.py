# src/constants.py
"""Closed-form constants for maximal operators built from a filtration.

All formulas treat q = inf through ``inv`` (1/inf = 0). Powers close to 1 are
formed with log1p/expm1 so that the constants stay accurate as q grows.
"""
from __future__ import annotations

import math
from typing import Optional

from src.errors import DomainError, FeasibilityViolated
from src.lattice.index import conjugate, format_index, inv, is_inf
from src.models import ConstantsReport


def _check_pq(p: float, q: float):
    if not (p > 0 and q > p) or is_inf(p):
        raise DomainError(f"need 0 < p < q <= inf, got p={p}, q={q}")


def _check_family(kappa: float, ell: float, u: float):
    if min(kappa, ell, u) < 1:
        raise DomainError(f"κ, ℓ and u must be >= 1, got κ={kappa}, ℓ={ell}, u={u}")


def tau(p: float, q: float) -> float:
    """1/τ = 1/p - 1/q."""
    _check_pq(p, q)
    return 1.0 / (inv(p) - inv(q))


def feasibility_bound(p: float, q: float, kappa: float) -> float:
    """(1 + κ^{-τ})^{1/τ}; the product ℓu must stay strictly below it."""
    t = tau(p, q)
    return math.exp(math.log1p(kappa ** (-t)) / t)


def gamma_ck(p: float, q: float, kappa: float, ell: float, u: float) -> float:
    """‖T*‖ <= γ‖T‖ for E with a two-term lower p-estimate and F with a two-term upper q-estimate."""
    _check_pq(p, q)
    _check_family(kappa, ell, u)
    bound = feasibility_bound(p, q, kappa)
    if not ell * u < bound:
        raise FeasibilityViolated(f"ℓu = {ell * u} must be < {bound} for p={p}, q={format_index(q)}, κ={kappa}")
    log_lu = math.log(ell * u)
    if is_inf(q):
        excess = math.expm1(p * log_lu) ** (1.0 / p)
        return u * kappa / (1.0 - kappa * excess)
    t = tau(p, q)
    log_a = math.log1p(kappa ** (-t))
    excess = math.expm1(p * log_lu + (p / q) * log_a) ** (1.0 / p)
    denominator = kappa ** (-t / p) - excess
    return u * math.exp(log_a / q) / denominator


def delta_ck(p: float, q: float, ell_full: float, u_full: float, banach: bool = False) -> float:
    """Constant for the triangular sums Σ_{j<=k} χ_Ω~_k T(fχ_Ω_j) under full p/q-estimates."""
    _check_pq(p, q)
    if banach and q >= 1:
        return corollary_pq_gamma(p, q) * ell_full * u_full
    kappa_q = max(2.0, 2.0 ** inv(q))
    return gamma_ck(p, q, kappa_q, 1.0, 1.0) * ell_full * u_full


def classical_ck(p: float, q: float) -> float:
    """(1 - 2^{1/q - 1/p})^{-1}."""
    _check_pq(p, q)
    return 1.0 / -math.expm1((inv(q) - inv(p)) * math.log(2.0))


def corollary_pq_gamma(p: float, q: float) -> float:
    """γ for a bounded linear T: L^p -> L^q."""
    _check_pq(p, q)
    if q >= 1:
        # 2^{1/q} / (1 - (2^{p/q} - 1)^{1/p})
        excess = math.expm1(p * inv(q) * math.log(2.0)) ** (1.0 / p)
        return 2.0 ** inv(q) / (1.0 - excess)
    e = (q - 1.0) * p / (q - p)
    a = 1.0 + 2.0**e
    return a ** (1.0 / q) / (2.0 ** ((q - 1.0) / (q - p)) - (a ** (p / q) - 1.0) ** (1.0 / p))


def lebesgue_kappa(q: float) -> float:
    """Triangle constant of L^q, the κ used for Lebesgue targets."""
    return max(1.0, 2.0 ** (inv(q) - 1.0))


def improvement_margin(p: float, q: float) -> float:
    """h(2^{1/p-1/q}) - h(1) with h(t) = t + 2^{1/p}/t - (2 - t^p)^{1/p}.

    Positive for 1 <= p < q; the sign certifies corollary_pq_gamma < classical_ck.
    """
    _check_pq(p, q)
    if p < 1:
        raise DomainError("the comparison with the classical constant needs p >= 1")

    def h(t: float) -> float:
        return t + 2.0 ** (1.0 / p) / t - (2.0 - t**p) ** (1.0 / p)

    return h(2.0 ** (1.0 / p - inv(q))) - h(1.0)


def fourier_maximal_constant(p: float) -> float:
    """4·γ(p, p'): the interval maximal Fourier constant for 1 <= p < 2."""
    if not 1 <= p < 2:
        raise DomainError(f"the maximal Fourier constant needs 1 <= p < 2, got {p}")
    return 4.0 * corollary_pq_gamma(p, conjugate(p))


def dual_feasible(p: float, q: float, ell: float, u: float) -> bool:
    """ℓ_(p),2(E)·u^(q),2(F) < 2^{1/p-1/q}: the Köthe dual maximal bound applies."""
    _check_pq(p, q)
    return ell * u < 2.0 ** (inv(p) - inv(q))


def dual_gamma(p: float, q: float, ell: float, u: float) -> float:
    """2^{1/p'} / (1 - (2^{q'/p'} - 1)^{1/q'})·ℓu for the maximal operator of T'."""
    _check_pq(p, q)
    if p < 1:
        raise DomainError("Köthe dual constants need p >= 1")
    pc, qc = conjugate(p), conjugate(q)
    excess = math.expm1(qc * inv(pc) * math.log(2.0)) ** (1.0 / qc)
    return 2.0 ** inv(pc) / (1.0 - excess) * ell * u


def constants_report(p: float, q: float, kappa: float, ell: float = 1.0, u: float = 1.0) -> ConstantsReport:
    _check_pq(p, q)
    _check_family(kappa, ell, u)
    bound = feasibility_bound(p, q, kappa)
    feasible = ell * u < bound
    gamma: Optional[float] = gamma_ck(p, q, kappa, ell, u) if feasible else None
    return ConstantsReport(
        p=format_index(p),
        q=format_index(q),
        tau=tau(p, q),
        kappa=kappa,
        ell=ell,
        u=u,
        feasibility_bound=bound,
        feasible=feasible,
        gamma=gamma,
        delta=delta_ck(p, q, ell, u, banach=kappa == 1.0 and p >= 1),
        classical=classical_ck(p, q),
        corollary=corollary_pq_gamma(p, q),
    )
