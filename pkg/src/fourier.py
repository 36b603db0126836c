# src/fourier.py
"""Discrete Fourier transform, its prefix and interval maximal operators, and the amalgam experiment.

Position k of a length-n signal carries the time index k - offset, offset
defaulting to n // 2 (CK_CENTER_OFFSET overrides it). The DFT is unnormalized,
so ‖F‖ from l^1 to l^inf is exactly 1.
"""
from __future__ import annotations

from typing import Literal, Optional

import numpy as np

from src.config import config
from src.constants import fourier_maximal_constant
from src.errors import DomainError, HypothesisViolated
from src.lattice.duality import exact_dual
from src.lattice.index import conjugate
from src.lattice.norms import Amalgam, QuasiNorm, WeightedLp
from src.lattice.spaces import AnyVector, AtomicSpace, LatticeVector
from src.models import CKReport, MPZReport, SearchConfig
from src.operators.filtration import Filtration
from src.operators.harness import ck_verify, trial_vectors
from src.operators.linear import LinearOp, maximal_apply
from src.search import safe_ratio

Side = Literal["positive", "negative"]


def dft_operator(n: int) -> LinearOp:
    """Entries e^{-2πi jk/n}, j, k = 0..n-1."""
    if n < 1:
        raise DomainError(f"DFT size must be >= 1, got {n}")
    k = np.arange(n)
    space = AtomicSpace.unit(n)
    return LinearOp(np.exp(-2j * np.pi * np.outer(k, k) / n), space, space)


def centered_indices(n: int, offset: Optional[int] = None) -> np.ndarray:
    if offset is None:
        offset = config.CENTER_OFFSET if config.CENTER_OFFSET is not None else n // 2
    if not 0 <= offset < n:
        raise DomainError(f"center offset must lie in 0..{n - 1}, got {offset}")
    return np.arange(n) - offset


def prefix_chain(n: int, side: Side, offset: Optional[int] = None) -> Filtration:
    """[0, y] for side="positive", [-y, 0] for side="negative", y = 0, 1, ... over the signal."""
    t = centered_indices(n, offset)
    if side == "positive":
        order = np.flatnonzero(t >= 0)
    elif side == "negative":
        order = np.flatnonzero(t <= 0)[::-1]
    else:
        raise DomainError(f"side must be 'positive' or 'negative', got {side!r}")
    space = AtomicSpace.unit(n)
    return Filtration(space, tuple(tuple(order[: k + 1].tolist()) for k in range(order.size)))


def maximal_fourier_prefix(f: AnyVector, side: Side, offset: Optional[int] = None) -> LatticeVector:
    n = f.space.size
    return maximal_apply(dft_operator(n), prefix_chain(n, side, offset), f)


def _interval_sup(values: np.ndarray) -> np.ndarray:
    """sup over index windows of |Σ_{k in window} f_k e^{-2πi jk/n}|, per frequency j; shape (..., n)."""
    n = values.shape[-1]
    kernel = dft_operator(n).matrix
    terms = values[..., None, :] * kernel
    partial = np.concatenate((np.zeros(terms.shape[:-1] + (1,), dtype=complex), np.cumsum(terms, axis=-1)), axis=-1)
    # every window is a difference of two prefix sums
    gaps = np.abs(partial[..., :, None] - partial[..., None, :])
    return gaps.max(axis=(-2, -1))


def interval_sup_batch(values: np.ndarray, budget: int = 4_000_000) -> np.ndarray:
    """``_interval_sup`` over the rows of a (k, n) stack, in chunks that keep memory bounded."""
    values = np.atleast_2d(values)
    n = values.shape[-1]
    chunk = max(1, budget // (n * (n + 1) ** 2))
    return np.concatenate([_interval_sup(values[i : i + chunk]) for i in range(0, values.shape[0], chunk)])


def maximal_fourier_intervals(f: AnyVector) -> LatticeVector:
    return LatticeVector(f.space, _interval_sup(np.asarray(f.values)))


def mpz_check(f: AnyVector, offset: Optional[int] = None) -> MPZReport:
    """Pointwise F_*f <= 2F+*f + 2F-*f."""
    lhs = maximal_fourier_intervals(f).values
    rhs = 2.0 * maximal_fourier_prefix(f, "positive", offset).values + 2.0 * maximal_fourier_prefix(f, "negative", offset).values
    slack = rhs - lhs
    scale = np.maximum(np.abs(rhs), 1.0)
    violation = np.maximum(-slack, 0.0)
    return MPZReport(
        holds=bool(np.all(violation <= 1e-12 * scale)),
        min_slack=float(slack.min()),
        max_violation=float(violation.max()),
        n=f.space.size,
    )


def blocked_amalgam(n: int, r: float, s: float, blocks: int) -> Amalgam:
    return Amalgam.equal_blocks(AtomicSpace.unit(n), r, s, blocks)


def amalgam_pair(n: int, r: float, s: float, blocks: int) -> tuple[QuasiNorm, QuasiNorm]:
    """W(L^r, l^s) and W(L^{s'}, l^{r'}) on equal blocks; plain Lebesgue spaces when r = s."""
    if r == s:
        space = AtomicSpace.unit(n)
        return WeightedLp(space, r), WeightedLp(space, conjugate(r))
    return blocked_amalgam(n, r, s, blocks), blocked_amalgam(n, conjugate(s), conjugate(r), blocks)


def hausdorff_young_maximal_check(
    n: int, r: float, s: float, blocks: int, cfg: SearchConfig, offset: Optional[int] = None
) -> CKReport:
    """Maximal DFT from W(L^r, l^s) to W(L^{s'}, l^{r'}) over the positive prefix chain."""
    if r < 1 or s < 1:
        raise DomainError(f"need r, s >= 1, got r={r}, s={s}")
    p, q = max(r, s), min(conjugate(s), conjugate(r))
    if not p < q:
        raise HypothesisViolated(f"max(r, s) = {p} must be < min(s', r') = {q}")
    if not (r < 2 and s < 2):
        raise DomainError(f"need 1 <= r, s < 2, got r={r}, s={s}")
    if blocks < 1 or n % blocks:
        raise DomainError(f"{n} points cannot be split into {blocks} equal blocks")
    dom, cod = amalgam_pair(n, r, s, blocks)
    T = dft_operator(n)
    chain = prefix_chain(n, "positive", offset)
    report = ck_verify(T, dom, cod, chain, p, q, cfg)

    # ‖Ff‖ <= ‖1‖_cod ‖Ff‖_inf <= ‖1‖_cod ‖f‖_1 <= ‖1‖_cod ‖1‖_{dom'} ‖f‖_dom
    ones = np.ones(n)
    upper = float(cod.evaluate(ones)) * float(exact_dual(dom).evaluate(ones))
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, n, blocks]))
    X = trial_vectors(n, cfg.trials, rng, report.worst_witness)
    interval_ratio = float(np.max(safe_ratio(cod.evaluate(interval_sup_batch(X)), dom.evaluate(X)), initial=0.0))
    extras = {
        "blocks": blocks,
        "op_norm_upper": upper,
        "sanity_bound_holds": bool(report.max_ratio <= report.gamma * upper * (1.0 + cfg.tolerance)),
        "interval_ratio": interval_ratio,
    }
    if report.op_norm.exact:
        bound = fourier_maximal_constant(p) * report.op_norm.value
        extras.update({"interval_bound": bound, "interval_holds": bool(interval_ratio <= bound * (1.0 + cfg.tolerance))})
    report.extras.update(extras)
    return report
