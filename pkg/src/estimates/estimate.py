# src/estimates/estimate.py
"""Lower p- and upper q-estimate constants by closed form or partition search.

For a fixed set partition (H_1, ..., H_k) of the atoms the lower estimate ratio
is (Σ‖fχ_H‖^p)^{1/p} / ‖f‖, maximised over f by coordinate ascent; the upper
ratio is its reciprocal form ‖f‖ / (Σ‖fχ_H‖^q)^{1/q}. Every partition gets its
own seed derived from its labels, so allowing more blocks never lowers the
result.
"""
from __future__ import annotations

from typing import Iterable, Literal

import numpy as np

from src.errors import DomainError
from src.estimates.closed_form import Side, lp_estimate_constant, two_term_closed_form
from src.estimates.partitions import labels_of, partition_count, random_partition, set_partitions
from src.lattice.index import format_index, lp_combine
from src.lattice.norms import QuasiNorm, WeightedLp
from src.models import EstimateResult, SearchConfig, SearchStats
from src.observability import get_tracer
from src.search import maximize, safe_ratio


def _masks(blocks: list[list[int]], size: int) -> np.ndarray:
    masks = np.zeros((len(blocks), size))
    for k, block in enumerate(blocks):
        masks[k, block] = 1.0
    return masks


def partition_objective(norm: QuasiNorm, masks: np.ndarray, exponent: float, side: Side):
    """Batched ratio for one partition; ``x`` has shape (batch, n_atoms)."""

    def objective(x: np.ndarray) -> np.ndarray:
        pieces = np.asarray(norm.evaluate(x[:, None, :] * masks[None, :, :]))
        combined = lp_combine(pieces, exponent, axis=-1)
        whole = np.asarray(norm.evaluate(x))
        if side == "lower":
            return safe_ratio(combined, whole)
        return safe_ratio(whole, combined)

    return objective


def _equalized_start(norm: QuasiNorm, masks: np.ndarray) -> np.ndarray:
    sizes = np.asarray(norm.evaluate(masks))
    return (masks / np.where(sizes > 0, sizes, 1.0)[:, None]).sum(axis=0)


def _partitions(size: int, n: int, cfg: SearchConfig) -> tuple[Iterable[list[list[int]]], bool]:
    if size <= cfg.partition_cap and partition_count(size, n) <= cfg.max_partitions:
        return set_partitions(list(range(size)), n), True
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, size, n]))
    seen: set[tuple[int, ...]] = set()
    sampled = []
    for _ in range(cfg.max_partitions):
        blocks = random_partition(size, n, rng)
        key = tuple(labels_of(blocks, size))
        if len(blocks) > 1 and key not in seen:
            seen.add(key)
            sampled.append(blocks)
    return sampled, False


def _search(norm: QuasiNorm, exponent: float, n: int, cfg: SearchConfig, side: Side) -> EstimateResult:
    size = norm.space.size
    best_value = 1.0
    best_witness = [norm.space.delta(0).to_list()]
    evaluations = restarts = visited = 0
    partitions, exhaustive = _partitions(size, n, cfg)
    for blocks in partitions:
        if len(blocks) < 2:
            continue
        masks = _masks(blocks, size)
        objective = partition_objective(norm, masks, exponent, side)
        starts = [np.ones(size), _equalized_start(norm, masks)]
        outcome = maximize(objective, size, cfg, starts=starts, entropy=labels_of(blocks, size))
        visited += 1
        evaluations += outcome.evaluations
        restarts += outcome.restarts
        if outcome.value > best_value:
            x = np.abs(outcome.x)
            best_value = float(objective(x[None, :])[0])
            best_witness = [(x * m).tolist() for m in masks if np.any(x * m)]
    get_tracer().log_tool("partition_search", side=side, partitions=visited, exhaustive=exhaustive, value=best_value)
    return EstimateResult(
        value=best_value,
        exact=False,
        witness=best_witness,
        trials=SearchStats(
            restarts=restarts, evaluations=evaluations, partitions=visited, partitions_exhaustive=exhaustive
        ),
        method="partition-search" if exhaustive else "sampled-partition-search",
    )


def estimate_const(
    norm: QuasiNorm, exponent: float, n: int, cfg: SearchConfig, side: Side
) -> EstimateResult:
    if n < 2:
        raise DomainError(f"estimate constants need n >= 2, got {n}")
    if not exponent > 0:
        raise DomainError(f"estimate exponent must be positive, got {exponent}")
    if isinstance(norm, WeightedLp):
        return EstimateResult.closed_form(lp_estimate_constant(norm, exponent, n, side), method="lp-closed-form")
    if n == 2 or norm.space.size <= 1:
        closed = two_term_closed_form(norm, exponent, side)
        if closed is not None:
            return EstimateResult.closed_form(closed, method=f"{norm.family}-closed-form")
    tracer = get_tracer()
    tracer.log_node("estimate", "start", side=side, family=norm.family, exponent=format_index(exponent), n=n)
    result = _search(norm, exponent, n, cfg, side)
    tracer.log_node("estimate", "done", side=side, value=result.value, partitions=result.trials.partitions)
    return result


def lower_estimate_const(norm: QuasiNorm, p: float, n: int, cfg: SearchConfig) -> EstimateResult:
    """ℓ_(p),n: least C with (Σ‖f_j‖^p)^{1/p} <= C‖Σ f_j‖ over n disjoint f_j."""
    return estimate_const(norm, p, n, cfg, "lower")


def upper_estimate_const(norm: QuasiNorm, q: float, n: int, cfg: SearchConfig) -> EstimateResult:
    """u^(q),n: least C with ‖Σ f_j‖ <= C(Σ‖f_j‖^q)^{1/q} over n disjoint f_j."""
    return estimate_const(norm, q, n, cfg, "upper")


def searched_estimate_const(
    norm: QuasiNorm, exponent: float, n: int, cfg: SearchConfig, side: Literal["lower", "upper"]
) -> EstimateResult:
    """Partition search even where a closed form exists (cross-checks)."""
    if n < 2:
        raise DomainError(f"estimate constants need n >= 2, got {n}")
    return _search(norm, exponent, n, cfg, side)
