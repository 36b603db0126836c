# src/estimates/partitions.py
"""Set partitions: enumeration, sampling, and extremal sums over all partitions."""
from __future__ import annotations

import math
from typing import Callable, Iterator, Optional, Sequence, TypeVar

import numpy as np

T = TypeVar("T")


def set_partitions(items: Sequence[T], max_blocks: Optional[int] = None) -> Iterator[list[list[T]]]:
    """Yield every partition of ``items`` into at most ``max_blocks`` blocks.

    Blocks are listed in order of their first element (restricted-growth order).
    """
    n = len(items)
    if n == 0:
        yield []
        return
    limit = n if max_blocks is None else max(1, min(max_blocks, n))
    labels = [0] * n

    def grow(i: int, used: int):
        if i == n:
            blocks: list[list[T]] = [[] for _ in range(used)]
            for item, label in zip(items, labels):
                blocks[label].append(item)
            yield blocks
            return
        for label in range(min(used + 1, limit)):
            labels[i] = label
            yield from grow(i + 1, max(used, label + 1))

    yield from grow(1, 1)


def partition_count(n: int, max_blocks: Optional[int] = None) -> int:
    """Σ_{k ≤ max_blocks} S(n, k); the Bell number when unrestricted."""
    if n == 0:
        return 1
    limit = n if max_blocks is None else min(max_blocks, n)
    # Stirling numbers of the second kind, row by row
    row = [1] + [0] * limit
    for m in range(1, n + 1):
        new = [0] * (limit + 1)
        for k in range(1, min(m, limit) + 1):
            new[k] = k * row[k] + row[k - 1]
        row = new
    return sum(row[1:])


def random_partition(n: int, max_blocks: int, rng: np.random.Generator) -> list[list[int]]:
    labels = rng.integers(max_blocks, size=n)
    order: dict[int, int] = {}
    blocks: list[list[int]] = []
    for i, label in enumerate(labels.tolist()):
        if label not in order:
            order[label] = len(blocks)
            blocks.append([])
        blocks[order[label]].append(i)
    return blocks


def labels_of(blocks: Sequence[Sequence[int]], n: int) -> list[int]:
    labels = [0] * n
    for k, block in enumerate(blocks):
        for i in block:
            labels[i] = k
    return labels


def subset_table(n: int) -> np.ndarray:
    """Boolean membership table, shape (2^n, n): row m is the subset with bitmask m."""
    masks = np.arange(1 << n)
    return ((masks[:, None] >> np.arange(n)) & 1).astype(bool)


def extremal_partition_value(
    block_values: Sequence[float],
    n: int,
    combine: Callable[[float, float], float],
    choose: Callable[[float, float], float],
) -> float:
    """Optimise the combined block values over every set partition of n elements.

    ``block_values[m]`` is the value of the block with bitmask m. Subset
    dynamic programming: the block holding the lowest remaining element is
    chosen among the submasks, so each partition is visited exactly once.
    """
    values = [float(v) for v in block_values]
    full = (1 << n) - 1
    best = [0.0] * (full + 1)
    for subset in range(1, full + 1):
        low = subset & -subset
        rest = subset ^ low
        sub = rest
        current = None
        while True:
            block = sub | low
            candidate = combine(values[block], best[subset ^ block])
            current = candidate if current is None else choose(current, candidate)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[subset] = current
    return best[full]


def lp_partition_extremum(block_norms: Sequence[float], n: int, p: float, maximize: bool) -> float:
    """sup (or inf) over partitions of (Σ_H ‖fχ_H‖^p)^{1/p}; a max over blocks when p = inf."""
    choose = max if maximize else min
    if math.isinf(p):
        return extremal_partition_value(block_norms, n, max, choose)
    powered = [float(v) ** p for v in block_norms]
    return extremal_partition_value(powered, n, lambda a, b: a + b, choose) ** (1.0 / p)
