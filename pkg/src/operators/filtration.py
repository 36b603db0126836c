# src/operators/filtration.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from src.errors import DimensionMismatch, DomainError, EmptyFiltration
from src.lattice.spaces import AtomicSpace


@dataclass(frozen=True, eq=False)
class Filtration:
    """A finite chain A_1 ⊆ A_2 ⊆ ... ⊆ A_Q of atom-index sets; empty sets are allowed."""

    domain: AtomicSpace
    chain: tuple[tuple[int, ...], ...]
    masks: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        chain = tuple(tuple(sorted({int(i) for i in members})) for members in self.chain)
        if not chain:
            raise EmptyFiltration("a filtration needs at least one set")
        n = self.domain.size
        masks = np.zeros((len(chain), n), dtype=bool)
        for k, members in enumerate(chain):
            if members and (members[0] < 0 or members[-1] >= n):
                raise DimensionMismatch(f"filtration set {k} has indices outside 0..{n - 1}")
            masks[k, list(members)] = True
        if np.any(masks[:-1] & ~masks[1:]):
            raise DomainError("filtration sets must be nested")
        masks.setflags(write=False)
        object.__setattr__(self, "chain", chain)
        object.__setattr__(self, "masks", masks)

    def __len__(self) -> int:
        return len(self.chain)

    def extend(self, members: Sequence[int]) -> "Filtration":
        return Filtration(self.domain, self.chain + (tuple(members),))

    def to_list(self) -> list[list[int]]:
        return [list(members) for members in self.chain]


def prefix_filtration(space: AtomicSpace, order: Optional[Sequence[int]] = None) -> Filtration:
    """A_k = first k atoms of ``order`` (index order by default), k = 1..n."""
    order = list(range(space.size)) if order is None else [int(i) for i in order]
    return Filtration(space, tuple(tuple(order[: k + 1]) for k in range(len(order))))


def random_filtration(space: AtomicSpace, rng: np.random.Generator, length: Optional[int] = None) -> Filtration:
    """Prefixes of a uniform random permutation cut at sorted random lengths (repeats allowed)."""
    n = space.size
    length = length or int(rng.integers(1, n + 1))
    order = rng.permutation(n)
    cuts = np.sort(rng.integers(0, n + 1, size=length))
    cuts[-1] = n
    return Filtration(space, tuple(tuple(order[:c].tolist()) for c in cuts))


def subchain(filtration: Filtration, keep: Sequence[int]) -> Filtration:
    """The filtration restricted to the chain positions in ``keep``."""
    keep = sorted(set(int(k) for k in keep))
    return Filtration(filtration.domain, tuple(filtration.chain[k] for k in keep))
