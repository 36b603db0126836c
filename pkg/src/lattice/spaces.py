# src/lattice/spaces.py
"""Finite atomic measure spaces, vectors on them, and rearrangements."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from src.errors import DimensionMismatch, DomainError


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class AtomicSpace:
    """Atoms with positive weights; the universal domain of every lattice."""

    weights: tuple[float, ...]
    mu: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mu = np.asarray(self.weights, dtype=float).reshape(-1)
        if mu.size == 0:
            raise DomainError("an atomic space needs at least one atom")
        if not np.all(np.isfinite(mu)) or np.any(mu <= 0):
            raise DomainError("atom weights must be finite and positive")
        object.__setattr__(self, "weights", tuple(float(m) for m in mu))
        object.__setattr__(self, "mu", _frozen(mu))

    @classmethod
    def unit(cls, n: int) -> "AtomicSpace":
        return cls(tuple([1.0] * n))

    @property
    def size(self) -> int:
        return self.mu.size

    @property
    def total(self) -> float:
        return float(self.mu.sum())

    def __len__(self) -> int:
        return self.size

    def same_as(self, other: "AtomicSpace") -> bool:
        return self is other or self.weights == other.weights

    def vector(self, values: Iterable[float]) -> "LatticeVector":
        return LatticeVector(self, np.asarray(list(values), dtype=float))

    def zeros(self) -> "LatticeVector":
        return LatticeVector(self, np.zeros(self.size))

    def indicator(self, indices: Iterable[int]) -> "LatticeVector":
        return LatticeVector(self, mask_of(self.size, indices).astype(float))

    def delta(self, index: int, value: float = 1.0) -> "LatticeVector":
        values = np.zeros(self.size)
        values[index] = value
        return LatticeVector(self, values)

    def measure(self, indices: Iterable[int]) -> float:
        return float(self.mu[mask_of(self.size, indices)].sum())


def mask_of(size: int, indices: Iterable[int]) -> np.ndarray:
    mask = np.zeros(size, dtype=bool)
    idx = np.fromiter((int(i) for i in indices), dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= size):
        raise DimensionMismatch(f"index set {sorted(set(idx.tolist()))} outside 0..{size - 1}")
    mask[idx] = True
    return mask


@dataclass(frozen=True, eq=False)
class LatticeVector:
    """A real function on an AtomicSpace."""

    space: AtomicSpace
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size != self.space.size:
            raise DimensionMismatch(f"vector has {values.size} values, space has {self.space.size} atoms")
        if not np.all(np.isfinite(values)):
            raise DomainError("lattice vector values must be finite")
        object.__setattr__(self, "values", _frozen(values))

    def __len__(self) -> int:
        return self.values.size

    def abs(self) -> "LatticeVector":
        return LatticeVector(self.space, np.abs(self.values))

    def restrict(self, indices: Iterable[int]) -> "LatticeVector":
        """f·χ_A."""
        return LatticeVector(self.space, np.where(mask_of(self.space.size, indices), self.values, 0.0))

    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.values))

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        require_same_space(self.space, other.space)
        return LatticeVector(self.space, self.values + other.values)

    def __mul__(self, scalar: float) -> "LatticeVector":
        return LatticeVector(self.space, self.values * float(scalar))

    __rmul__ = __mul__

    def to_list(self) -> list[float]:
        return [float(v) for v in self.values]


@dataclass(frozen=True, eq=False)
class ComplexVector:
    """A complex function on an AtomicSpace, reduced to a LatticeVector by modulus."""

    space: AtomicSpace
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).reshape(-1)
        if values.size != self.space.size:
            raise DimensionMismatch(f"vector has {values.size} values, space has {self.space.size} atoms")
        if not np.all(np.isfinite(values)):
            raise DomainError("complex vector values must be finite")
        object.__setattr__(self, "values", _frozen(values))

    def __len__(self) -> int:
        return self.values.size

    def modulus(self) -> LatticeVector:
        return LatticeVector(self.space, np.abs(self.values))

    def to_list(self) -> list[list[float]]:
        return [[float(v.real), float(v.imag)] for v in self.values]


AnyVector = Union[LatticeVector, ComplexVector]


def require_same_space(a: AtomicSpace, b: AtomicSpace) -> None:
    if not a.same_as(b):
        raise DimensionMismatch("vectors live on different atomic spaces")


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Nonincreasing step function on (0, extent), zero after the last piece.

    Stored as levels plus cumulative right endpoints so that rearrangement and
    distribution share the exact same breakpoints.
    """

    levels: np.ndarray
    ends: np.ndarray
    extent: float

    def __post_init__(self):
        levels = np.array(self.levels, dtype=float).reshape(-1)
        ends = np.array(self.ends, dtype=float).reshape(-1)
        if levels.size != ends.size:
            raise DimensionMismatch("levels and ends must have equal length")
        if np.any(levels < 0) or not np.all(np.isfinite(levels)):
            raise DomainError("step levels must be finite and nonnegative")
        if np.any(np.diff(levels) > 0):
            raise DomainError("step levels must be nonincreasing")
        lengths = np.diff(ends, prepend=0.0)
        if np.any(lengths <= 0):
            raise DomainError("step lengths must be positive")
        extent = float(self.extent)
        if ends.size and extent < ends[-1]:
            raise DomainError("extent shorter than the pieces")
        object.__setattr__(self, "levels", _frozen(levels))
        object.__setattr__(self, "ends", _frozen(ends))
        object.__setattr__(self, "extent", extent)

    @classmethod
    def from_pieces(cls, pieces: Sequence[tuple[float, float]], extent: float | None = None) -> "StepFunction":
        levels = np.array([level for level, _ in pieces], dtype=float)
        ends = np.cumsum([length for _, length in pieces], dtype=float)
        if extent is None:
            extent = float(ends[-1]) if ends.size else 0.0
        return cls(levels, ends, extent)

    @property
    def starts(self) -> np.ndarray:
        return np.concatenate(([0.0], self.ends[:-1])) if self.ends.size else self.ends

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.ends, prepend=0.0)

    @property
    def pieces(self) -> list[tuple[float, float]]:
        return [(float(level), float(length)) for level, length in zip(self.levels, self.lengths)]

    def value_at(self, t: float) -> float:
        idx = int(np.searchsorted(self.ends, t, side="right"))
        return float(self.levels[idx]) if idx < self.levels.size else 0.0

    def integral(self, t: float) -> float:
        """∫_0^t of the step function."""
        covered = np.clip(np.minimum(self.ends, t) - self.starts, 0.0, None)
        return float(np.dot(self.levels, covered))

    @property
    def mass(self) -> float:
        return float(np.dot(self.levels, self.lengths))

    def equals(self, other: "StepFunction") -> bool:
        return (
            np.array_equal(self.levels, other.levels)
            and np.array_equal(self.ends, other.ends)
            and self.extent == other.extent
        )


def _sorted_magnitudes(magnitudes: np.ndarray, weights: np.ndarray):
    """Distinct nonzero magnitudes (descending) with the measure at or above each."""
    order = np.argsort(-magnitudes, kind="stable")
    mags = magnitudes[order]
    cum = np.cumsum(weights[order])
    keep = mags > 0
    mags, cum = mags[keep], cum[keep]
    if mags.size == 0:
        return mags, cum
    last = np.append(mags[1:] != mags[:-1], True)
    return mags[last], cum[last]


def distribution(f: AnyVector) -> StepFunction:
    """τ ↦ μ({|f| > τ}) as a step function over τ in (0, max|f|)."""
    mags, cum = _sorted_magnitudes(np.abs(f.values), f.space.mu)
    # ascending τ: μ drops from cum[k] to the next level at each distinct value
    return StepFunction(cum[::-1].copy(), mags[::-1].copy(), float(mags[0]) if mags.size else 0.0)


def rearrangement(f: AnyVector) -> StepFunction:
    """f* on (0, μ(Ω)), equal levels merged."""
    mags, cum = _sorted_magnitudes(np.abs(f.values), f.space.mu)
    return StepFunction(mags, cum, f.space.total)


def step_distribution(step: StepFunction) -> StepFunction:
    """Distribution function of a step function, on the same breakpoints."""
    keep = step.levels > 0
    levels, ends = step.levels[keep], step.ends[keep]
    return StepFunction(ends[::-1].copy(), levels[::-1].copy(), float(levels[0]) if levels.size else 0.0)


def double_star(fstar: StepFunction, t: float) -> float:
    """f**(t) = (1/t)∫_0^t f*."""
    if not t > 0:
        raise DomainError(f"f** needs t > 0, got {t}")
    return fstar.integral(t) / t
