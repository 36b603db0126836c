# src/operators/linear.py
"""Dense operators between atomic spaces and the maximal and triangular operators built on them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.errors import CountMismatch, DimensionMismatch, DomainError, OverlapError
from src.lattice.spaces import AnyVector, AtomicSpace, ComplexVector, LatticeVector
from src.operators.filtration import Filtration


@dataclass(frozen=True, eq=False)
class LinearOp:
    """Matrix of shape (codomain.size, domain.size); measures live in the norms, not here."""

    matrix: np.ndarray
    domain: AtomicSpace
    codomain: AtomicSpace

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex if np.iscomplexobj(self.matrix) else float)
        if matrix.shape != (self.codomain.size, self.domain.size):
            raise DimensionMismatch(
                f"matrix shape {matrix.shape} does not match spaces ({self.codomain.size}, {self.domain.size})"
            )
        if not np.all(np.isfinite(matrix)):
            raise DomainError("operator entries must be finite")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, space: AtomicSpace) -> "LinearOp":
        return cls(np.eye(space.size), space, space)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.matrix)

    def __call__(self, values: np.ndarray) -> np.ndarray:
        """Apply to a stack of raw vectors, shape (..., domain.size)."""
        return np.asarray(values) @ self.matrix.T


def apply(T: LinearOp, f: AnyVector) -> AnyVector:
    if not f.space.same_as(T.domain):
        raise DimensionMismatch("f does not live on the operator's domain")
    out = T(f.values)
    if np.iscomplexobj(out):
        return ComplexVector(T.codomain, out)
    return LatticeVector(T.codomain, out)


def maximal_batch(T: LinearOp, masks: np.ndarray, values: np.ndarray) -> np.ndarray:
    """max over the chain of |T(fχ_A)|; ``values`` shape (..., n) to (..., m)."""
    values = np.asarray(values)
    restricted = values[..., None, :] * masks
    return np.abs(T(restricted)).max(axis=-2)


def maximal_apply(T: LinearOp, A: Filtration, f: AnyVector) -> LatticeVector:
    """T*f = sup_α |T(fχ_{A_α})|, pointwise."""
    if not A.domain.same_as(T.domain):
        raise DimensionMismatch("filtration is not over the operator's domain")
    if not f.space.same_as(T.domain):
        raise DimensionMismatch("f does not live on the operator's domain")
    return LatticeVector(T.codomain, maximal_batch(T, A.masks, f.values))


def _part_masks(parts: Sequence[Sequence[int]], size: int, side: str) -> np.ndarray:
    masks = np.zeros((len(parts), size), dtype=bool)
    for k, part in enumerate(parts):
        idx = np.asarray(list(part), dtype=int)
        if idx.size and (idx.min() < 0 or idx.max() >= size):
            raise DimensionMismatch(f"{side} part {k} has indices outside 0..{size - 1}")
        if np.any(masks[:, idx].any(axis=0)) or np.unique(idx).size != idx.size:
            raise OverlapError(f"{side} parts must be pairwise disjoint (part {k} overlaps)")
        masks[k, idx] = True
    return masks


def triangular_matrix(
    T: LinearOp, omega: Sequence[Sequence[int]], omega_tilde: Sequence[Sequence[int]]
) -> np.ndarray:
    """Matrix of f -> Σ_{j<=k} χ_{Ω~_k} T(fχ_{Ω_j})."""
    if len(omega) != len(omega_tilde):
        raise CountMismatch(f"{len(omega)} domain parts but {len(omega_tilde)} codomain parts")
    dom = _part_masks(omega, T.domain.size, "domain")
    cod = _part_masks(omega_tilde, T.codomain.size, "codomain")
    prefixes = np.cumsum(dom, axis=0) > 0
    # row x picks up T restricted to A_k when x lies in Ω~_k
    return (cod.T.astype(float) @ prefixes.astype(float)) * T.matrix


def triangular_apply(
    T: LinearOp, omega: Sequence[Sequence[int]], omega_tilde: Sequence[Sequence[int]], f: AnyVector
) -> AnyVector:
    if not f.space.same_as(T.domain):
        raise DimensionMismatch("f does not live on the operator's domain")
    out = np.asarray(f.values) @ triangular_matrix(T, omega, omega_tilde).T
    if np.iscomplexobj(out):
        return ComplexVector(T.codomain, out)
    return LatticeVector(T.codomain, out)


def selector_sets(T: LinearOp, A: Filtration, f: AnyVector) -> tuple[list[list[int]], list[list[int]]]:
    """Ω_k = A_k minus A_{k-1}; Ω~_k = points whose first maximiser of |T(fχ_{A_α})| is α = k."""
    restricted = np.asarray(f.values)[None, :] * A.masks
    levels = np.abs(T(restricted))
    choice = np.argmax(levels, axis=0)
    previous = np.vstack((np.zeros((1, T.domain.size), dtype=bool), A.masks[:-1]))
    omega = [np.flatnonzero(m & ~prev).tolist() for m, prev in zip(A.masks, previous)]
    omega_tilde = [np.flatnonzero(choice == k).tolist() for k in range(len(A))]
    return omega, omega_tilde


def kothe_dual_op(T: LinearOp) -> LinearOp:
    """T' with T'_{ij} = (ν_j/μ_i) T_{ji}, so that Σ g·Tf ν = Σ f·T'g μ."""
    mu, nu = T.domain.mu, T.codomain.mu
    return LinearOp(T.matrix.T * nu[None, :] / mu[:, None], T.codomain, T.domain)


def pairing_gap(T: LinearOp, f: np.ndarray, g: np.ndarray) -> float:
    """Relative gap |Σ g·Tf ν - Σ f·T'g μ| of the Köthe pairing."""
    dual = kothe_dual_op(T)
    left = np.sum(g * T(f) * T.codomain.mu)
    right = np.sum(f * dual(g) * T.domain.mu)
    scale = max(abs(left), abs(right), 1e-300)
    return float(abs(left - right) / scale)
