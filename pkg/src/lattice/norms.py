# src/lattice/norms.py
"""Lattice quasi-norm families on finite atomic spaces.

Every family evaluates a stack of vectors at once: ``evaluate`` takes an array
of shape (..., n_atoms) and reduces the last axis. Norms depend on |f| only.
"""
from __future__ import annotations

import math
import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import ClassVar, Optional

import numpy as np
from scipy import integrate

from src.config import config
from src.errors import DimensionMismatch, DomainError, QuadratureError, UnknownKappa
from src.fallbacks import escalating_retries, subdivision_limit
from src.lattice.index import format_index, inv, is_inf, lp_combine
from src.lattice.spaces import AnyVector, AtomicSpace, distribution, rearrangement
from src.lattice.weights import WeightFunction
from src.observability import get_tracer


def _sorted_batch(values: np.ndarray, mu: np.ndarray):
    """Magnitudes sorted descending (stable, ties by atom index) and cumulative measure."""
    mags = np.abs(values)
    order = np.argsort(-mags, axis=-1, kind="stable")
    mags = np.take_along_axis(mags, order, axis=-1)
    ends = np.cumsum(np.take_along_axis(np.broadcast_to(mu, values.shape), order, axis=-1), axis=-1)
    starts = np.concatenate((np.zeros(ends.shape[:-1] + (1,)), ends[..., :-1]), axis=-1)
    return mags, starts, ends


def _quasi_triangle(p: float) -> float:
    return max(1.0, 2.0 ** (inv(p) - 1.0))


@dataclass(frozen=True, eq=False)
class QuasiNorm(ABC):
    space: AtomicSpace

    family: ClassVar[str] = "abstract"
    rearrangement_invariant: ClassVar[bool] = True

    @abstractmethod
    def evaluate(self, values):
        """Norm of each vector stacked along the last axis."""

    @property
    @abstractmethod
    def kappa(self) -> float:
        """Triangle constant: ‖f+g‖ ≤ κ(‖f‖+‖g‖)."""

    @abstractmethod
    def params(self) -> dict: ...

    def __call__(self, f: AnyVector) -> float:
        return eval_norm(self, f)

    def _check(self, values) -> np.ndarray:
        values = np.asarray(values)
        if values.shape[-1] != self.space.size:
            raise DimensionMismatch(f"expected {self.space.size} atoms, got {values.shape[-1]}")
        return values

    def describe(self) -> dict:
        return {"family": self.family, **self.params(), "atoms": list(self.space.weights)}


@dataclass(frozen=True, eq=False)
class WeightedLp(QuasiNorm):
    p: float = 2.0
    family: ClassVar[str] = "lp"

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError(f"L^p needs p > 0, got {self.p}")

    def evaluate(self, values):
        values = np.abs(self._check(values))
        if is_inf(self.p):
            return values.max(axis=-1)
        return np.power((np.power(values, self.p) * self.space.mu).sum(axis=-1), 1.0 / self.p)

    @property
    def kappa(self) -> float:
        return _quasi_triangle(self.p)

    def params(self) -> dict:
        return {"p": format_index(self.p)}


@dataclass(frozen=True, eq=False)
class LorentzLambda(QuasiNorm):
    """‖f‖ = (∫ (f*)^r w)^{1/r}, evaluated exactly through the primitive W."""

    r: float = 1.0
    weight: WeightFunction = field(default_factory=lambda: WeightFunction.power(1.0, 0.0))
    family: ClassVar[str] = "lambda"

    def __post_init__(self):
        if not (self.r > 0 and not is_inf(self.r)):
            raise DomainError(f"Λ_(r,w) needs 0 < r < inf, got {self.r}")

    def evaluate(self, values):
        mags, starts, ends = _sorted_batch(self._check(values), self.space.mu)
        increments = self.weight.W(ends) - self.weight.W(starts)
        return np.power((np.power(mags, self.r) * increments).sum(axis=-1), 1.0 / self.r)

    @property
    def kappa(self) -> float:
        w = self.weight
        if w.is_nonincreasing:
            # decreasing weight: a norm for r >= 1, otherwise the dilation bound w(2s) <= w(s)
            return 1.0 if self.r >= 1 else _quasi_triangle(self.r) * 2.0 ** (1.0 / self.r)
        if w.kind == "power":
            # (f+g)*(t) <= f*(t/2) + g*(t/2) and w(2s) = 2^a w(s)
            return _quasi_triangle(self.r) * 2.0 ** ((w.a + 1.0) / self.r)
        raise UnknownKappa("no tabulated triangle constant for Λ_(r,w) with a non-monotone piecewise weight")

    def params(self) -> dict:
        return {"r": self.r, "weight": self.weight.describe()}


@dataclass(frozen=True, eq=False)
class ClassicalLorentz(QuasiNorm):
    """L_(p,r): the power weight with W(t) = t^{r/p}; r = inf gives the weak form."""

    p: float = 2.0
    r: float = 2.0
    family: ClassVar[str] = "lorentz"

    def __post_init__(self):
        if not (self.p > 0 and not is_inf(self.p)):
            raise DomainError(f"L_(p,r) needs 0 < p < inf, got {self.p}")
        if not self.r > 0:
            raise DomainError(f"L_(p,r) needs r > 0, got {self.r}")

    def evaluate(self, values):
        mags, starts, ends = _sorted_batch(self._check(values), self.space.mu)
        if is_inf(self.r):
            return (mags * np.power(ends, 1.0 / self.p)).max(axis=-1)
        e = self.r / self.p
        increments = np.power(ends, e) - np.power(starts, e)
        return np.power((np.power(mags, self.r) * increments).sum(axis=-1), 1.0 / self.r)

    @property
    def kappa(self) -> float:
        """The Lebesgue constant when r = p, 1 when 1 <= r < p, else 2^{1/p}·max(1, 2^{1/r-1}).

        max(1, 2^{1/min(p,r)-1}) is not a triangle constant once p < r: it gives 1
        for L_(1,2), which is not normable.
        """
        if self.r == self.p:
            return _quasi_triangle(self.p)
        if 1.0 <= self.r < self.p:
            return 1.0
        # dilation bound, valid for every (p, r)
        return 2.0 ** (1.0 / self.p) * _quasi_triangle(self.r)

    def params(self) -> dict:
        return {"p": self.p, "r": format_index(self.r)}


@dataclass(frozen=True, eq=False)
class WeakLorentz(QuasiNorm):
    """L_(q,inf): sup_t t^{1/q} f*(t)."""

    q: float = 2.0
    family: ClassVar[str] = "weak"

    def __post_init__(self):
        if not (self.q > 0 and not is_inf(self.q)):
            raise DomainError(f"L_(q,inf) needs 0 < q < inf, got {self.q}")

    def evaluate(self, values):
        mags, _, ends = _sorted_batch(self._check(values), self.space.mu)
        return (mags * np.power(ends, 1.0 / self.q)).max(axis=-1)

    @property
    def kappa(self) -> float:
        return 2.0 ** (1.0 / self.q)

    def params(self) -> dict:
        return {"q": self.q}


@dataclass(frozen=True, eq=False)
class Amalgam(QuasiNorm):
    """W(L^r, l^s): L^r(μ) inside each contiguous block, l^s across blocks."""

    r: float = 1.0
    s: float = 1.0
    blocks: tuple[tuple[int, int], ...] = ()
    family: ClassVar[str] = "amalgam"
    rearrangement_invariant: ClassVar[bool] = False

    def __post_init__(self):
        if not (self.r > 0 and self.s > 0):
            raise DomainError("amalgam exponents must be positive")
        blocks = tuple((int(a), int(b)) for a, b in self.blocks) or tuple((i, i + 1) for i in range(self.space.size))
        cursor = 0
        for start, stop in blocks:
            if start != cursor or stop <= start:
                raise DomainError(f"blocks must be ordered contiguous ranges covering the atoms, got {blocks}")
            cursor = stop
        if cursor != self.space.size:
            raise DomainError(f"blocks cover {cursor} atoms, space has {self.space.size}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def equal_blocks(cls, space: AtomicSpace, r: float, s: float, count: int) -> "Amalgam":
        if count < 1 or space.size % count:
            raise DomainError(f"{space.size} atoms cannot be split into {count} equal blocks")
        size = space.size // count
        return cls(space, r, s, tuple((k * size, (k + 1) * size) for k in range(count)))

    @property
    def starts(self) -> np.ndarray:
        return np.array([start for start, _ in self.blocks])

    def block_of(self) -> np.ndarray:
        labels = np.empty(self.space.size, dtype=int)
        for k, (start, stop) in enumerate(self.blocks):
            labels[start:stop] = k
        return labels

    def local_norms(self, values) -> np.ndarray:
        values = np.abs(self._check(values))
        if is_inf(self.r):
            return np.maximum.reduceat(values, self.starts, axis=-1)
        sums = np.add.reduceat(np.power(values, self.r) * self.space.mu, self.starts, axis=-1)
        return np.power(sums, 1.0 / self.r)

    def evaluate(self, values):
        return lp_combine(self.local_norms(values), self.s, axis=-1)

    @property
    def kappa(self) -> float:
        return _quasi_triangle(self.r) * _quasi_triangle(self.s)

    def params(self) -> dict:
        return {"r": format_index(self.r), "s": format_index(self.s), "blocks": [list(b) for b in self.blocks]}


@dataclass(frozen=True, eq=False)
class LorentzGamma(QuasiNorm):
    """‖f‖ = (∫_0^∞ (f**)^r w)^{1/r} by adaptive quadrature on each rearrangement piece."""

    r: float = 1.0
    weight: WeightFunction = field(default_factory=lambda: WeightFunction.power(1.0, 0.0))
    quad_tol: float = field(default_factory=lambda: config.QUAD_TOL)
    family: ClassVar[str] = "gamma"

    def __post_init__(self):
        if not (self.r > 0 and not is_inf(self.r)):
            raise DomainError(f"Γ_(r,w) needs 0 < r < inf, got {self.r}")
        if not self.quad_tol > 0:
            raise DomainError("quadrature tolerance must be positive")

    def evaluate(self, values):
        values = self._check(values)
        if values.ndim == 1:
            return self._single(values)
        flat = values.reshape(-1, values.shape[-1])
        return np.array([self._single(row) for row in flat]).reshape(values.shape[:-1])

    def _single(self, values: np.ndarray) -> float:
        fstar = rearrangement(self.space.vector(values))
        if fstar.levels.size == 0:
            return 0.0
        for attempt in escalating_retries(config.QUAD_ATTEMPTS):
            with attempt:
                total = self._integral(fstar, subdivision_limit(attempt.retry_state.attempt_number))
        attempts = attempt.retry_state.attempt_number
        if attempts > 1:
            get_tracer().log_tool("gamma_quadrature", attempts=attempts, limit=subdivision_limit(attempts))
        return total ** (1.0 / self.r)

    def _tail(self, mass: float, start: float) -> float:
        """∫_start^∞ (mass/t)^r w(t) dt in closed form."""
        r, w = self.r, self.weight
        if w.kind == "power":
            if w.a - r >= -1:
                raise DomainError("Γ_(r,w) norm diverges: need a < r - 1 for the tail of f**")
            return mass**r * w.c * start ** (w.a - r + 1.0) / (r - w.a - 1.0)
        edges = [start] + [b for b in w.breakpoints if b > start]
        total = 0.0
        for lo, hi in zip(edges, edges[1:] + [math.inf]):
            level = float(w.w(lo))
            if level == 0.0:
                continue
            if math.isinf(hi):
                if r <= 1:
                    raise DomainError("Γ_(r,w) norm diverges: nonzero terminal weight level needs r > 1")
                total += mass**r * level * lo ** (1.0 - r) / (r - 1.0)
            elif r == 1:
                total += mass * level * math.log(hi / lo)
            else:
                total += mass**r * level * (hi ** (1.0 - r) - lo ** (1.0 - r)) / (1.0 - r)
        return total

    def _integral(self, fstar, limit: int) -> float:
        r, w = self.r, self.weight
        levels, starts, ends = fstar.levels, fstar.starts, fstar.ends
        # first piece: f** is constant
        total = levels[0] ** r * float(w.W(ends[0]))
        error = 0.0
        mass = levels[0] * ends[0]
        knots = np.asarray(w.breakpoints)
        for level, lo, hi in zip(levels[1:], starts[1:], ends[1:]):
            offset = mass - level * lo

            def integrand(t, offset=offset, level=level):
                return ((offset + level * t) / t) ** r * float(w.w(t))

            inner = knots[(knots > lo) & (knots < hi)].tolist() if knots.size else []
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                value, err = integrate.quad(
                    integrand, lo, hi, epsabs=0.0, epsrel=self.quad_tol, limit=limit, points=inner or None
                )
            total += value
            error += err
            mass += level * (hi - lo)
        total += self._tail(mass, float(ends[-1]))
        if error > self.quad_tol * abs(total) + 1e-300:
            raise QuadratureError("Γ-norm quadrature did not converge", achieved=error / max(abs(total), 1e-300))
        return total

    @property
    def kappa(self) -> float:
        # f -> f** is sublinear, so only the outer L^r(w) constant remains
        return _quasi_triangle(self.r)

    def params(self) -> dict:
        return {"r": self.r, "weight": self.weight.describe(), "quad_tol": self.quad_tol}


def eval_norm(norm: QuasiNorm, f: AnyVector) -> float:
    if not f.space.same_as(norm.space):
        raise DimensionMismatch("vector does not live on the norm's space")
    return float(norm.evaluate(np.abs(f.values)))


def triangle_constant(norm: QuasiNorm) -> float:
    return float(norm.kappa)


def layer_cake_lambda(norm: LorentzLambda, f: AnyVector) -> float:
    """(∫_0^∞ W(μ_f(y)) d(y^r))^{1/r}, computed from the distribution function."""
    mu_f = distribution(f)
    lo = np.concatenate(([0.0], mu_f.ends[:-1])) if mu_f.ends.size else mu_f.ends
    increments = np.power(mu_f.ends, norm.r) - np.power(lo, norm.r)
    return float(np.dot(norm.weight.W(mu_f.levels), increments) ** (1.0 / norm.r))


def dual_gamma_weight(norm: LorentzLambda) -> LorentzGamma:
    """Γ_(r',w~) with w~ = (W(x)/x)^{-r'} w(x), the space representing the Köthe dual of Λ_(r,w)."""
    w = norm.weight
    if w.kind != "power":
        raise DomainError("dual Γ weight is available in closed form for power weights only")
    if norm.r <= 1:
        raise DomainError("dual Γ weight needs r > 1")
    rp = norm.r / (norm.r - 1.0)
    exponent = w.a * (1.0 - rp)
    coefficient = w.c * (w.c / (w.a + 1.0)) ** (-rp)
    return LorentzGamma(norm.space, rp, WeightFunction.power(coefficient, exponent))


def optional_kappa(norm: QuasiNorm) -> Optional[float]:
    try:
        return triangle_constant(norm)
    except UnknownKappa:
        return None
