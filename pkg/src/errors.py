# src/errors.py
from __future__ import annotations


class LatticeError(ValueError):
    """Base class for every domain error raised by the toolkit."""


class DimensionMismatch(LatticeError): ...


class DomainError(LatticeError): ...


class UnknownKappa(LatticeError): ...


class FeasibilityViolated(LatticeError): ...


class SupportTooLarge(LatticeError): ...


class OverlapError(LatticeError): ...


class CountMismatch(LatticeError): ...


class EmptyFiltration(LatticeError): ...


class HypothesisViolated(LatticeError): ...


class NotNormed(LatticeError): ...


class QuadratureError(LatticeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error bound {achieved:.3e})")
        self.achieved = achieved
