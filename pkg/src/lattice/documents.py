# src/lattice/documents.py
"""JSON documents describing a space, a norm and named vectors.

    {
      "atoms": [1, 1, 2],
      "norm": {"family": "amalgam", "r": 1, "s": "inf", "blocks": [[0, 2], [2, 3]]},
      "vectors": {"f": [1, -2, 0.5]}
    }
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Dict, List, Literal, Union

from pydantic import BaseModel, BeforeValidator, Field, ValidationError

from src.config import config
from src.errors import DomainError
from src.lattice.index import parse_index
from src.lattice.norms import (
    Amalgam,
    ClassicalLorentz,
    LorentzGamma,
    LorentzLambda,
    QuasiNorm,
    WeakLorentz,
    WeightedLp,
)
from src.lattice.spaces import AtomicSpace, LatticeVector
from src.lattice.weights import WeightFunction

Index = Annotated[float, BeforeValidator(parse_index)]


class PowerWeightSpec(BaseModel):
    kind: Literal["power"]
    c: float = 1.0
    a: float = 0.0


class PiecewiseWeightSpec(BaseModel):
    kind: Literal["piecewise"]
    breakpoints: List[float]
    levels: List[float]


WeightSpec = Annotated[Union[PowerWeightSpec, PiecewiseWeightSpec], Field(discriminator="kind")]


class LpSpec(BaseModel):
    family: Literal["lp"]
    p: Index


class LambdaSpec(BaseModel):
    family: Literal["lambda"]
    r: Index
    weight: WeightSpec


class GammaSpec(BaseModel):
    family: Literal["gamma"]
    r: Index
    weight: WeightSpec
    quad_tol: float = Field(default_factory=lambda: config.QUAD_TOL, gt=0)


class LorentzSpec(BaseModel):
    family: Literal["lorentz"]
    p: Index
    r: Index


class WeakSpec(BaseModel):
    family: Literal["weak"]
    q: Index


class AmalgamSpec(BaseModel):
    family: Literal["amalgam"]
    r: Index
    s: Index
    blocks: List[List[int]] = Field(default_factory=list)


NormSpec = Annotated[
    Union[LpSpec, LambdaSpec, GammaSpec, LorentzSpec, WeakSpec, AmalgamSpec],
    Field(discriminator="family"),
]


class LatticeDocument(BaseModel):
    atoms: List[float] = Field(..., min_length=1)
    norm: NormSpec
    vectors: Dict[str, List[float]] = Field(default_factory=dict)


def build_weight(spec: Union[PowerWeightSpec, PiecewiseWeightSpec]) -> WeightFunction:
    if isinstance(spec, PowerWeightSpec):
        return WeightFunction.power(spec.c, spec.a)
    return WeightFunction.piecewise(spec.breakpoints, spec.levels)


def build_norm(space: AtomicSpace, spec) -> QuasiNorm:
    if isinstance(spec, LpSpec):
        return WeightedLp(space, spec.p)
    if isinstance(spec, LambdaSpec):
        return LorentzLambda(space, spec.r, build_weight(spec.weight))
    if isinstance(spec, GammaSpec):
        return LorentzGamma(space, spec.r, build_weight(spec.weight), spec.quad_tol)
    if isinstance(spec, LorentzSpec):
        return ClassicalLorentz(space, spec.p, spec.r)
    if isinstance(spec, WeakSpec):
        return WeakLorentz(space, spec.q)
    return Amalgam(space, spec.r, spec.s, tuple(tuple(b) for b in spec.blocks))


def load_document(source: Union[str, Path, dict]) -> tuple[AtomicSpace, QuasiNorm, Dict[str, LatticeVector]]:
    """Parse a document from a path or an already-decoded dict."""
    if not isinstance(source, dict):
        source = json.loads(Path(source).read_text(encoding="utf-8"))
    try:
        doc = LatticeDocument.model_validate(source)
    except ValidationError as e:
        raise DomainError(f"invalid lattice document: {e}") from e
    space = AtomicSpace(tuple(doc.atoms))
    norm = build_norm(space, doc.norm)
    vectors = {name: space.vector(values) for name, values in doc.vectors.items()}
    return space, norm, vectors


def norm_from_options(space: AtomicSpace, family: str, **options) -> QuasiNorm:
    """Build a norm from loose CLI-style options (index strings allowed)."""
    payload = {"family": family, **{k: v for k, v in options.items() if v is not None}}
    if "weight" in payload and isinstance(payload["weight"], str):
        payload["weight"] = json.loads(payload["weight"])
    try:
        doc = LatticeDocument.model_validate({"atoms": list(space.weights), "norm": payload})
    except ValidationError as e:
        raise DomainError(f"invalid norm options: {e}") from e
    return build_norm(space, doc.norm)

