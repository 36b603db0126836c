# src/models.py
from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import config


class SearchConfig(BaseModel):
    """Seeded coordinate-ascent settings shared by every search."""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(default_factory=lambda: config.SEED)
    restarts: int = Field(default_factory=lambda: config.RESTARTS, ge=1)
    iterations: int = Field(default_factory=lambda: config.ITERATIONS, ge=1)
    step_initial: float = Field(default_factory=lambda: config.STEP_INITIAL, gt=0)
    step_decay: float = Field(default_factory=lambda: config.STEP_DECAY, gt=0, lt=1)
    step_min: float = Field(default_factory=lambda: config.STEP_MIN, gt=0)
    tolerance: float = Field(default_factory=lambda: config.TOLERANCE, gt=0)
    trials: int = Field(default_factory=lambda: config.TRIALS, ge=1)
    partition_cap: int = Field(default_factory=lambda: config.PARTITION_CAP, ge=1)
    max_partitions: int = Field(default_factory=lambda: config.MAX_PARTITIONS, ge=1)
    workers: int = Field(default_factory=lambda: max(1, config.WORKERS), ge=1)

    @classmethod
    def from_config(cls, **overrides: Any) -> "SearchConfig":
        """Defaults from the environment-backed ``config``, with keyword overrides."""
        return cls(**{k: v for k, v in overrides.items() if v is not None})

    def with_seed(self, seed: int) -> "SearchConfig":
        return self.model_copy(update={"seed": int(seed)})

    def reproducible(self) -> Dict[str, Any]:
        """Everything that influences results (worker count does not)."""
        return self.model_dump(exclude={"workers"})


class SearchStats(BaseModel):
    restarts: int = 0
    evaluations: int = 0
    partitions: int = 0
    partitions_exhaustive: bool = True


class EstimateResult(BaseModel):
    value: float = Field(..., ge=0)
    exact: bool
    witness: Optional[List[List[float]]] = None
    trials: SearchStats = Field(default_factory=SearchStats)
    method: str = "search"

    @field_validator("witness")
    @classmethod
    def _disjoint(cls, witness):
        if witness and len(witness) > 1:
            seen: set[int] = set()
            for vector in witness:
                support = {i for i, v in enumerate(vector) if v != 0}
                if support & seen:
                    raise ValueError("witness vectors must have pairwise disjoint supports")
                seen |= support
        return witness

    @classmethod
    def closed_form(cls, value: float, method: str) -> "EstimateResult":
        return cls(value=value, exact=True, method=method)


class ConditionCheck(BaseModel):
    holds: bool
    violation: Optional[List[float]] = None
    worst_ratio: float
    grid_points: int


class ConstantsReport(BaseModel):
    p: Union[float, str]
    q: Union[float, str]
    tau: Optional[float] = None
    kappa: float = Field(..., ge=1)
    ell: float = Field(..., ge=1)
    u: float = Field(..., ge=1)
    feasibility_bound: float
    feasible: bool
    gamma: Optional[float] = None
    delta: Optional[float] = None
    classical: Optional[float] = None
    corollary: Optional[float] = None

    @model_validator(mode="after")
    def _gamma_iff_feasible(self):
        if (self.gamma is not None) != self.feasible:
            raise ValueError("gamma must be present exactly when the parameters are feasible")
        if self.gamma is not None and self.gamma < 1:
            raise ValueError("gamma must be >= 1")
        return self


Verdict = Literal["pass", "fail", "no-verdict"]


class CKReport(BaseModel):
    p: Union[float, str]
    q: Union[float, str]
    kappa: float
    ell: float
    u: float
    gamma: float
    op_norm: EstimateResult
    max_ratio: float
    margin: float
    trial_count: int
    worst_witness: List[float]
    tolerance: float
    passed: Optional[bool] = None
    verdict: Verdict = "no-verdict"
    extras: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _verdict_consistent(self):
        expected = "no-verdict" if self.passed is None else ("pass" if self.passed else "fail")
        if self.verdict != expected:
            raise ValueError(f"verdict {self.verdict!r} disagrees with passed={self.passed}")
        return self


class DualityReport(BaseModel):
    p: Union[float, str]
    p_conjugate: Union[float, str]
    n: int
    lower: EstimateResult
    dual_upper: EstimateResult
    gap: float
    mirror_upper: EstimateResult
    mirror_dual_lower: EstimateResult
    mirror_gap: float


class MPZReport(BaseModel):
    holds: bool
    min_slack: float
    max_violation: float
    n: int


class CriterionResult(BaseModel):
    name: str
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)


class SuiteReport(BaseModel):
    seed: int
    quick: bool
    criteria: List[CriterionResult]
    passed: bool


Command = Literal["norm", "estimate", "constants", "verify", "dual-verify", "fourier", "suite"]


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Command
    params: Dict[str, Any] = Field(default_factory=dict)
    seed: int = Field(default_factory=lambda: config.SEED)
    output: Optional[str] = None
