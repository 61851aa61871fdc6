import math
from enum import Enum
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# ===== helpers =====

ComplexPair = Tuple[float, float]


def to_pair(value: complex) -> ComplexPair:
    """Complex numbers travel as [re, im] pairs in every report."""
    value = complex(value)
    return (float(value.real), float(value.imag))


def finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


# ===================================================================
# Enums shared by the services and the command line
# ===================================================================

class Verdict(str, Enum):
    passed = "pass"
    failed = "fail"
    inconclusive = "inconclusive"


class HullVerdict(str, Enum):
    inside = "inside"
    boundary = "boundary"
    outside = "outside"


class StabilityStatus(str, Enum):
    stable_certified = "stable-certified"
    no_counterexample = "no-counterexample-found"
    counterexample = "counterexample"


class CriticalRegime(str, Enum):
    complex_critical = "complex-critical"
    real_critical = "real-critical"


class SectionOutcome(str, Enum):
    passed = "pass"
    failed = "fail"
    degenerate = "degenerate"
    inconclusive = "inconclusive"


class OutputFormat(str, Enum):
    text = "text"
    json = "json"


# ===================================================================
# Input models
# ===================================================================

class CubicSpec(BaseModel):
    """Real cubic with roots a+bi, a-bi and c."""

    a: float
    b: float
    c: float

    model_config = ConfigDict(frozen=True)

    @field_validator("a", "b", "c")
    @classmethod
    def finite(cls, v):
        if not math.isfinite(v):
            raise ValueError("cubic parameters must be finite")
        return v

    @field_validator("b")
    @classmethod
    def b_nonzero(cls, v):
        if v == 0:
            raise ValueError("b must be nonzero (the roots a+bi, a-bi must be non-real)")
        return v


class RunConfig(BaseModel):
    command: str
    poly_text: Optional[str] = None
    poly_file: Optional[str] = None
    theta: Optional[List[float]] = None
    k: int = 1
    tol: float
    trials: int = Field(ge=1)
    seed: int
    output_format: OutputFormat = OutputFormat.text
    count: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def single_poly_source(self):
        if self.poly_text is not None and self.poly_file is not None:
            raise ValueError("give either --poly or --poly-file, not both")
        return self

    @field_validator("k")
    @classmethod
    def k_positive(cls, v):
        if v < 1:
            raise ValueError("--k is 1-based and must be >= 1")
        return v


# ===================================================================
# Report models (the machine-readable output of every command)
# ===================================================================

class WitnessOut(BaseModel):
    point: List[ComplexPair]
    residual: Optional[float] = None
    signed_distance: Optional[float] = None


class Counts(BaseModel):
    passed: int = Field(default=0, alias="pass")
    failed: int = Field(default=0, alias="fail")
    degenerate: int = 0

    model_config = ConfigDict(populate_by_name=True)


class Report(BaseModel):
    command: str
    seed: int
    tol: float
    verdict: Verdict
    details: dict[str, Any] = Field(default_factory=dict)
    witnesses: List[WitnessOut] = Field(default_factory=list)
    counts: Counts = Field(default_factory=Counts)
