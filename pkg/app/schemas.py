"""
Pydantic schemas for results, experiment configs and reports.

Every record serializes to JSON with snake_case keys and parses back to an
equal object.
"""
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, field_validator, model_validator

from app.models import Algorithm, Family, GeneratorSpec, NormKind, Verdict


class PairCorrResult(BaseModel):
    """One evaluation of the (weak) pair-correlation statistic."""
    model_config = ConfigDict(frozen=True)

    s: float = Field(gt=0)
    alpha: float = Field(gt=0, le=1)
    norm: NormKind
    n: int = Field(ge=1)
    radius: float
    count: int = Field(ge=0)
    normalized: float = Field(ge=0)
    target: float

    @field_validator("count")
    @classmethod
    def _even(cls, count: int) -> int:
        if count % 2:
            raise ValueError("ordered pair count must be even")
        return count


class KernelStatResult(BaseModel):
    """Smoothed pair statistic (1/N²) Σ_{m≠n} f_δ(x_m - x_n)."""
    model_config = ConfigDict(frozen=True)

    delta: float = Field(gt=0, lt=0.25)
    n: int = Field(ge=1)
    dim: int = Field(ge=1)
    value: float = Field(ge=0)


class BoundCertificate(BaseModel):
    """Exponential-sum functional compared with its theoretical ceiling."""
    model_config = ConfigDict(frozen=True)

    t: float = Field(gt=0)
    alpha: float = 1.0
    n: int
    dim: int
    cutoff_used: float
    terms: int = Field(ge=0, description="frequency vectors in the sum")
    raw_sum: float = Field(ge=0)
    functional: float = Field(ge=0)
    bound: float
    iid_reference: Optional[float] = None
    finite_n_bound: Optional[float] = None
    verdict: Optional[Verdict] = None
    constants_used: Dict[str, float] = Field(default_factory=dict)


class ParsevalReport(BaseModel):
    """Both sides of the kernel Parseval identity and the truncation tail bound."""
    model_config = ConfigDict(frozen=True)

    n: int
    dim: int
    delta: float
    lhs: float
    rhs: float
    tail_bound: float
    gap: float
    truncation_radius: float
    lattice_size: int
    converged: bool = Field(description="tail_bound fell below the requested tolerance")
    consistent: bool


class DiscrepancyResult(BaseModel):
    """Star discrepancy, exact (d = 1) or bracketed on an anchored grid."""
    model_config = ConfigDict(frozen=True)

    n: int
    lower: float
    upper: float = Field(gt=0, le=1)
    exact: bool
    resolution: Optional[int] = None

    @model_validator(mode="after")
    def _ordered(self) -> "DiscrepancyResult":
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")
        return self


class SpectrumSummary(BaseModel):
    """Condensed view of a Weyl criterion scan."""
    model_config = ConfigDict(frozen=True)

    dim: int
    n: int
    cutoff: float
    frequencies: int
    max_magnitude: float = Field(description="max over the ball of |S_N(l)|/N")
    argmax: List[int]
    mean_square: float = Field(description="mean over the ball of |S_N(l)|^2 / N")
    t: Optional[float] = None
    magnitude_ceiling: Optional[float] = None


# Experiment configuration

class PairCorrAnalysis(BaseModel):
    kind: Literal["paircorr"] = "paircorr"
    s: List[PositiveFloat] = Field(min_length=1)
    alpha: float = Field(default=1.0, gt=0, le=1)
    norm: NormKind = NormKind.EUCLIDEAN
    algorithm: Algorithm = Algorithm.CELLS


class CertifyAnalysis(BaseModel):
    kind: Literal["certify"] = "certify"
    t: List[PositiveFloat] = Field(min_length=1)
    alpha: float = Field(default=1.0, gt=0, le=1)
    c_alpha: Optional[PositiveFloat] = None


class SpectrumAnalysis(BaseModel):
    kind: Literal["spectrum"] = "spectrum"
    lmax: float = Field(ge=1)
    t: Optional[PositiveFloat] = None


class ParsevalAnalysis(BaseModel):
    kind: Literal["parseval"] = "parseval"
    delta: float = Field(gt=0, lt=0.25)
    tol: Optional[PositiveFloat] = Field(default=None, description="absolute tail tolerance; default 0.01 * N^2")


class DiscrepancyAnalysis(BaseModel):
    kind: Literal["discrepancy"] = "discrepancy"
    resolution: int = Field(default=64, ge=2)


class SmoothedAnalysis(BaseModel):
    kind: Literal["smoothed"] = "smoothed"
    delta: List[PositiveFloat] = Field(min_length=1)
    scaled: bool = Field(default=False, description="interpret delta as multiples of N^(-1/d)")


AnalysisSpec = Annotated[
    Union[PairCorrAnalysis, CertifyAnalysis, SpectrumAnalysis, ParsevalAnalysis, DiscrepancyAnalysis, SmoothedAnalysis],
    Field(discriminator="kind"),
]

_SEEDED = {Family.RANDOM.value, Family.CLUSTERED.value}


class ExperimentConfig(BaseModel):
    """Generator, analyses to run on it, and optional ensemble seeds."""

    generator: GeneratorSpec
    analyses: List[AnalysisSpec] = Field(min_length=1)
    output: Optional[str] = None
    seeds: List[int] = Field(default_factory=list)

    @model_validator(mode="before")
    @classmethod
    def _seed_from_ensemble(cls, data):
        if not isinstance(data, dict):
            return data
        gen = data.get("generator")
        seeds = data.get("seeds") or []
        family = gen.get("family") if isinstance(gen, dict) else None
        family = family.value if isinstance(family, Family) else family
        if seeds and family in _SEEDED and gen.get("seed") is None:
            data = {**data, "generator": {**gen, "seed": seeds[0]}}
        return data


# Report

class _RecordBase(BaseModel):
    index: int
    seed: Optional[int] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    wall_clock_seconds: float = 0.0


class PairCorrRecord(_RecordBase):
    kind: Literal["paircorr"] = "paircorr"
    results: List[PairCorrResult]
    s_gap_ratio: Optional[float] = None


class CertifyRecord(_RecordBase):
    kind: Literal["certify"] = "certify"
    results: List[BoundCertificate]


class SpectrumRecord(_RecordBase):
    kind: Literal["spectrum"] = "spectrum"
    result: SpectrumSummary


class ParsevalRecord(_RecordBase):
    kind: Literal["parseval"] = "parseval"
    result: ParsevalReport


class DiscrepancyRecord(_RecordBase):
    kind: Literal["discrepancy"] = "discrepancy"
    results: List[DiscrepancyResult]


class SmoothedRecord(_RecordBase):
    kind: Literal["smoothed"] = "smoothed"
    results: List[KernelStatResult]


AnalysisRecord = Annotated[
    Union[PairCorrRecord, CertifyRecord, SpectrumRecord, ParsevalRecord, DiscrepancyRecord, SmoothedRecord],
    Field(discriminator="kind"),
]


class Report(BaseModel):
    """Everything needed to audit one experiment run."""

    tool_name: str
    tool_version: str
    config: ExperimentConfig
    records: List[AnalysisRecord]
