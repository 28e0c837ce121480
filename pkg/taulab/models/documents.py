"""
Pydantic models for the JSON documents read and written by the command line.
Input documents describe measures and parameter sequences; report documents carry
brackets as 17-significant-digit decimal strings and a schema version.
"""

import json
from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, Field, ValidationError, model_validator

from taulab.config import settings
from taulab.services.bracket import Bracket
from taulab.services.measures import Measure, make_measure
from taulab.services.product_measures import ParamSeq, TailRule
from taulab.services.tau_metrics import (
    DyadicHit,
    DyadicNullReport,
    SeparationReport,
    SeparationWitness,
)
from taulab.utils.errors import InputValidationError

SCHEMA_VERSION = 1

OpenQuarter = Annotated[float, Field(gt=0.0, lt=0.25)]


def decimal_string(value: float) -> str:
    """Shortest-safe decimal form of a double (17 significant digits)."""
    return format(value, ".17g")


# ---------------------------------------------------------------------------
# Input documents
# ---------------------------------------------------------------------------


class AtomDocument(BaseModel):
    x: float
    w: float = Field(..., gt=0.0)


class PieceDocument(BaseModel):
    lo: float
    hi: float
    w: float = Field(..., gt=0.0)

    @model_validator(mode="after")
    def endpoints_ordered(self) -> "PieceDocument":
        if not self.lo < self.hi:
            raise ValueError(f"piece requires lo < hi, got [{self.lo}, {self.hi}]")
        return self


class MeasureDocument(BaseModel):
    """{"atoms": [{"x", "w"}...], "pieces": [{"lo", "hi", "w"}...]}; reals as doubles or strings."""

    atoms: list[AtomDocument] = Field(default_factory=list)
    pieces: list[PieceDocument] = Field(default_factory=list)

    class Config:
        extra = "forbid"

    @model_validator(mode="after")
    def weights_sum_to_one(self) -> "MeasureDocument":
        total = sum(a.w for a in self.atoms) + sum(p.w for p in self.pieces)
        if abs(total - 1.0) > settings.load_weight_tolerance:
            raise ValueError(
                f"weights sum to {total!r}, expected 1 within {settings.load_weight_tolerance:g}"
            )
        return self

    def to_measure(self) -> Measure:
        return make_measure(
            atoms=[(a.x, a.w) for a in self.atoms],
            pieces=[(p.lo, p.hi, p.w) for p in self.pieces],
            tolerance=settings.load_weight_tolerance,
        )

    @classmethod
    def from_measure(cls, mu: Measure) -> "MeasureDocument":
        return cls(
            atoms=[AtomDocument(x=a.x, w=a.w) for a in mu.atoms],
            pieces=[PieceDocument(lo=p.lo, hi=p.hi, w=p.w) for p in mu.pieces],
        )


class TailDocument(BaseModel):
    kind: Literal["constant", "geometric", "power"]
    c: float
    r: float | None = None
    p: float | None = None


class ParamSeqDocument(BaseModel):
    """{"prefix": [r...], "tail": {"kind", "c", "r"?, "p"?}}; every value must lie in (0, 1/4)."""

    prefix: list[OpenQuarter] = Field(default_factory=list)
    tail: TailDocument

    class Config:
        extra = "forbid"

    def to_param_seq(self) -> ParamSeq:
        tail = TailRule(self.tail.kind, self.tail.c, r=self.tail.r, p=self.tail.p)
        return ParamSeq(prefix=tuple(self.prefix), tail=tail)

    @classmethod
    def from_param_seq(cls, a: ParamSeq) -> "ParamSeqDocument":
        return cls(
            prefix=list(a.prefix),
            tail=TailDocument(kind=a.tail.kind, c=a.tail.c, r=a.tail.r, p=a.tail.p),
        )


def _error_path(loc: tuple) -> str:
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path or "document"


def describe_validation_error(exc: ValidationError) -> str:
    """One line per error: offending field path (with list indices) and message."""
    return "; ".join(f"{_error_path(err['loc'])}: {err['msg']}" for err in exc.errors())


def parse_input(data: object) -> Measure | ParamSeq:
    """
    Validate a decoded JSON document: a ParamSeq when it has a "tail", a Measure otherwise.

    Raises:
        InputValidationError: naming the offending field and index
    """
    if not isinstance(data, dict):
        raise InputValidationError("input document must be a JSON object")
    try:
        if "tail" in data:
            return ParamSeqDocument.model_validate(data).to_param_seq()
        return MeasureDocument.model_validate(data).to_measure()
    except ValidationError as e:
        raise InputValidationError(describe_validation_error(e)) from e


def load_input(path: str | Path) -> Measure | ParamSeq:
    """Read and validate a measure or parameter-sequence document from ``path``."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputValidationError(f"cannot read input {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputValidationError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    return parse_input(data)


# ---------------------------------------------------------------------------
# Report documents
# ---------------------------------------------------------------------------


class BracketDocument(BaseModel):
    lo: str
    hi: str

    @classmethod
    def from_bracket(cls, b: Bracket) -> "BracketDocument":
        return cls(lo=decimal_string(b.lo), hi=decimal_string(b.hi))

    def to_bracket(self) -> Bracket:
        return Bracket(float(self.lo), float(self.hi))


class DyadicHitDocument(BaseModel):
    m: int
    value: BracketDocument


class DyadicNullDocument(BaseModel):
    """Certified hits d_a(2^m, 0) < epsilon over an m-range, with undecided m listed apart."""

    schema_version: int = SCHEMA_VERSION
    kind: Literal["dyadic_null"] = "dyadic_null"
    a: ParamSeqDocument
    epsilon: str
    m_min: int
    m_max: int
    hits: list[DyadicHitDocument]
    undecided: list[int]

    @classmethod
    def from_report(cls, report: DyadicNullReport) -> "DyadicNullDocument":
        return cls(
            a=ParamSeqDocument.from_param_seq(report.a),
            epsilon=decimal_string(report.epsilon),
            m_min=report.m_min,
            m_max=report.m_max,
            hits=[
                DyadicHitDocument(m=h.m, value=BracketDocument.from_bracket(h.value))
                for h in report.hits
            ],
            undecided=list(report.undecided),
        )

    def to_report(self) -> DyadicNullReport:
        return DyadicNullReport(
            a=self.a.to_param_seq(),
            epsilon=float(self.epsilon),
            m_min=self.m_min,
            m_max=self.m_max,
            hits=tuple(DyadicHit(h.m, h.value.to_bracket()) for h in self.hits),
            undecided=tuple(self.undecided),
        )


class SeparationWitnessDocument(BaseModel):
    m: int
    d_a_value: BracketDocument
    d_b_value: BracketDocument
    epsilon: str
    null_side: Literal["a", "b"]

    @classmethod
    def from_witness(cls, w: SeparationWitness) -> "SeparationWitnessDocument":
        return cls(
            m=w.m,
            d_a_value=BracketDocument.from_bracket(w.d_a_value),
            d_b_value=BracketDocument.from_bracket(w.d_b_value),
            epsilon=decimal_string(w.epsilon),
            null_side=w.null_side,
        )

    def to_witness(self) -> SeparationWitness:
        return SeparationWitness(
            m=self.m,
            d_a_value=self.d_a_value.to_bracket(),
            d_b_value=self.d_b_value.to_bracket(),
            epsilon=float(self.epsilon),
            null_side=self.null_side,
        )


class SeparationDocument(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal["separation"] = "separation"
    witness: SeparationWitnessDocument | None
    undecided: list[int]
    m_min: int
    m_max: int

    @classmethod
    def from_report(cls, report: SeparationReport) -> "SeparationDocument":
        witness = report.witness
        return cls(
            witness=SeparationWitnessDocument.from_witness(witness) if witness else None,
            undecided=list(report.undecided),
            m_min=report.m_min,
            m_max=report.m_max,
        )

    def to_report(self) -> SeparationReport:
        return SeparationReport(
            witness=self.witness.to_witness() if self.witness else None,
            undecided=tuple(self.undecided),
            m_min=self.m_min,
            m_max=self.m_max,
        )


class SymbolRow(BaseModel):
    x: str
    f1: str
    f2: str


class FawSymbolExport(BaseModel):
    """q, the C^2 block and a sampled (x, f1, f2) table for external plotting."""

    schema_version: int = SCHEMA_VERSION
    kind: Literal["faw_symbol"] = "faw_symbol"
    q: str
    matrix_diag: tuple[str, str]
    j_structure: str
    table: list[SymbolRow]


class SeparateDocument(BaseModel):
    """Output of `taulab separate`: the separation search and both null-dyadic searches."""

    schema_version: int = SCHEMA_VERSION
    kind: Literal["separate"] = "separate"
    separation: SeparationDocument
    null_a: DyadicNullDocument
    null_b: DyadicNullDocument
