"""
Shared plumbing for the command modules: run configuration, grid parsing and the
CSV/JSON table writers.
"""

import csv
import io
import math
import sys
from pathlib import Path
from typing import Any, Literal

import structlog
from pydantic import BaseModel, Field, ValidationError, model_validator

from taulab.models.documents import (
    SCHEMA_VERSION,
    decimal_string,
    describe_validation_error,
    load_input,
)
from taulab.services.measures import Measure
from taulab.services.product_measures import ParamSeq
from taulab.utils.errors import InputValidationError

logger = structlog.get_logger()

Command = Literal["charfn", "metric", "separate", "validate", "interpolate"]


class RunConfig(BaseModel):
    """Validated command-line configuration, checked before dispatch."""

    command: Command
    inputs: list[Path] = Field(default_factory=list)
    out: Path | None = None
    format: Literal["csv", "json"] = "csv"
    t_values: list[float] | None = None
    m_min: int = Field(0, ge=0)
    m_max: int | None = Field(None, ge=0)
    trunc_n: int | None = Field(None, ge=1)
    depth_d: int | None = Field(None, ge=1)
    seed: int = 0
    samples: int = Field(0, ge=0)
    epsilon: float | None = Field(None, gt=0.0)
    bound_n: int = Field(4, ge=1)
    weights: list[float] | None = None
    bands: list[tuple[float, float]] | None = None
    inject_fault: str | None = None

    @model_validator(mode="after")
    def m_range_not_empty(self) -> "RunConfig":
        if self.m_max is not None and self.m_max < self.m_min:
            raise ValueError(f"empty m-range [{self.m_min}, {self.m_max}]")
        return self

    @model_validator(mode="after")
    def weights_in_unit_interval(self) -> "RunConfig":
        for i, w in enumerate(self.weights or []):
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"weights[{i}]={w} outside [0, 1]")
        return self


def build_run_config(**values: Any) -> RunConfig:
    """RunConfig from keyword values, with pydantic errors turned into InputValidationError."""
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise InputValidationError(describe_validation_error(e)) from e


def parse_t_grid(spec: str) -> list[float]:
    """
    "start:stop:step" -> [start, start + step, ...] up to and including stop.

    Raises:
        InputValidationError: on a malformed spec, step <= 0 or stop < start
    """
    parts = spec.split(":")
    if len(parts) != 3:
        raise InputValidationError(f"t-grid {spec!r} is not start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as e:
        raise InputValidationError(f"t-grid {spec!r} has a non-numeric field") from e
    if not step > 0 or stop < start or not all(map(math.isfinite, (start, stop, step))):
        raise InputValidationError(f"t-grid {spec!r} needs step > 0 and start <= stop")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def parse_float_list(spec: str, label: str) -> list[float]:
    """Comma-separated reals."""
    try:
        return [float(v) for v in spec.split(",") if v.strip()]
    except ValueError as e:
        raise InputValidationError(
            f"{label} {spec!r} is not a comma-separated list of reals"
        ) from e


def parse_bands(spec: str) -> list[tuple[float, float]]:
    """"lo:hi,lo:hi" -> [(lo, hi), ...]."""
    bands = []
    for item in spec.split(","):
        lo, sep, hi = item.partition(":")
        if not sep:
            raise InputValidationError(f"band {item!r} is not lo:hi")
        try:
            bands.append((float(lo), float(hi)))
        except ValueError as e:
            raise InputValidationError(f"band {item!r} has a non-numeric endpoint") from e
    return bands


def require_t_values(config: RunConfig) -> list[float]:
    if not config.t_values:
        raise InputValidationError(f"{config.command} needs --t-grid or --t-list")
    return config.t_values


def load_inputs(config: RunConfig, count: int) -> list[Measure | ParamSeq]:
    if len(config.inputs) != count:
        raise InputValidationError(
            f"{config.command} needs {count} --input document(s), got {len(config.inputs)}"
        )
    return [load_input(path) for path in config.inputs]


def require_param_seq(value: Measure | ParamSeq, label: str) -> ParamSeq:
    if not isinstance(value, ParamSeq):
        raise InputValidationError(f"{label} must be a parameter-sequence document")
    return value


def require_measure(value: Measure | ParamSeq, label: str) -> Measure:
    if not isinstance(value, Measure):
        raise InputValidationError(f"{label} must be a measure document")
    return value


class TableDocument(BaseModel):
    """JSON form of a result table; reals as 17-significant-digit decimal strings."""

    schema_version: int = SCHEMA_VERSION
    kind: Literal["table"] = "table"
    command: str
    columns: list[str]
    rows: list[list[str | int | bool | None]]


def format_cell(value: Any) -> str | int | bool | None:
    if isinstance(value, bool) or value is None or isinstance(value, int | str):
        return value
    return decimal_string(float(value))


def render_table(config: RunConfig, columns: list[str], rows: list[list[Any]]) -> str:
    cells = [[format_cell(v) for v in row] for row in rows]
    if config.format == "json":
        document = TableDocument(command=config.command, columns=columns, rows=cells)
        return document.model_dump_json(indent=2) + "\n"

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in cells:
        writer.writerow(["" if v is None else v for v in row])
    return buffer.getvalue()


def emit(config: RunConfig, text: str):
    """Write ``text`` to --out, or to stdout when no path is given."""
    if config.out is None:
        sys.stdout.write(text)
        return
    config.out.parent.mkdir(parents=True, exist_ok=True)
    config.out.write_text(text, encoding="utf-8")
    logger.info("Wrote output", command=config.command, path=str(config.out), bytes=len(text))
