"""
`taulab separate`: certified separation witness between two parameter sequences, plus the
null-dyadic search for each of them.
"""

import structlog

from taulab.commands.common import RunConfig, emit, load_inputs, render_table, require_param_seq
from taulab.models.documents import (
    DyadicNullDocument,
    SeparateDocument,
    SeparationDocument,
)
from taulab.services.tau_metrics import DyadicNullReport, find_null_dyadic, separation_search
from taulab.utils.errors import InputValidationError

logger = structlog.get_logger()

COLUMNS = ["section", "m", "status", "d_a_lo", "d_a_hi", "d_b_lo", "d_b_hi"]


def _null_rows(section: str, report: DyadicNullReport, side: str) -> list[list]:
    rows = []
    for hit in report.hits:
        values = [hit.value.lo, hit.value.hi, None, None]
        if side == "b":
            values = [None, None, hit.value.lo, hit.value.hi]
        rows.append([section, hit.m, "hit", *values])
    rows.extend([section, m, "undecided", None, None, None, None] for m in report.undecided)
    return rows


def cmd_separate(config: RunConfig) -> int:
    if config.epsilon is None or config.m_max is None:
        raise InputValidationError("separate needs --epsilon and --m-max")
    first, second = load_inputs(config, 2)
    a = require_param_seq(first, "first input")
    b = require_param_seq(second, "second input")

    separation = separation_search(a, b, config.epsilon, config.m_max, m_min=config.m_min)
    null_a = find_null_dyadic(a, config.epsilon, config.m_max, m_min=config.m_min)
    null_b = find_null_dyadic(b, config.epsilon, config.m_max, m_min=config.m_min)

    if config.format == "json":
        document = SeparateDocument(
            separation=SeparationDocument.from_report(separation),
            null_a=DyadicNullDocument.from_report(null_a),
            null_b=DyadicNullDocument.from_report(null_b),
        )
        emit(config, document.model_dump_json(indent=2) + "\n")
        return 0

    witness = separation.witness
    if witness is None:
        rows = [["witness", None, "none", None, None, None, None]]
    else:
        rows = [
            [
                "witness",
                witness.m,
                f"null_{witness.null_side}",
                witness.d_a_value.lo,
                witness.d_a_value.hi,
                witness.d_b_value.lo,
                witness.d_b_value.hi,
            ]
        ]
    rows.extend(["witness", m, "undecided", None, None, None, None] for m in separation.undecided)
    rows.extend(_null_rows("null_a", null_a, "a"))
    rows.extend(_null_rows("null_b", null_b, "b"))
    emit(config, render_table(config, COLUMNS, rows))
    return 0
