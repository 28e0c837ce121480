"""
`taulab validate`: run the invariant suite; exit 0 iff every check passes.
"""

import time

import structlog

from taulab.checks.registry import invariant_registry
from taulab.commands.common import RunConfig, emit, render_table
from taulab.config import settings
from taulab.utils.errors import InputValidationError, InvariantBreach

logger = structlog.get_logger()

COLUMNS = ["check", "status", "cases", "failures", "first_failure", "notes"]


def cmd_validate(config: RunConfig) -> int:
    fault = config.inject_fault
    if fault is not None and invariant_registry.get_check(fault) is None:
        available = ", ".join(invariant_registry.list_available())
        raise InputValidationError(f"unknown check {fault!r} for --inject-fault ({available})")

    start = time.perf_counter()
    results = invariant_registry.run_all(inject_fault=fault)
    elapsed = time.perf_counter() - start

    rows = [
        [
            r.name,
            "pass" if r.passed else "fail",
            r.cases,
            len(r.failures),
            r.failures[0] if r.failures else None,
            "; ".join(r.notes) or None,
        ]
        for r in results
    ]
    emit(config, render_table(config, COLUMNS, rows))

    logger.info(
        "Validation finished",
        seconds=round(elapsed, 3),
        budget_seconds=settings.validate_budget_seconds,
        within_budget=elapsed <= settings.validate_budget_seconds,
    )
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise InvariantBreach(f"invariant checks failed: {', '.join(failed)}")
    return 0
