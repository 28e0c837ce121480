"""
Base invariant check interface.
Every check evaluates one family of invariants on stock fixtures and can be run with an
injected fault, under which it must fail.
"""

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import structlog

from taulab.utils.errors import TaulabError

logger = structlog.get_logger()


@dataclass
class CheckResult:
    """Outcome of one invariant check."""

    name: str
    passed: bool
    cases: int
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0


class BaseInvariantCheck(ABC):
    """Base class that all invariant checks implement."""

    @abstractmethod
    def get_name(self) -> str:
        """
        Return check name.

        Returns:
            Check name (e.g., 'quantile_galois')
        """
        pass

    @abstractmethod
    def get_description(self) -> str:
        """One-line description of the invariant."""
        pass

    @abstractmethod
    def evaluate(self, inject_fault: bool) -> tuple[int, list[str], list[str]]:
        """
        Evaluate the invariant on the stock fixtures.

        Args:
            inject_fault: Evaluate against a deliberately wrong oracle or operand

        Returns:
            Tuple of (number of cases, failure messages, informational notes)
        """
        pass

    def run(self, inject_fault: bool = False) -> CheckResult:
        """Evaluate, time and log the check; library errors count as failures."""
        name = self.get_name()
        start = time.perf_counter()
        try:
            cases, failures, notes = self.evaluate(inject_fault)
        except TaulabError as e:
            cases, failures, notes = 0, [f"{type(e).__name__}: {e}"], []
        elapsed = time.perf_counter() - start

        result = CheckResult(
            name=name,
            passed=not failures,
            cases=cases,
            failures=failures,
            notes=notes,
            seconds=elapsed,
        )
        if result.passed:
            logger.info(
                "Invariant check passed", check=name, cases=cases, seconds=round(elapsed, 3)
            )
        else:
            logger.error(
                "Invariant check failed",
                check=name,
                cases=cases,
                failures=len(failures),
                first_failure=failures[0],
                inject_fault=inject_fault,
            )
        return result
