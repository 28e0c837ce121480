"""
Truncation refinement for undecided comparisons.
Retries a bracket-producing decision with a doubled truncation index when the threshold
sits inside the bracket; any other error propagates immediately.
"""

from collections.abc import Callable
from typing import TypeVar

import structlog
from tenacity import RetryCallState, Retrying, retry_if_exception_type, stop_after_attempt

from taulab.config import settings
from taulab.utils.errors import UndecidedError

logger = structlog.get_logger()

T = TypeVar("T")


def refine_until_decided(
    decide: Callable[[int], T],
    truncation: int,
    attempts: int | None = None,
) -> T:
    """
    Run ``decide(truncation)``, doubling the truncation after each UndecidedError.

    Args:
        decide: Callable taking a truncation index; raises UndecidedError when the
            bracket it computes straddles its threshold
        truncation: Initial truncation index
        attempts: Total number of attempts (defaults to settings.refine_attempts)

    Returns:
        The first decided result

    Raises:
        UndecidedError: if the last attempt is still undecided
    """
    max_attempts = attempts if attempts is not None else settings.refine_attempts

    for attempt in Retrying(
        stop=stop_after_attempt(max(1, max_attempts)),
        retry=retry_if_exception_type(UndecidedError),
        reraise=True,
        before_sleep=_log_refinement,
    ):
        with attempt:
            level = attempt.retry_state.attempt_number - 1
            return decide(truncation * 2**level)

    raise AssertionError("unreachable: Retrying either returns or reraises")


def _log_refinement(retry_state: RetryCallState):
    """Log a refinement step before the next attempt."""
    if retry_state.outcome is not None:
        exception = retry_state.outcome.exception()
        logger.debug(
            "Bracket undecided, refining truncation",
            attempt=retry_state.attempt_number,
            threshold=getattr(exception, "threshold", None),
            lo=getattr(exception, "lo", None),
            hi=getattr(exception, "hi", None),
        )
