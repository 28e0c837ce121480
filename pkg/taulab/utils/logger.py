"""
Structured logging configuration using structlog.
"""

import logging
import sys

import structlog

from taulab.config import settings


def _stderr_logger(*args) -> structlog.PrintLogger:
    # Looked up on every call: sys.stderr may be swapped after configure_logging().
    return structlog.PrintLogger(sys.stderr)


def configure_logging():
    """
    Configure structured logging for the command line.
    JSON lines in production, console rendering otherwise; always on stderr so that
    stdout only ever carries CSV/JSON results.
    """
    log_level = getattr(logging, settings.log_level.upper(), logging.INFO)

    processors = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.StackInfoRenderer(),
        structlog.dev.set_exc_info,
    ]

    if settings.environment == "production":
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        context_class=dict,
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )
