"""Shared fixtures."""

import json

import pytest

from taulab.checks.fixtures import witness_family
from taulab.services.measures import lebesgue
from taulab.services.product_measures import constant_seq
from taulab.utils.logger import configure_logging


@pytest.fixture(autouse=True)
def stderr_logging(capsys):
    """Route structlog output through the stderr capture of the current test."""
    configure_logging()
    yield


@pytest.fixture
def witness():
    """a_n = 4^{-n-1} (n >= 1)."""
    return witness_family()


@pytest.fixture
def eighth():
    return constant_seq(0.125)


@pytest.fixture
def lam():
    return lebesgue()


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document under tmp_path and return its path as a string."""

    def _write(name: str, data) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return _write
