"""Tests for input parsing and report documents."""

import json

import pytest

from taulab.models.documents import (
    DyadicNullDocument,
    MeasureDocument,
    ParamSeqDocument,
    SeparationDocument,
    decimal_string,
    load_input,
    parse_input,
)
from taulab.services.measures import Measure, dirac, lebesgue, mix, uniform
from taulab.services.product_measures import ParamSeq, constant_seq
from taulab.services.tau_metrics import find_null_dyadic, separation_search
from taulab.utils.errors import InputValidationError


def test_measure_document_accepts_string_reals():
    document = {
        "atoms": [{"x": "0.25", "w": "0.5"}],
        "pieces": [{"lo": 0.5, "hi": 1, "w": 0.5}],
    }
    mu = parse_input(document)
    assert isinstance(mu, Measure)
    assert mu == mix([0.5, 0.5], [dirac(0.25), uniform(0.5, 1.0)])


def test_param_seq_document():
    a = parse_input({"prefix": ["0.125"], "tail": {"kind": "geometric", "c": 0.25, "r": 0.25}})
    assert isinstance(a, ParamSeq)
    assert a[0] == 0.125
    assert a[3] == 0.25**4


def test_weights_must_sum_to_one():
    with pytest.raises(InputValidationError, match="weights sum"):
        parse_input({"atoms": [{"x": 0.0, "w": 0.5}, {"x": 1.0, "w": 0.4}]})


def test_piece_endpoints_must_be_ordered():
    with pytest.raises(InputValidationError, match=r"pieces\[0\]"):
        parse_input({"pieces": [{"lo": 1.0, "hi": 0.0, "w": 1.0}]})


def test_prefix_errors_name_the_index():
    with pytest.raises(InputValidationError, match=r"prefix\[2\]"):
        parse_input({"prefix": [0.1, 0.2, 0.3], "tail": {"kind": "constant", "c": 0.1}})


def test_tail_kind_errors_name_the_field():
    with pytest.raises(InputValidationError, match=r"tail\.kind"):
        parse_input({"tail": {"kind": "linear", "c": 0.1}})


def test_unknown_fields_are_rejected():
    with pytest.raises(InputValidationError, match="colour"):
        parse_input({"atoms": [{"x": 0.5, "w": 1.0}], "colour": "red"})


def test_non_object_documents_are_rejected():
    with pytest.raises(InputValidationError):
        parse_input([1, 2, 3])


def test_load_input_reports_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"atoms": [', encoding="utf-8")
    with pytest.raises(InputValidationError, match="invalid JSON"):
        load_input(path)
    with pytest.raises(InputValidationError, match="cannot read"):
        load_input(tmp_path / "missing.json")


def test_load_input_round_trips_documents(write_json, witness):
    path = write_json("a.json", ParamSeqDocument.from_param_seq(witness).model_dump())
    assert load_input(path) == witness
    path = write_json("lam.json", MeasureDocument.from_measure(lebesgue()).model_dump())
    assert load_input(path) == lebesgue()


def test_decimal_string_preserves_doubles():
    for value in (0.1, 1.0 / 3.0, 2.0**-60, 1e300):
        assert float(decimal_string(value)) == value


def test_dyadic_null_document_restores_the_report(witness):
    report = find_null_dyadic(witness, 0.01, m_max=8)
    document = DyadicNullDocument.from_report(report)
    data = json.loads(document.model_dump_json())
    assert data["kind"] == "dyadic_null"
    assert data["schema_version"] == 1
    assert isinstance(data["hits"][0]["value"]["lo"], str)
    assert DyadicNullDocument.model_validate(data).to_report() == report


def test_separation_document_restores_the_report(witness):
    for b in (constant_seq(0.125), witness):
        report = separation_search(witness, b, 0.1, m_max=6)
        document = SeparationDocument.model_validate_json(
            SeparationDocument.from_report(report).model_dump_json()
        )
        assert document.to_report() == report
