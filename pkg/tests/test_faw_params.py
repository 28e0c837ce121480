"""Tests for free Araki-Woods parameter symbols and their pointwise relations."""

import math
from dataclasses import replace

import numpy as np
import pytest

from taulab.checks.fixtures import random_measure, stock_measures
from taulab.models.documents import FawSymbolExport
from taulab.services.faw_params import (
    build_cantor_symbol,
    build_faw_symbol,
    check_domain_relations,
    default_grid,
    export_symbol,
    log_ratio,
    matrix_block,
    spectral_measure,
    symbol_table,
)
from taulab.services.measures import Atom, dirac, lebesgue, mix
from taulab.utils.errors import DomainError, InputValidationError


def test_lebesgue_symbol_values(lam):
    s = build_faw_symbol(lam, 0.5)
    assert s.f1(0.0)[0] == 0.5
    assert s.f2(0.0)[0] == 0.5
    assert s.matrix_diag == pytest.approx((2.0 / 3.0, 1.0 / 3.0))
    assert s.f1(1.0)[0] == pytest.approx(1.0 / (1.0 + math.e))


def test_symbols_are_complementary_and_in_range(lam):
    s = build_faw_symbol(lam, 0.3)
    xs = np.linspace(0.0, 1.0, 101)
    f1, f2 = s.f1(xs), s.f2(xs)
    assert np.all((f1 > 0) & (f1 < 1)) and np.all((f2 > 0) & (f2 < 1))
    assert np.max(np.abs(f1 + f2 - 1.0)) <= 1e-15
    assert check_domain_relations(s, xs).ok


@pytest.mark.parametrize("name", list(stock_measures()))
def test_symbols_are_monotone(name):
    mu = stock_measures()[name]
    s = build_faw_symbol(mu, 0.5)
    grid = default_grid(mu)
    assert np.all(np.diff(s.f1(grid)) <= 0.0)
    assert np.all(np.diff(s.f2(grid)) >= 0.0)


@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.5])
def test_q_outside_open_interval(lam, q):
    with pytest.raises(DomainError):
        build_faw_symbol(lam, q)
    with pytest.raises(DomainError):
        matrix_block(q)


def test_support_must_lie_in_unit_interval():
    with pytest.raises(DomainError):
        build_faw_symbol(dirac(1.5), 0.5)
    with pytest.raises(DomainError):
        build_faw_symbol(mix([0.5, 0.5], [dirac(-0.1), lebesgue()]), 0.5)


def test_swapped_symbol_breaks_the_complement_relation(lam):
    s = build_faw_symbol(lam, 0.5)
    broken = replace(s, f2=s.f1)
    grid = np.linspace(0.0, 1.0, 11)
    report = check_domain_relations(broken, grid)
    assert not report.ok
    flagged = [v.x for v in report.violations if v.relation == "complement"]
    assert flagged == pytest.approx(list(grid[1:]))


def test_broken_matrix_block_is_reported(lam):
    s = replace(build_faw_symbol(lam, 0.5), matrix_diag=(0.5, 0.6))
    relations = {v.relation for v in check_domain_relations(s, [0.5]).violations}
    assert relations == {"matrix_complement"}


@pytest.mark.parametrize("q", [1e-9, 1.0 - 1e-9])
def test_relations_hold_near_the_ends_of_q(lam, q):
    s = build_faw_symbol(lam, q)
    assert check_domain_relations(s, default_grid(lam, 101)).ok
    assert log_ratio(s) == pytest.approx(-math.log(q), rel=1e-6, abs=1e-12)


def test_log_ratio_is_minus_log_q(lam):
    for q in (0.1, 0.5, 0.9):
        assert log_ratio(build_faw_symbol(lam, q)) == pytest.approx(-math.log(q), rel=1e-12)


def test_relations_hold_for_random_measures():
    rng = np.random.default_rng(2718)
    for _ in range(20):
        mu = random_measure(rng)
        q = float(rng.uniform(0.01, 0.99))
        report = check_domain_relations(build_faw_symbol(mu, q), default_grid(mu, 201))
        assert report.ok, report.violations[:3]


def test_check_domain_relations_rejects_bad_grids(lam):
    s = build_faw_symbol(lam, 0.5)
    with pytest.raises(InputValidationError):
        check_domain_relations(s, [])
    with pytest.raises(InputValidationError):
        check_domain_relations(s, [0.5, 1.5])


def test_default_grid_includes_cdf_jumps():
    mu = stock_measures()["atom_and_piece"]
    grid = default_grid(mu, points=11)
    assert 0.5 in grid
    assert grid[0] == 0.0 and grid[-1] == 1.0
    assert np.all(np.diff(grid) > 0)
    with pytest.raises(InputValidationError):
        default_grid(mu, points=1)


def test_cantor_symbol_averages_with_lebesgue():
    mu = dirac(0.5)
    s = build_cantor_symbol(mu, 0.5)
    assert s.source == mix([0.5, 0.5], [mu, lebesgue()])
    assert check_domain_relations(s, default_grid(s.source, 101)).ok


def test_spectral_measure_atoms(lam):
    q = 0.5
    nu = spectral_measure(lam, q)
    assert nu.atoms == (Atom(math.log(q), 0.25), Atom(-math.log(q), 0.25))
    assert nu.total_mass == pytest.approx(1.0)


def test_symbol_table_and_export(lam):
    s = build_faw_symbol(lam, 0.5)
    rows = symbol_table(s, [0.0, 0.5, 1.0])
    assert [x for x, _, _ in rows] == [0.0, 0.5, 1.0]
    assert len(symbol_table(s)) == 1001

    doc = export_symbol(s, [0.0, 0.5, 1.0])
    assert doc.kind == "faw_symbol"
    assert doc.q == "0.5"
    assert float(doc.matrix_diag[0]) == s.matrix_diag[0]
    assert float(doc.table[1].f1) == rows[1][1]
    assert FawSymbolExport.model_validate_json(doc.model_dump_json()) == doc
