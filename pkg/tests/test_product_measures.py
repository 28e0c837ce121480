"""Tests for parameter sequences, trit sampling and the product characteristic function."""

import math

import numpy as np
import pytest

from taulab.checks.fixtures import random_sequence
from taulab.config import settings
from taulab.services.measures import empirical_char_fn
from taulab.services.product_measures import (
    ParamSeq,
    TailRule,
    TritPrefix,
    char_fn_product,
    char_fn_product_many,
    char_fn_product_reference,
    constant_seq,
    default_truncation,
    geometric_seq,
    mu_a_sample,
    param_at,
    power_seq,
    sample_nu,
    sample_nu_array,
    tail_epsilon,
    theta,
)
from taulab.utils.errors import DomainError, EnclosureError, InputValidationError


# ---------------------------------------------------------------------------
# Parameter sequences
# ---------------------------------------------------------------------------


def test_prefix_value_outside_open_quarter_is_reported_by_position():
    with pytest.raises(InputValidationError, match=r"prefix\[2\]"):
        ParamSeq(prefix=(0.1, 0.2, 0.3), tail=TailRule("constant", 0.1))


def test_tail_must_start_inside_open_quarter():
    with pytest.raises(InputValidationError):
        constant_seq(0.25)
    with pytest.raises(InputValidationError):
        power_seq(0.3, 1.0)
    # Past a prefix of length 2 the power rule starts at 0.3 / 3
    seq = ParamSeq(prefix=(0.1, 0.1), tail=TailRule("power", 0.3, p=1.0))
    assert seq[2] == pytest.approx(0.1)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": "linear", "c": 0.1},
        {"kind": "constant", "c": -0.1},
        {"kind": "constant", "c": math.nan},
        {"kind": "geometric", "c": 0.1},
        {"kind": "geometric", "c": 0.1, "r": 1.0},
        {"kind": "power", "c": 0.1, "p": 0.0},
    ],
)
def test_tail_rule_validation(kwargs):
    with pytest.raises(InputValidationError):
        TailRule(**kwargs)


def test_tail_is_evaluated_at_absolute_index():
    seq = ParamSeq(prefix=(0.1, 0.1), tail=TailRule("geometric", 0.2, r=0.5))
    assert param_at(seq, 1) == 0.1
    assert param_at(seq, 2) == pytest.approx(0.05)
    assert seq.values(4) == pytest.approx([0.1, 0.1, 0.05, 0.025])


def test_negative_index_is_a_domain_error(eighth):
    with pytest.raises(DomainError):
        param_at(eighth, -1)


def test_witness_family_values(witness):
    assert witness[0] == 0.125
    for n in range(1, 12):
        assert witness[n] == math.ldexp(1.0, -2 * n - 2)


def test_far_tail_values_stay_positive():
    a = geometric_seq(0.2, 0.01)
    assert 0.0 < a[170] < 0.25
    assert 0.0 < a[5000] < 0.25
    assert a[5000] == math.ulp(0.0)
    assert 0.0 < power_seq(0.2, 200.0)[10**6] < 0.25


def test_tail_sums():
    assert TailRule("geometric", 0.2, r=0.5).tail_sum(3) == pytest.approx(0.05)
    assert TailRule("constant", 0.1).tail_sum(0) == math.inf
    assert not TailRule("power", 0.1, p=1.0).summable

    rule = TailRule("power", 0.1, p=2.0)
    exact = 0.1 * math.pi**2 / 6.0
    assert rule.summable
    assert exact <= rule.tail_sum(0) <= 0.2 + 1e-15


# ---------------------------------------------------------------------------
# Trits, theta and sampling
# ---------------------------------------------------------------------------


def test_theta_encloses_the_unseen_coordinates():
    value = theta(TritPrefix((1, 0, -1)))
    assert (value.lo, value.hi) == (0.5, 1.0)


def test_trit_prefix_validation():
    with pytest.raises(InputValidationError):
        TritPrefix((0, 2))
    with pytest.raises(DomainError):
        theta(TritPrefix(()))


def test_sample_nu_is_deterministic(eighth):
    first = sample_nu(eighth, depth=10, seed=7, n=50)
    assert first == sample_nu(eighth, depth=10, seed=7, n=50)
    assert all(x.depth == 10 and set(x.trits) <= {-1, 0, 1} for x in first)


def test_sample_nu_coordinate_frequencies():
    trits = sample_nu_array(constant_seq(0.2), depth=5, seed=11, n=20_000)
    assert np.mean(trits != 0) == pytest.approx(0.2, abs=0.02)
    assert np.mean(trits == 1) == pytest.approx(0.1, abs=0.02)
    assert np.mean(trits == -1) == pytest.approx(0.1, abs=0.02)


def test_sampling_rejects_empty_requests(eighth):
    with pytest.raises(InputValidationError):
        sample_nu_array(eighth, depth=0, seed=0, n=10)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_tiny_parameters_give_all_zero_draws(seed):
    tiny = constant_seq(1e-9)
    assert not np.any(sample_nu_array(tiny, depth=20, seed=seed, n=100))
    assert not np.any(mu_a_sample(tiny, depth=20, seed=seed, n=100))


def test_mu_a_sample_is_centered(eighth):
    n = 40_000
    draws = mu_a_sample(eighth, depth=20, seed=5, n=n)
    assert abs(float(np.mean(draws))) < 4.0 / math.sqrt(n)


def test_mu_a_sample_chunks_do_not_depend_on_workers(monkeypatch, witness):
    sequential = mu_a_sample(witness, depth=20, seed=3, n=1001, tasks=4)
    monkeypatch.setattr(settings, "max_workers", 4)
    threaded = mu_a_sample(witness, depth=20, seed=3, n=1001, tasks=4)
    assert sequential.shape == (1001,)
    assert np.array_equal(sequential, threaded)
    assert np.all(np.abs(sequential) <= 2.0)


# ---------------------------------------------------------------------------
# Product characteristic function
# ---------------------------------------------------------------------------


def test_char_fn_product_at_zero_contains_one(witness):
    assert char_fn_product(witness, 0.0).contains(1.0)


def test_char_fn_product_contains_reference(eighth):
    value = char_fn_product(eighth, 8.0, truncation=20)
    assert value.contains(char_fn_product_reference(eighth, 8.0, 60))
    assert value.width < 1e-9


def test_char_fn_product_brackets_are_nested(witness):
    for t in (0.7, 5.0, 33.3):
        coarse = char_fn_product(witness, t, truncation=20)
        fine = char_fn_product(witness, t, truncation=30)
        assert coarse.lo <= fine.lo <= fine.hi <= coarse.hi


def test_char_fn_product_width_shrinks_strictly():
    # Above the float pad floor eps_N > slack * (N + 1) every five extra levels narrow the bracket
    rng = np.random.default_rng(2024)
    compared = 0
    for _ in range(100):
        a = random_sequence(rng)
        t = float(rng.uniform(-64.0, 64.0))
        if abs(t) < 0.5:
            continue
        for n in range(1, 60):
            if tail_epsilon(t, n) >= 1.0:
                continue
            if tail_epsilon(t, n + 5) <= settings.slack * (n + 6):
                break
            coarse = char_fn_product(a, t, truncation=n)
            fine = char_fn_product(a, t, truncation=n + 5)
            assert fine.width < coarse.width, (t, n)
            compared += 1
    assert compared > 200


def test_char_fn_product_truncation_too_small(eighth):
    with pytest.raises(EnclosureError):
        char_fn_product(eighth, 64.0, truncation=1)
    with pytest.raises(DomainError):
        char_fn_product(eighth, 1.0, truncation=0)


def test_default_truncation_reaches_target():
    assert default_truncation(0.0) == settings.min_product_truncation
    for t in (1.0, 1e3, 1e6):
        n = default_truncation(t)
        assert n >= settings.min_product_truncation
        assert tail_epsilon(t, n) <= settings.product_target_eps


def test_char_fn_product_random_sequences_contain_reference():
    rng = np.random.default_rng(1234)
    for _ in range(100):
        a = random_sequence(rng)
        t = float(rng.uniform(-64.0, 64.0))
        n = default_truncation(t)
        value = char_fn_product(a, t)
        assert value.contains(char_fn_product_reference(a, t, 3 * n)), (t, value)
        assert value.width < 1e-9


def test_char_fn_product_many_keeps_grid_order(monkeypatch, witness):
    ts = [0.0, 1.5, 3.0, 9.0]
    monkeypatch.setattr(settings, "max_workers", 3)
    assert char_fn_product_many(witness, ts) == [char_fn_product(witness, t) for t in ts]


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("t", [1.0, 3.5, 8.0])
def test_empirical_char_fn_agrees_with_product(seed, t):
    n, depth = 40_000, 40
    for a in (constant_seq(0.125), geometric_seq(0.2, 0.5)):
        draws = mu_a_sample(a, depth=depth, seed=seed, n=n)
        empirical = empirical_char_fn(draws, t)
        bound = 4.0 / math.sqrt(n) + 2.0 * math.pi * abs(t) * math.ldexp(1.0, -depth + 1)
        assert char_fn_product(a, t).distance_to(empirical) <= bound
