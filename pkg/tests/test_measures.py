"""Tests for finitely represented measures: CDF, quantile, distances, char fn, algebra."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

import taulab.services.measures as measures_module
from taulab.checks.distance import cdf_gap_quadrature
from taulab.checks.fixtures import random_measure, stock_measures
from taulab.config import settings as runtime_settings
from taulab.services.measures import (
    Atom,
    Measure,
    cdf,
    cdf_left,
    char_fn,
    decay_profile,
    dirac,
    from_density,
    ks_statistic,
    ks_threshold,
    l1_quantile_distance,
    make_measure,
    mix,
    opposite,
    quantile,
    quantiles,
    sample,
    symmetrize,
    uniform,
)
from taulab.utils.errors import DomainError, InputValidationError

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def atom_and_piece() -> Measure:
    return mix([0.5, 0.5], [dirac(0.25), uniform(0.5, 1.0)])


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def test_weights_must_sum_to_one():
    with pytest.raises(InputValidationError, match="weights sum"):
        make_measure(atoms=[(0.0, 0.5), (1.0, 0.4)])


def test_make_measure_merges_coincident_atoms():
    mu = make_measure(atoms=[(0.5, 0.25), (0.5, 0.25), (-0.0, 0.5)])
    assert mu.atoms == (Atom(0.0, 0.5), Atom(0.5, 0.5))


def test_duplicate_atoms_rejected_on_direct_construction():
    with pytest.raises(InputValidationError, match="duplicates"):
        Measure(atoms=(Atom(0.5, 0.5), Atom(0.5, 0.5)))


def test_unbounded_support_is_a_domain_error():
    with pytest.raises(DomainError):
        Measure(atoms=(Atom(math.inf, 1.0),))


def test_from_density_is_normalized_and_symmetric():
    mu = from_density(lambda x: 6.0 * x * (1.0 - x), 0.0, 1.0, 32)
    assert mu.total_mass == pytest.approx(1.0, abs=1e-12)
    assert cdf(mu, 0.5) == pytest.approx(0.5, abs=1e-9)


# ---------------------------------------------------------------------------
# CDF and quantile
# ---------------------------------------------------------------------------


def test_cdf_examples(lam):
    assert cdf(lam, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert cdf(dirac(0.5), 0.4) == 0.0
    assert cdf(dirac(0.5), 0.5) == 1.0
    assert cdf(atom_and_piece(), 0.75) == pytest.approx(0.75, abs=1e-15)


def test_cdf_left_limit_at_atom():
    assert cdf_left(dirac(0.5), 0.5) == 0.0
    assert cdf_left(atom_and_piece(), 0.25) == 0.0
    assert cdf(atom_and_piece(), 0.25) == pytest.approx(0.5)


def test_quantile_examples(lam):
    assert quantile(lam, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert quantile(dirac(0.5), 0.7) == 0.5
    assert quantile(atom_and_piece(), 0.75) == pytest.approx(0.75, abs=1e-15)


def test_quantile_at_zero_is_left_end_of_support():
    assert quantile(uniform(-2.0, 3.0), 0.0) == -2.0


@pytest.mark.parametrize("y", [-0.1, 1.5, math.nan])
def test_quantile_outside_unit_interval(lam, y):
    with pytest.raises(DomainError):
        quantile(lam, y)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, y=st.floats(min_value=0.0, max_value=1.0, exclude_min=True))
def test_quantile_galois_connection(seed, y):
    mu = random_measure(np.random.default_rng(seed))
    x = quantile(mu, y)
    assert cdf(mu, x) >= y
    breakpoints = mu.cdf_table.breakpoints
    for b in breakpoints[breakpoints < x]:
        assert cdf(mu, float(b)) < y


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_quantile_non_decreasing(seed):
    mu = random_measure(np.random.default_rng(seed))
    values = quantiles(mu, np.linspace(0.0, 1.0, 201))
    assert np.all(np.diff(values) >= 0.0)


# ---------------------------------------------------------------------------
# L1 distance between quantile functions
# ---------------------------------------------------------------------------


def test_distance_exact_values(lam):
    assert l1_quantile_distance(dirac(0.0), dirac(1.0)) == pytest.approx(1.0, abs=1e-12)
    assert l1_quantile_distance(lam, dirac(0.0)) == pytest.approx(0.5, abs=1e-12)
    assert l1_quantile_distance(lam, lam) == 0.0


def _quantile_gap_quadrature(mu: Measure, eta: Measure) -> float:
    points = sorted(
        {float(v) for v in np.concatenate([mu.cdf_table.values, eta.cdf_table.values]) if 0 < v < 1}
    )
    value, _ = integrate.quad(
        lambda y: abs(quantile(mu, y) - quantile(eta, y)),
        0.0,
        1.0,
        points=points or None,
        limit=500,
    )
    return value


@pytest.mark.parametrize("seed", range(50))
def test_distance_identity_against_quadrature(seed):
    rng = np.random.default_rng(seed)
    mu, eta = random_measure(rng), random_measure(rng)
    exact = l1_quantile_distance(mu, eta)
    assert exact == pytest.approx(cdf_gap_quadrature(mu, eta), abs=1e-9)
    assert exact == pytest.approx(_quantile_gap_quadrature(mu, eta), abs=1e-6)


# ---------------------------------------------------------------------------
# Characteristic function
# ---------------------------------------------------------------------------


def test_char_fn_examples(lam):
    assert char_fn(atom_and_piece(), 0.0) == pytest.approx(1.0, abs=1e-15)
    assert abs(char_fn(dirac(0.5), 1.0) - (-1.0)) < 1e-15
    assert abs(char_fn(lam, 1.0)) < 1e-12


def test_char_fn_matches_quadrature(lam):
    for t in (0.37, 2.5, -7.0):
        re, _ = integrate.quad(lambda x, t=t: math.cos(2 * math.pi * x * t), 0.0, 1.0)
        im, _ = integrate.quad(lambda x, t=t: math.sin(2 * math.pi * x * t), 0.0, 1.0)
        assert abs(char_fn(lam, t) - complex(re, im)) < 1e-12


def test_char_fn_small_argument_branch():
    mu = uniform(0.0, 1e-9)
    t = 3.0
    # Width far below 1/t: the piece behaves like an atom at its midpoint
    assert abs(char_fn(mu, t) - cmath.exp(2j * math.pi * t * 0.5e-9)) < 1e-12


def test_char_fn_accepts_arrays(lam):
    ts = np.array([0.0, 0.5, 1.0])
    values = char_fn(lam, ts)
    assert values.shape == (3,)
    assert values[0] == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(seed=seeds, t=st.floats(min_value=-200.0, max_value=200.0))
def test_char_fn_bounded_and_hermitian(seed, t):
    mu = random_measure(np.random.default_rng(seed))
    value = char_fn(mu, t)
    assert abs(value) <= 1.0 + 1e-12
    assert abs(char_fn(mu, -t) - value.conjugate()) < 1e-12


@settings(max_examples=30, deadline=None)
@given(
    seed=seeds,
    w=st.one_of(st.sampled_from([0.0, 1.0]), st.floats(min_value=1e-6, max_value=1.0 - 1e-6)),
)
def test_char_fn_affine_under_mix(seed, w):
    rng = np.random.default_rng(seed)
    mu, eta = random_measure(rng), random_measure(rng)
    ts = np.linspace(-20.0, 20.0, 41)
    mixed = char_fn(mix([w, 1.0 - w], [mu, eta]), ts)
    expected = w * char_fn(mu, ts) + (1.0 - w) * char_fn(eta, ts)
    assert np.max(np.abs(mixed - expected)) <= 1e-12


# ---------------------------------------------------------------------------
# Measure algebra
# ---------------------------------------------------------------------------


def test_mix_single_weight_returns_part(lam):
    assert mix([1.0], [lam]) is lam
    assert mix([0.0, 1.0], [dirac(0.0), lam]) is lam


def test_mix_of_two_diracs():
    mu = mix([0.5, 0.5], [dirac(0.0), dirac(1.0)])
    assert mu.atoms == (Atom(0.0, 0.5), Atom(1.0, 0.5))


def test_mix_rejects_bad_weights(lam):
    with pytest.raises(InputValidationError):
        mix([0.5, 0.4], [lam, dirac(0.0)])
    with pytest.raises(InputValidationError):
        mix([1.0], [lam, lam])


def test_opposite_examples():
    assert opposite(dirac(0.3)) == dirac(-0.3)
    assert opposite(uniform(0.0, 1.0)) == uniform(-1.0, 0.0)


@pytest.mark.parametrize("name", list(stock_measures()))
def test_opposite_is_an_involution(name):
    mu = stock_measures()[name]
    assert opposite(opposite(mu)) == mu
    assert abs(char_fn(opposite(mu), 1.3) - char_fn(mu, 1.3).conjugate()) < 1e-12


def test_symmetrize_closed_form(lam):
    q = 0.4
    mu = symmetrize(lam, q)
    assert mu.total_mass == pytest.approx(1.0, abs=1e-12)
    for t in (0.3, 1.7, 5.25):
        expected = math.sin(2 * math.pi * t) / (4 * math.pi * t) + 0.5 * math.cos(
            2 * math.pi * t * math.log(q)
        )
        value = char_fn(mu, t)
        assert abs(value.imag) < 1e-12
        assert value.real == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("q", [0.0, 1.0, -0.5])
def test_symmetrize_rejects_q(lam, q):
    with pytest.raises(DomainError):
        symmetrize(lam, q)


# ---------------------------------------------------------------------------
# Sampling and decay
# ---------------------------------------------------------------------------


def test_sample_dirac():
    assert sample(dirac(0.7), seed=3, n=5).tolist() == [0.7] * 5


def test_sample_is_deterministic(lam):
    assert np.array_equal(sample(lam, 11, 100), sample(lam, 11, 100))


def pushforward_fixtures() -> dict[str, Measure]:
    rng = np.random.default_rng(77)
    fixtures = stock_measures()
    fixtures.update({f"random[{i}]": random_measure(rng) for i in range(4)})
    return fixtures


@pytest.mark.parametrize("name", list(pushforward_fixtures()))
def test_sample_pushforward_ks(name):
    mu = pushforward_fixtures()[name]
    n = 10_000
    assert ks_statistic(mu, sample(mu, seed=2024, n=n)) <= ks_threshold(n)


def test_ks_threshold_value():
    assert ks_threshold(10_000) == pytest.approx(1.6276 / 100, rel=1e-3)


def test_sample_two_atoms_fraction():
    draws = sample(mix([0.5, 0.5], [dirac(0.0), dirac(1.0)]), seed=5, n=10_000)
    assert abs(np.mean(draws == 1.0) - 0.5) <= 0.02


def test_decay_profile_dirac_never_decays():
    profile = decay_profile(dirac(0.3), [(8.0, 16.0), (64.0, 128.0)])
    assert profile == pytest.approx([1.0, 1.0], abs=1e-12)


def test_decay_profile_lebesgue_envelope(lam):
    low, high = decay_profile(lam, [(8.0, 16.0), (64.0, 128.0)])
    assert low <= 1.0 / (8 * math.pi) + 1e-12
    assert high <= 1.0 / (64 * math.pi) + 1e-12


def test_decay_profile_rejects_empty_bands(lam):
    with pytest.raises(InputValidationError):
        decay_profile(lam, [])
    with pytest.raises(InputValidationError):
        decay_profile(lam, [(2.0, 1.0)])


def test_decay_profile_evaluates_bounded_chunks(monkeypatch, lam):
    bands = [(3.0, 5.0), (40.0, 41.0)]
    whole = decay_profile(lam, bands)

    sizes = []
    evaluate = measures_module.char_fn

    def recording_char_fn(mu, t):
        sizes.append(np.size(t))
        return evaluate(mu, t)

    monkeypatch.setattr(runtime_settings, "decay_chunk_points", 100)
    monkeypatch.setattr(measures_module, "char_fn", recording_char_fn)
    chunked = decay_profile(lam, bands)

    assert chunked == whole
    assert max(sizes) <= 100
    # 64 * width^2 + 1 points per band
    assert sum(sizes) == 257 + 65
