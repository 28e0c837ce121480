"""
The translation invariant metrics

    d_a(t, s) = ( sum_{n>=0} a_n d_Z(2^{-n} (t - s))^2 )^{1/2},    a in (0, 1/4)^N,

their enclosures, dyadic-argument series and searches.

Dyadic arguments: d_Z(2^{m-n}) vanishes for n <= m and equals 2^{-k} for n = m + k, so

    d_a(2^m, 0)^2 = sum_{k>=1} a_{m+k} 4^{-k},

whose first term gives the lower bound a_{m+1} / 4 and whose tail past k = n is below
4^{-n-1} / 3. The variant with weights 2^{-k} (lower constant 1/2, tail 2^{-n-2}) is what
one gets when d_Z is not squared; ``two_sided_bounds`` reports it next to the squared
series as the "unsquared" reading, without asserting it.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Literal

import numpy as np
import structlog

from taulab.config import settings
from taulab.services.bracket import Bracket, padded
from taulab.services.product_measures import (
    QUARTER,
    ParamSeq,
    TailRule,
    char_fn_product,
    param_at,
)
from taulab.utils.errors import DomainError, InputValidationError, UndecidedError
from taulab.utils.parallel import ordered_map
from taulab.utils.refine import refine_until_decided

logger = structlog.get_logger()


def d_z(u: float) -> float:
    """Distance from u to the nearest integer, in [0, 1/2]."""
    return abs(u - round(u))


def d_a_squared(a: ParamSeq, t: float, s: float, truncation: int | None = None) -> Bracket:
    """
    Enclosure of d_a(t, s)^2: partial sum over n <= N plus a tail in
    [0, (t - s)^2 4^{-N} / 12] (from d_Z(v) <= |v| and a_n < 1/4).
    """
    n_max = truncation if truncation is not None else settings.default_metric_truncation
    if n_max < 0:
        raise DomainError(f"truncation N={n_max} must be >= 0")

    delta = t - s
    partial = math.fsum(
        param_at(a, n) * d_z(math.ldexp(delta, -n)) ** 2 for n in range(n_max + 1)
    )
    tail = delta * delta * math.ldexp(1.0, -2 * n_max) / 12.0
    return padded(partial, partial + tail, n_max + 1)


def d_a(a: ParamSeq, t: float, s: float, truncation: int | None = None) -> Bracket:
    """Enclosure of d_a(t, s) (square root of the squared enclosure)."""
    return d_a_squared(a, t, s, truncation).sqrt()


def d_a_dyadic_sq(a: ParamSeq, m: int, terms: int | None = None) -> Bracket:
    """
    Enclosure of d_a(2^m, 0)^2 = sum_{k>=1} a_{m+k} 4^{-k} from the first N terms plus
    the tail bound 4^{-N-1} / 3.
    """
    n_terms = terms if terms is not None else settings.default_series_terms
    if m < 0 or n_terms < 1:
        raise DomainError(f"dyadic series needs m >= 0 and N >= 1, got m={m}, N={n_terms}")

    partial = math.fsum(param_at(a, m + k) * math.ldexp(1.0, -2 * k) for k in range(1, n_terms + 1))
    tail = math.ldexp(1.0, -2 * n_terms - 2) / 3.0
    return padded(partial, partial + tail, n_terms)


@dataclass(frozen=True)
class TwoSidedBounds:
    """
    Bounds on d_a(2^m, 0)^2 for a given (m, n).

    ``lower``/``upper`` are the bounds of the squared series; ``unsquared_*`` are the
    bounds with weights 2^{-k} (lower a_{m+1}/2, upper 2^{-n-2} + sum a_{m+k} 2^{-k}).
    ``unsquared_lower_exceeds`` records whether that lower bound exceeds the certified
    series value, i.e. whether the unsquared reading is inconsistent with the metric.
    """

    m: int
    n: int
    lower: float
    upper: float
    series: Bracket
    unsquared_lower: float
    unsquared_upper: float
    unsquared_lower_exceeds: bool


def two_sided_bounds(a: ParamSeq, m: int, n: int) -> TwoSidedBounds:
    """a_{m+1}/4 <= d_a(2^m, 0)^2 <= sum_{k<=n} a_{m+k} 4^{-k} + 4^{-n-1}/3, with the series."""
    if m < 0 or n < 1:
        raise DomainError(f"two_sided_bounds needs m >= 0 and n >= 1, got m={m}, n={n}")

    head = [param_at(a, m + k) for k in range(1, n + 1)]
    lower = head[0] / 4.0
    upper = math.fsum(v * math.ldexp(1.0, -2 * k) for k, v in enumerate(head, start=1)) + (
        math.ldexp(1.0, -2 * n - 2) / 3.0
    )
    unsquared_lower = head[0] / 2.0
    unsquared_upper = math.ldexp(1.0, -n - 2) + math.fsum(
        v * math.ldexp(1.0, -k) for k, v in enumerate(head, start=1)
    )
    series = d_a_dyadic_sq(a, m, n + settings.default_series_terms)

    bounds = TwoSidedBounds(
        m=m,
        n=n,
        lower=lower,
        upper=upper,
        series=series,
        unsquared_lower=unsquared_lower,
        unsquared_upper=unsquared_upper,
        unsquared_lower_exceeds=unsquared_lower > series.hi,
    )
    if bounds.unsquared_lower_exceeds:
        logger.debug(
            "Unsquared lower bound exceeds the dyadic series",
            m=m,
            unsquared_lower=unsquared_lower,
            series_hi=series.hi,
        )
    return bounds


@dataclass(frozen=True)
class DyadicHit:
    m: int
    value: Bracket  # enclosure of d_a(2^m, 0)


@dataclass(frozen=True)
class DyadicNullReport:
    """All m in [m_min, m_max] with certified d_a(2^m, 0) < epsilon; undecided m listed apart."""

    a: ParamSeq
    epsilon: float
    m_min: int
    m_max: int
    hits: tuple[DyadicHit, ...]
    undecided: tuple[int, ...]


def _dyadic_distance(a: ParamSeq, m: int, terms: int) -> Bracket:
    return d_a_dyadic_sq(a, m, terms).sqrt()


def find_null_dyadic(
    a: ParamSeq,
    epsilon: float,
    m_max: int,
    m_min: int = 0,
    terms: int | None = None,
) -> DyadicNullReport:
    """
    Search m_min <= m <= m_max for certified d_a(2^m, 0) < epsilon.

    A bracket straddling epsilon is refined once (doubled series length) before the m is
    reported as undecided.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon={epsilon} must be > 0")
    if m_max < 1 or m_min < 0 or m_min > m_max:
        raise DomainError(f"m-range [{m_min}, {m_max}] is empty or invalid")
    n_terms = terms if terms is not None else settings.default_series_terms

    def classify(m: int) -> tuple[int, Bracket | None, bool]:
        def decide(n: int) -> tuple[Bracket, bool]:
            value = _dyadic_distance(a, m, n)
            return value, value.below(epsilon)

        try:
            value, small = refine_until_decided(decide, n_terms)
        except UndecidedError:
            return m, None, False
        return m, value, small

    results = ordered_map(classify, range(m_min, m_max + 1))
    hits = tuple(DyadicHit(m, value) for m, value, small in results if value is not None and small)
    undecided = tuple(m for m, value, _ in results if value is None)

    logger.info(
        "Dyadic null search finished",
        epsilon=epsilon,
        m_range=(m_min, m_max),
        hits=len(hits),
        undecided=len(undecided),
    )
    return DyadicNullReport(
        a=a,
        epsilon=epsilon,
        m_min=m_min,
        m_max=m_max,
        hits=tuple(sorted(hits, key=lambda h: h.m)),
        undecided=undecided,
    )


@dataclass(frozen=True)
class SeparationWitness:
    """
    A dyadic point 2^m where one metric is certified below epsilon and the other above.
    ``null_side`` names the sequence ("a" or "b") whose distance is below epsilon.
    """

    m: int
    d_a_value: Bracket
    d_b_value: Bracket
    epsilon: float
    null_side: Literal["a", "b"] = "a"


@dataclass(frozen=True)
class SeparationReport:
    witness: SeparationWitness | None
    undecided: tuple[int, ...]
    m_min: int
    m_max: int


def separation_search(
    a: ParamSeq,
    b: ParamSeq,
    epsilon: float,
    m_max: int,
    m_min: int = 0,
    terms: int | None = None,
) -> SeparationReport:
    """
    First m in [m_min, m_max] with d_a(2^m, 0) < epsilon < d_b(2^m, 0) (or with the roles
    of a and b swapped), both comparisons certified. Undecided m are reported.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon={epsilon} must be > 0")
    if m_min < 0 or m_min > m_max:
        raise DomainError(f"m-range [{m_min}, {m_max}] is empty or invalid")
    n_terms = terms if terms is not None else settings.default_series_terms

    def classify(m: int) -> tuple[int, SeparationWitness | None, bool]:
        def decide(n: int) -> SeparationWitness | None:
            da = _dyadic_distance(a, m, n)
            db = _dyadic_distance(b, m, n)
            a_small, b_small = da.below(epsilon), db.below(epsilon)
            if a_small == b_small:
                return None
            return SeparationWitness(
                m=m,
                d_a_value=da,
                d_b_value=db,
                epsilon=epsilon,
                null_side="a" if a_small else "b",
            )

        try:
            return m, refine_until_decided(decide, n_terms), False
        except UndecidedError:
            return m, None, True

    results = ordered_map(classify, range(m_min, m_max + 1))
    witness = next((w for _, w, _ in results if w is not None), None)
    undecided = tuple(m for m, _, open_ in results if open_)

    logger.info(
        "Separation search finished",
        epsilon=epsilon,
        m_range=(m_min, m_max),
        witness_m=witness.m if witness else None,
        undecided=len(undecided),
    )
    return SeparationReport(witness=witness, undecided=undecided, m_min=m_min, m_max=m_max)


def separation_witness(
    a: ParamSeq,
    b: ParamSeq,
    epsilon: float,
    m_max: int,
    m_min: int = 0,
) -> SeparationWitness | None:
    """The first certified separation witness, or None."""
    return separation_search(a, b, epsilon, m_max, m_min=m_min).witness


class L1Verdict(str, Enum):
    ELL1_CLOSE = "ell1_close"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class L1Distance:
    partial: float
    tail_bound: float | None
    verdict: L1Verdict


def l1_param_distance(a: ParamSeq, b: ParamSeq, truncation: int) -> L1Distance:
    """
    sum_{n<=N} |a_n - b_n| with a closed-form bound on the rest of the series and a
    verdict on whether a - b is summable (summable implies the same topology).

    Verdicts: identical tails or two summable tails give ell1_close with a finite
    tail_bound; exactly one summable tail, or two non-summable tails that differ,
    give divergent; non-summable tails that agree at every probe index although the
    rules differ give inconclusive.
    """
    if truncation < 1:
        raise DomainError(f"truncation N={truncation} must be >= 1")

    partial = math.fsum(abs(param_at(a, n) - param_at(b, n)) for n in range(truncation + 1))
    start = max(truncation + 1, len(a.prefix), len(b.prefix))
    middle = math.fsum(abs(param_at(a, n) - param_at(b, n)) for n in range(truncation + 1, start))

    if a.tail == b.tail:
        return L1Distance(partial, middle, L1Verdict.ELL1_CLOSE)
    if a.tail.summable and b.tail.summable:
        bound = middle + a.tail.tail_sum(start) + b.tail.tail_sum(start)
        return L1Distance(partial, bound, L1Verdict.ELL1_CLOSE)
    if a.tail.summable != b.tail.summable:
        return L1Distance(partial, None, L1Verdict.DIVERGENT)

    if _tails_agree(a.tail, b.tail, start):
        return L1Distance(partial, None, L1Verdict.INCONCLUSIVE)
    return L1Distance(partial, None, L1Verdict.DIVERGENT)


def _tails_agree(first: TailRule, second: TailRule, start: int) -> bool:
    probes = [start * 10**k for k in range(7)] if start else [10**k for k in range(7)]
    return all(
        abs(first.value(n) - second.value(n)) <= 1e-15 * max(first.value(n), second.value(n))
        for n in probes
    )


def phi0(y):
    """1/8 + arctan(y) / (4 pi): an increasing contraction of R onto (0, 1/4)."""
    value = 0.125 + np.arctan(y) / (4.0 * math.pi)
    if np.ndim(value) == 0:
        return float(value)
    return value


def phi_sequence(xs: Sequence[float], tail_y: float) -> ParamSeq:
    """Coordinate-wise phi0 of a real prefix, followed by the constant tail phi0(tail_y)."""
    return ParamSeq(
        prefix=tuple(phi0(float(x)) for x in xs),
        tail=TailRule("constant", phi0(float(tail_y))),
    )


@dataclass(frozen=True)
class FourierMetricRow:
    t: float
    char_fn: Bracket  # enclosure of mu_a^(t)
    distance: Bracket  # enclosure of d_a(t, 0)


def fourier_metric_profile(
    a: ParamSeq,
    ts: Sequence[float],
    truncation: int | None = None,
) -> list[FourierMetricRow]:
    """
    Pair mu_a^(t) with d_a(t, 0) along a sequence of t: t_k -> 0 in the topology of mu_a
    exactly when mu_a^(t_k) -> 1, exactly when d_a(t_k, 0) -> 0.
    """

    def row(t: float) -> FourierMetricRow:
        return FourierMetricRow(
            t=t,
            char_fn=char_fn_product(a, t, truncation),
            distance=d_a(a, t, 0.0, truncation),
        )

    return ordered_map(row, ts)


def small_window_indices(a: ParamSeq, n: int, m_max: int) -> list[int]:
    """
    m in [n, m_max] with sum_{k<=n} a_{m+k} 4^{-k} < 4^{-n}; each such m certifies
    d_a(2^m, 0)^2 < 4^{-n} (1 + 1/12). Sequences with such m for infinitely many n have
    d_a(2^{m_n}, 0) -> 0 along them.
    """
    if n < 1:
        raise DomainError(f"window length n={n} must be >= 1")
    threshold = math.ldexp(1.0, -2 * n)
    return [
        m
        for m in range(n, m_max + 1)
        if math.fsum(param_at(a, m + k) * math.ldexp(1.0, -2 * k) for k in range(1, n + 1))
        < threshold
    ]


def large_coordinate_indices(
    b: ParamSeq,
    n_seq: Sequence[int],
    threshold: float = 0.125,
) -> list[int]:
    """
    Positions j with b_{n_j + 1} > threshold; by the first-term lower bound each certifies
    d_b(2^{n_j}, 0)^2 > threshold / 4, so d_b(2^{n_j}, 0) does not tend to 0 along them.
    """
    if not 0.0 < threshold < QUARTER:
        raise InputValidationError(f"threshold={threshold} must lie in (0, 1/4)")
    return [j for j, nj in enumerate(n_seq) if param_at(b, nj + 1) > threshold]
