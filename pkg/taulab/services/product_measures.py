"""
Dyadic Cantor product measures.

Parameter sequences a = (a_n)_{n>=0} with every a_n in (0, 1/4) define the product measure
nu_a on K = {-1, 0, 1}^N whose coordinate n is 0 with probability 1 - a_n and +-1 with
probability a_n / 2 each, and its image mu_a under theta(x) = sum_n x_n 2^{-n}.

Indexing: every sequence is indexed from n = 0, and coordinate n of nu_a is governed by
a_n. The same index is used by theta, by the product formula for the characteristic
function and by the metric d_a.

The characteristic function is the infinite product
    mu_a^(t) = prod_{n>=0} (1 - a_n (1 - cos(2 pi t 2^{-n})))
returned as a Bracket: the truncated product is certified with the tail bound
1 - cos(2 pi u) <= 2 pi^2 u^2 and a_n < 1/4, and padded by the float slack.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import mpmath
import numpy as np
import structlog

from taulab.config import settings
from taulab.services.bracket import Bracket, pad_factor
from taulab.utils.errors import DomainError, EnclosureError, InputValidationError
from taulab.utils.parallel import ordered_map

logger = structlog.get_logger()

QUARTER = 0.25
SMALLEST_POSITIVE = math.ulp(0.0)

TailKind = Literal["constant", "geometric", "power"]


@dataclass(frozen=True)
class TailRule:
    """
    Closed-form rule for the values past the prefix, evaluated at the absolute index n:
    constant c, geometric c * r**n, or power c * (n + 1) ** -p.
    """

    kind: TailKind
    c: float
    r: float | None = None
    p: float | None = None

    def __post_init__(self):
        if self.kind not in ("constant", "geometric", "power"):
            raise InputValidationError(f"tail.kind={self.kind!r} is not constant|geometric|power")
        if not (math.isfinite(self.c) and self.c > 0):
            raise InputValidationError(f"tail.c={self.c} must be a positive real")
        if self.kind == "geometric" and not (self.r is not None and 0.0 < self.r < 1.0):
            raise InputValidationError(f"geometric tail needs 0 < r < 1, got r={self.r}")
        if self.kind == "power" and not (self.p is not None and self.p > 0.0):
            raise InputValidationError(f"power tail needs p > 0, got p={self.p}")

    def value(self, n: int) -> float:
        if self.kind == "constant":
            return self.c
        if self.kind == "geometric":
            raw = self.c * self.r**n  # type: ignore[operator]
        else:
            raw = self.c * (n + 1) ** -self.p  # type: ignore[operator]
        # Far tails underflow; round up to the smallest positive double to stay in (0, 1/4)
        return max(raw, SMALLEST_POSITIVE)

    @property
    def summable(self) -> bool:
        if self.kind == "power":
            return self.p > 1.0  # type: ignore[operator]
        return self.kind == "geometric"

    def tail_sum(self, start: int) -> float:
        """
        Upper bound on sum_{n >= start} value(n); exact for geometric rules,
        integral comparison for power rules, inf when the rule is not summable.
        """
        if not self.summable:
            return math.inf
        if self.kind == "geometric":
            return self.c * self.r**start / (1.0 - self.r)  # type: ignore[operator]
        p = self.p  # type: ignore[assignment]
        first = self.c * (start + 1) ** -p
        return first + self.c * (start + 1) ** (1.0 - p) / (p - 1.0)


@dataclass(frozen=True)
class ParamSeq:
    """An element of X = (0, 1/4)^N: explicit prefix followed by a tail rule."""

    prefix: tuple[float, ...]
    tail: TailRule

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(float(v) for v in self.prefix))
        for i, value in enumerate(self.prefix):
            if not 0.0 < value < QUARTER:
                raise InputValidationError(f"prefix[{i}]={value} outside (0, 1/4)")
        start = len(self.prefix)
        # Tail rules are non-increasing in n, so the first tail value bounds the rest
        first_tail = self.tail.value(start)
        if not 0.0 < first_tail < QUARTER:
            raise InputValidationError(f"tail value at index {start}={first_tail} outside (0, 1/4)")

    def __getitem__(self, n: int) -> float:
        return param_at(self, n)

    def values(self, stop: int, start: int = 0) -> list[float]:
        """a_n for start <= n < stop."""
        return [param_at(self, n) for n in range(start, stop)]


def param_at(a: ParamSeq, n: int) -> float:
    """a_n: prefix value when n is inside the prefix, tail rule evaluation otherwise."""
    if n < 0:
        raise DomainError(f"parameter index n={n} must be >= 0")
    if n < len(a.prefix):
        return a.prefix[n]
    return a.tail.value(n)


def constant_seq(c: float) -> ParamSeq:
    return ParamSeq(prefix=(), tail=TailRule("constant", c))


def geometric_seq(c: float, r: float) -> ParamSeq:
    return ParamSeq(prefix=(), tail=TailRule("geometric", c, r=r))


def power_seq(c: float, p: float) -> ParamSeq:
    return ParamSeq(prefix=(), tail=TailRule("power", c, p=p))


@dataclass(frozen=True)
class TritPrefix:
    """Finite word over {-1, 0, 1}: a truncated point of K."""

    trits: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "trits", tuple(int(v) for v in self.trits))
        for i, v in enumerate(self.trits):
            if v not in (-1, 0, 1):
                raise InputValidationError(f"trits[{i}]={v} not in {{-1, 0, 1}}")

    @property
    def depth(self) -> int:
        return len(self.trits)


def theta(x: TritPrefix) -> Bracket:
    """
    theta(x) = sum_n x_n 2^{-n}, enclosed as the partial sum +- 2^{-D+1}
    (the largest possible contribution of the unseen coordinates n >= D).
    """
    if x.depth < 1:
        raise DomainError("theta needs a prefix of depth >= 1")
    center = math.fsum(math.ldexp(v, -n) for n, v in enumerate(x.trits))
    slack = math.ldexp(1.0, -x.depth + 1)
    return Bracket(center - slack, center + slack)


def sample_nu_array(a: ParamSeq, depth: int, seed: int | tuple[int, ...], n: int) -> np.ndarray:
    """(n, depth) int8 array of i.i.d. truncated draws from nu_a."""
    if depth < 1 or n < 1:
        raise InputValidationError(f"sampling needs depth >= 1 and n >= 1, got D={depth}, n={n}")
    rng = np.random.default_rng(seed)
    probs = np.array(a.values(depth), dtype=float)
    u = rng.random((n, depth))
    trits = np.zeros((n, depth), dtype=np.int8)
    nonzero = u >= 1.0 - probs
    # Split the nonzero event in two halves of probability a_n / 2
    positive = u >= 1.0 - probs / 2.0
    trits[nonzero] = -1
    trits[positive] = 1
    return trits


def sample_nu(a: ParamSeq, depth: int, seed: int, n: int) -> list[TritPrefix]:
    """Deterministic (per seed) i.i.d. truncated draws from nu_a."""
    return [TritPrefix(tuple(row)) for row in sample_nu_array(a, depth, seed, n).tolist()]


def mu_a_sample(
    a: ParamSeq,
    depth: int | None = None,
    seed: int = 0,
    n: int = 1,
    tasks: int = 1,
) -> np.ndarray:
    """
    Samples of mu_a = theta_*(nu_a): theta centers of truncated nu_a draws.

    Each point carries a truncation bias of at most 2^{-D+1}. With ``tasks`` > 1 the
    draws are split into chunks whose generators are seeded by (seed, task_index), so the
    result does not depend on scheduling.
    """
    d = depth if depth is not None else settings.default_depth
    weights = np.ldexp(1.0, -np.arange(d))
    if tasks <= 1:
        return sample_nu_array(a, d, seed, n) @ weights

    sizes = [n // tasks + (1 if i < n % tasks else 0) for i in range(tasks)]
    chunks = ordered_map(
        lambda job: sample_nu_array(a, d, (seed, job[0]), job[1]) @ weights,
        [(i, size) for i, size in enumerate(sizes) if size > 0],
    )
    return np.concatenate(chunks)


def tail_epsilon(t: float, truncation: int) -> float:
    """Bound pi^2 t^2 4^{-N} / 6 on sum_{n>N} a_n (1 - cos(2 pi t 2^{-n}))."""
    return math.pi**2 * t * t * math.ldexp(1.0, -2 * truncation) / 6.0


def default_truncation(t: float) -> int:
    """Smallest N (at least settings.min_product_truncation) with tail bound <= target."""
    if t == 0.0:
        return settings.min_product_truncation
    needed = math.log(math.pi**2 * t * t / (6.0 * settings.product_target_eps), 4.0)
    return max(settings.min_product_truncation, math.ceil(needed))


def _one_minus_cos(u: float) -> float:
    """1 - cos(2 pi u) = 2 sin^2(pi d) with d the signed distance of u to Z."""
    d = u - round(u)
    s = math.sin(math.pi * d)
    return 2.0 * s * s


def char_fn_product(a: ParamSeq, t: float, truncation: int | None = None) -> Bracket:
    """
    Enclosure of mu_a^(t) = prod_{n>=0} (1 - a_n (1 - cos(2 pi t 2^{-n}))).

    For every level k <= N whose tail bound eps_k = pi^2 t^2 4^{-k} / 6 is below 1, the
    value lies in [P_k (1 - eps_k) - s_k, P_k + s_k] with s_k the float pad; the returned
    bracket is the intersection over those levels, so brackets are nested in N. The width
    shrinks with N until eps_N reaches the pad floor slack * (N + 1) and stays flat past it.

    Raises:
        EnclosureError: if the tail bound at N is not below 1 (N too small for t)
    """
    n_max = truncation if truncation is not None else default_truncation(t)
    if n_max < 1:
        raise DomainError(f"truncation N={n_max} must be >= 1")
    eps_final = tail_epsilon(t, n_max)
    if not eps_final < 1.0:
        raise EnclosureError(
            f"tail bound {eps_final:.3g} >= 1 at N={n_max} for t={t}; increase the truncation"
        )

    lo, hi = -math.inf, math.inf
    partial = 1.0
    for k in range(n_max + 1):
        partial *= 1.0 - param_at(a, k) * _one_minus_cos(math.ldexp(t, -k))
        eps = tail_epsilon(t, k)
        if eps < 1.0:
            slack = partial * pad_factor(k + 1)
            lo = max(lo, partial * (1.0 - eps) - slack)
            hi = min(hi, partial + slack)

    return Bracket(lo, hi)


def char_fn_product_reference(a: ParamSeq, t: float, truncation: int, dps: int = 50) -> float:
    """Truncated product evaluated with ``dps`` decimal digits (precision-extended oracle)."""
    with mpmath.workdps(dps):
        two_pi_t = 2 * mpmath.pi * mpmath.mpf(t)
        product = mpmath.mpf(1)
        for k in range(truncation + 1):
            arg = two_pi_t * mpmath.ldexp(mpmath.mpf(1), -k)
            product *= 1 - mpmath.mpf(param_at(a, k)) * (1 - mpmath.cos(arg))
        return float(product)


def char_fn_product_many(
    a: ParamSeq,
    ts: Sequence[float],
    truncation: int | None = None,
) -> list[Bracket]:
    """char_fn_product over a t-grid, in grid order."""
    return ordered_map(lambda t: char_fn_product(a, t, truncation), ts)
