"""
Finitely represented probability measures on the real line.

A Measure is a finite sum of weighted atoms and weighted uniform pieces. Every operation
here (CDF, quantile, L1 distance between CDFs, characteristic function) is evaluated in
closed form on that representation; general densities are brought into it with
``from_density`` (piecewise-uniform refinement).

Conventions:
- cdf is right-continuous, F(x) = mu((-inf, x]).
- quantile(mu, y) = min {x : F(x) >= y}; at y = 0 it returns the left end of the support
  hull, since the minimum over the real line is not attained.
- char_fn(mu, t) = integral of exp(2 pi i x t) d mu(x).
"""

import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import structlog
from scipy import integrate, stats

from taulab.config import settings
from taulab.utils.errors import DomainError, InputValidationError

logger = structlog.get_logger()

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Atom:
    """Point mass ``w`` at ``x``."""

    x: float
    w: float


@dataclass(frozen=True)
class Piece:
    """Uniform density w / (hi - lo) on [lo, hi]."""

    lo: float
    hi: float
    w: float

    @property
    def density(self) -> float:
        return self.w / (self.hi - self.lo)


@dataclass(frozen=True)
class Measure:
    """
    Probability measure given by atoms and (possibly overlapping) uniform pieces.

    Parts are stored in canonical order (atoms by location, pieces by (lo, hi, w)) so
    that structural equality is representation independent.
    """

    atoms: tuple[Atom, ...] = ()
    pieces: tuple[Piece, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(sorted(self.atoms, key=lambda a: a.x)))
        object.__setattr__(
            self, "pieces", tuple(sorted(self.pieces, key=lambda p: (p.lo, p.hi, p.w)))
        )
        _validate_parts(self.atoms, self.pieces, settings.weight_tolerance)

    @property
    def total_mass(self) -> float:
        return math.fsum([a.w for a in self.atoms] + [p.w for p in self.pieces])

    @cached_property
    def support_hull(self) -> tuple[float, float]:
        points = [a.x for a in self.atoms] + [p.lo for p in self.pieces] + [
            p.hi for p in self.pieces
        ]
        return min(points), max(points)

    @cached_property
    def cdf_table(self) -> "Cdf":
        return build_cdf(self)


@dataclass(frozen=True, eq=False)
class Cdf:
    """
    Piecewise representation of a CDF: constant jumps at atoms, affine between breakpoints.

    Attributes:
        breakpoints: sorted distinct atom locations and piece endpoints
        values: F(b_i) (right-continuous values)
        left_values: F(b_i-) (left limits)
        slopes: density on (b_i, b_{i+1}); one entry fewer than breakpoints
    """

    breakpoints: np.ndarray
    values: np.ndarray
    left_values: np.ndarray
    slopes: np.ndarray

    def __call__(self, x: float) -> float:
        """Evaluate from the table (affine interpolation from the last breakpoint)."""
        b = self.breakpoints
        if x < b[0]:
            return 0.0
        if x >= b[-1]:
            return 1.0
        i = int(np.searchsorted(b, x, side="right")) - 1
        return float(min(self.values[i] + self.slopes[i] * (x - b[i]), 1.0))


def _validate_parts(atoms: Sequence[Atom], pieces: Sequence[Piece], tolerance: float):
    """Check the Measure invariants; atoms must already be sorted by location."""
    if not atoms and not pieces:
        raise InputValidationError("Measure needs at least one atom or piece")

    for i, atom in enumerate(atoms):
        if not math.isfinite(atom.x):
            raise DomainError(f"atoms[{i}].x={atom.x} is not finite (unbounded support)")
        if not (math.isfinite(atom.w) and atom.w > 0):
            raise InputValidationError(f"atoms[{i}].w={atom.w} must be a positive real")
    for i, (left, right) in enumerate(zip(atoms, atoms[1:], strict=False)):
        if left.x == right.x:
            raise InputValidationError(f"atoms[{i + 1}].x={right.x} duplicates another atom")

    for i, piece in enumerate(pieces):
        if not (math.isfinite(piece.lo) and math.isfinite(piece.hi)):
            raise DomainError(f"pieces[{i}] has a non-finite endpoint (unbounded support)")
        if not piece.lo < piece.hi:
            raise InputValidationError(
                f"pieces[{i}] requires lo < hi, got [{piece.lo}, {piece.hi}]"
            )
        if not (math.isfinite(piece.w) and piece.w > 0):
            raise InputValidationError(f"pieces[{i}].w={piece.w} must be a positive real")

    total = math.fsum([a.w for a in atoms] + [p.w for p in pieces])
    if abs(total - 1.0) > tolerance:
        raise InputValidationError(f"weights sum to {total!r}, expected 1 within {tolerance:g}")


def make_measure(
    atoms: Iterable[tuple[float, float]] = (),
    pieces: Iterable[tuple[float, float, float]] = (),
    tolerance: float | None = None,
) -> Measure:
    """
    Build a Measure from (x, w) atoms and (lo, hi, w) pieces.

    Coincident atoms are merged. The weight sum is checked against ``tolerance``
    (settings.weight_tolerance by default) and then renormalized exactly.
    """
    tol = settings.weight_tolerance if tolerance is None else tolerance

    merged: dict[float, float] = {}
    for x, w in atoms:
        x = float(x)
        # -0.0 and 0.0 are the same location
        merged[x + 0.0] = merged.get(x + 0.0, 0.0) + float(w)
    atom_parts = [Atom(x, w) for x, w in merged.items()]
    piece_parts = [Piece(float(lo), float(hi), float(w)) for lo, hi, w in pieces]

    total = math.fsum([a.w for a in atom_parts] + [p.w for p in piece_parts])
    if not math.isfinite(total) or abs(total - 1.0) > tol:
        raise InputValidationError(f"weights sum to {total!r}, expected 1 within {tol:g}")
    if total != 1.0:
        atom_parts = [Atom(a.x, a.w / total) for a in atom_parts]
        piece_parts = [Piece(p.lo, p.hi, p.w / total) for p in piece_parts]

    return Measure(atoms=tuple(atom_parts), pieces=tuple(piece_parts))


def dirac(c: float) -> Measure:
    """Point mass at c."""
    return Measure(atoms=(Atom(float(c), 1.0),))


def uniform(lo: float, hi: float) -> Measure:
    """Uniform probability measure on [lo, hi]."""
    return Measure(pieces=(Piece(float(lo), float(hi), 1.0),))


def lebesgue() -> Measure:
    """Lebesgue measure on [0, 1]."""
    return uniform(0.0, 1.0)


def from_density(
    pdf: Callable[[float], float],
    lo: float,
    hi: float,
    cells: int,
) -> Measure:
    """
    Piecewise-uniform approximation of the (not necessarily normalized) density ``pdf``
    on [lo, hi], with ``cells`` equal cells carrying the quadrature mass of each cell.
    """
    if cells < 1 or not lo < hi:
        raise InputValidationError("from_density needs cells >= 1 and lo < hi")

    edges = np.linspace(lo, hi, cells + 1)
    masses = [integrate.quad(pdf, a, b)[0] for a, b in zip(edges[:-1], edges[1:], strict=True)]
    if any(m < 0 for m in masses):
        raise InputValidationError("density integrates to a negative mass on some cell")
    total = math.fsum(masses)
    if not total > 0:
        raise InputValidationError("density has zero total mass on [lo, hi]")

    pieces = [
        (float(a), float(b), m / total)
        for a, b, m in zip(edges[:-1], edges[1:], masses, strict=True)
        if m > 0
    ]
    logger.debug("Refined density into uniform pieces", cells=cells, kept=len(pieces))
    return make_measure(pieces=pieces, tolerance=settings.load_weight_tolerance)


def cdf(mu: Measure, x: float) -> float:
    """mu((-inf, x]): atom weights at locations <= x plus affine piece contributions."""
    lo, hi = mu.support_hull
    if x < lo:
        return 0.0
    if x >= hi:
        return 1.0
    terms = [a.w for a in mu.atoms if a.x <= x]
    terms.extend(p.w * min(max((x - p.lo) / (p.hi - p.lo), 0.0), 1.0) for p in mu.pieces)
    return min(math.fsum(terms), 1.0)


def cdf_left(mu: Measure, x: float) -> float:
    """Left limit F(x-) = mu((-inf, x))."""
    lo, hi = mu.support_hull
    if x <= lo:
        return 0.0
    if x > hi:
        return 1.0
    terms = [a.w for a in mu.atoms if a.x < x]
    terms.extend(p.w * min(max((x - p.lo) / (p.hi - p.lo), 0.0), 1.0) for p in mu.pieces)
    return min(math.fsum(terms), 1.0)


def build_cdf(mu: Measure) -> Cdf:
    """Tabulate the CDF of ``mu`` at its breakpoints."""
    points = {a.x for a in mu.atoms}
    for p in mu.pieces:
        points.add(p.lo)
        points.add(p.hi)
    breakpoints = np.array(sorted(points), dtype=float)

    values = np.array([cdf(mu, b) for b in breakpoints])
    left_values = np.array([cdf_left(mu, b) for b in breakpoints])
    slopes = np.array(
        [
            math.fsum(p.density for p in mu.pieces if p.lo <= left and p.hi >= right)
            for left, right in zip(breakpoints[:-1], breakpoints[1:], strict=True)
        ],
        dtype=float,
    )
    return Cdf(breakpoints=breakpoints, values=values, left_values=left_values, slopes=slopes)


def quantile(mu: Measure, y: float) -> float:
    """
    Generalized inverse min {x : cdf(mu, x) >= y}.

    Breakpoint search on the tabulated CDF followed by closed-form inversion on the
    affine segment; the result is moved up by ulps until cdf(mu, x) >= y holds exactly
    as evaluated by ``cdf``.

    Raises:
        DomainError: if y is outside [0, 1]
    """
    if not 0.0 <= y <= 1.0:
        raise DomainError(f"quantile level y={y} outside [0, 1]")

    table = mu.cdf_table
    b = table.breakpoints
    if y == 0.0:
        return float(b[0])

    i = int(np.searchsorted(table.values, y, side="left"))
    if i >= len(b):
        i = len(b) - 1
    if i == 0 or table.left_values[i] < y:
        return float(b[i])

    # y is reached on the open segment (b[i-1], b[i])
    left = float(b[i - 1])
    x = left + (y - float(table.values[i - 1])) / float(table.slopes[i - 1])
    x = min(max(x, left), float(b[i]))
    return _raise_until_reached(mu, x, y, float(b[i]))


def _raise_until_reached(mu: Measure, x: float, y: float, cap: float, max_steps: int = 64) -> float:
    for _ in range(max_steps):
        if cdf(mu, x) >= y:
            return x
        x = math.nextafter(x, math.inf)
        if x >= cap:
            return cap
    return cap


def quantiles(mu: Measure, ys: Iterable[float]) -> np.ndarray:
    """Vector of quantile(mu, y) for each y."""
    return np.array([quantile(mu, float(y)) for y in ys], dtype=float)


def l1_quantile_distance(mu: Measure, eta: Measure) -> float:
    """
    ||phi_mu - phi_eta||_1 = integral of |F_mu - F_eta| over the common support hull.

    The difference of the CDFs is affine between merged breakpoints; each segment is
    integrated exactly, splitting at a sign change.
    """
    lo = min(mu.support_hull[0], eta.support_hull[0])
    hi = max(mu.support_hull[1], eta.support_hull[1])
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError("l1_quantile_distance requires bounded supports")

    points = sorted(
        set(mu.cdf_table.breakpoints.tolist()) | set(eta.cdf_table.breakpoints.tolist())
    )
    segments = []
    for u, v in zip(points[:-1], points[1:], strict=True):
        start = cdf(mu, u) - cdf(eta, u)
        end = cdf_left(mu, v) - cdf_left(eta, v)
        segments.append(_integrate_abs_affine(start, end, v - u))
    return math.fsum(segments)


def _integrate_abs_affine(start: float, end: float, length: float) -> float:
    """Exact integral of |affine| over a segment given its endpoint values."""
    if start * end >= 0.0:
        return 0.5 * (abs(start) + abs(end)) * length
    return (start * start + end * end) / (2.0 * (abs(start) + abs(end))) * length


def _sinc(u: np.ndarray) -> np.ndarray:
    """sin(u)/u with a 4-term Taylor branch for |2u| below the small-argument threshold."""
    small = np.abs(2.0 * u) < settings.small_arg_threshold
    safe = np.where(small, 1.0, u)
    u2 = u * u
    series = 1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0
    return np.where(small, series, np.sin(safe) / safe)


def char_fn(mu: Measure, t):
    """
    Characteristic function t -> integral of exp(2 pi i x t) d mu(x).

    Accepts a scalar (returns complex) or an array of t (returns a complex array).
    Each piece contributes w * exp(2 pi i mid t) * sinc(pi t (hi - lo)), which equals the
    difference quotient (e^{2 pi i hi t} - e^{2 pi i lo t}) / (2 pi i t (hi - lo)).
    """
    ts = np.asarray(t, dtype=float)
    acc = np.zeros(ts.shape, dtype=complex)
    for atom in mu.atoms:
        acc += atom.w * np.exp(1j * (TWO_PI * atom.x * ts))
    for piece in mu.pieces:
        mid = 0.5 * (piece.lo + piece.hi)
        phase = np.exp(1j * (TWO_PI * mid * ts))
        acc += piece.w * phase * _sinc(math.pi * ts * (piece.hi - piece.lo))
    if ts.ndim == 0:
        return complex(acc)
    return acc


def mix(weights: Sequence[float], parts: Sequence[Measure]) -> Measure:
    """
    Convex combination sum_i weights[i] * parts[i].

    A combination with a single non-zero weight returns that part unchanged.

    Raises:
        InputValidationError: on length mismatch, negative weights or a weight sum off
            by more than settings.weight_tolerance
    """
    if len(weights) != len(parts) or not parts:
        raise InputValidationError("mix needs equally many weights and parts (at least one)")
    for i, w in enumerate(weights):
        if not (math.isfinite(w) and w >= 0):
            raise InputValidationError(f"weights[{i}]={w} must be a non-negative real")
    total = math.fsum(weights)
    if abs(total - 1.0) > settings.weight_tolerance:
        raise InputValidationError(f"mixture weights sum to {total!r}, expected 1")

    active = [(float(w), part) for w, part in zip(weights, parts, strict=True) if w > 0]
    if len(active) == 1:
        return active[0][1]

    atoms = [(a.x, w * a.w) for w, part in active for a in part.atoms]
    pieces = [(p.lo, p.hi, w * p.w) for w, part in active for p in part.pieces]
    return make_measure(atoms, pieces)


def opposite(mu: Measure) -> Measure:
    """Reflection through 0: mu_op(U) = mu(-U)."""
    return Measure(
        atoms=tuple(Atom(-a.x + 0.0, a.w) for a in mu.atoms),
        pieces=tuple(Piece(-p.hi, -p.lo, p.w) for p in mu.pieces),
    )


def symmetrize(mu: Measure, q: float) -> Measure:
    """
    (mu + mu_op + delta_{log q} + delta_{-log q}) / 4.

    Raises:
        DomainError: if q is outside (0, 1)
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"symmetrize needs q in (0, 1), got {q}")
    log_q = math.log(q)
    return mix([0.25] * 4, [mu, opposite(mu), dirac(log_q), dirac(-log_q)])


def sample(mu: Measure, seed: int, n: int) -> np.ndarray:
    """
    Inverse-CDF sampling: quantile(mu, u_i) for n uniform deviates from a seeded generator.
    """
    if n < 1:
        raise InputValidationError(f"sample size n={n} must be >= 1")
    rng = np.random.default_rng(seed)
    return quantiles(mu, rng.random(n))


def empirical_char_fn(samples: np.ndarray, t):
    """(1/n) sum_j exp(2 pi i t x_j) for scalar or array t."""
    xs = np.asarray(samples, dtype=float)
    ts = np.asarray(t, dtype=float)
    values = np.exp(1j * TWO_PI * np.multiply.outer(ts, xs)).mean(axis=-1)
    if ts.ndim == 0:
        return complex(values)
    return values


def ks_statistic(mu: Measure, samples: np.ndarray) -> float:
    """
    sup_x |F_n(x) - F(x)| between the empirical CDF of ``samples`` and cdf(mu, .).

    Both one-sided limits are compared at every distinct sample value, so measures with
    atoms are handled exactly.
    """
    values, counts = np.unique(np.asarray(samples, dtype=float), return_counts=True)
    n = counts.sum()
    right = np.cumsum(counts) / n
    left = right - counts / n
    model_right = np.array([cdf(mu, v) for v in values])
    model_left = np.array([cdf_left(mu, v) for v in values])
    return float(max(np.max(np.abs(right - model_right)), np.max(np.abs(left - model_left))))


def ks_threshold(n: int, alpha: float = 0.01) -> float:
    """Asymptotic Kolmogorov critical value c(alpha)/sqrt(n) (1.63/sqrt(n) at alpha=0.01)."""
    return float(stats.kstwobign.ppf(1.0 - alpha)) / math.sqrt(n)


def decay_profile(
    mu: Measure,
    bands: Sequence[tuple[float, float]],
    step: float | None = None,
) -> list[float]:
    """
    Per band [lo, hi], the maximum of |char_fn(mu, t)| over a deterministic grid.

    This is a grid lower estimate of the true supremum over the band, not a rigorous sup.
    The grid step defaults to 1 / (settings.decay_points_per_width * band width).
    The grid is evaluated settings.decay_chunk_points at a time, so memory stays bounded on
    wide bands.

    Raises:
        InputValidationError: on an empty band list or a band that is not 0 < lo < hi
    """
    if not bands:
        raise InputValidationError("decay_profile needs at least one band")

    profile = []
    for i, (lo, hi) in enumerate(bands):
        if not 0.0 < lo < hi:
            raise InputValidationError(f"bands[{i}]=({lo}, {hi}) must satisfy 0 < lo < hi")
        width = hi - lo
        h = step if step is not None else 1.0 / (settings.decay_points_per_width * width)
        count = int(math.floor(width / h + 1e-9)) + 1
        chunk = max(settings.decay_chunk_points, 1)
        best = 0.0
        for start in range(0, count, chunk):
            grid = lo + h * np.arange(start, min(start + chunk, count))
            best = max(best, float(np.max(np.abs(char_fn(mu, grid)))))
        if lo + h * (count - 1) < hi:
            best = max(best, float(np.abs(char_fn(mu, np.array([hi])))[0]))
        profile.append(best)

    logger.debug("Computed decay profile", bands=len(bands))
    return profile
