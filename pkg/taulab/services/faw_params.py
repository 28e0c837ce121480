"""
Free Araki-Woods parameter symbols.

For a probability measure mu on [0, 1] and q in (0, 1) the pair (J, T_mu) acts on
L^2[0,1] + L^2[0,1] + C^2 as

    T_mu = (1 + exp(phi_mu))^{-1}  (+)  (1 + exp(-phi_mu))^{-1}
           (+)  diag((1 + q)^{-1}, (1 + q^{-1})^{-1})

with phi_mu the quantile function, and J swaps the two function components (with complex
conjugation) and the two basis vectors of C^2. Only the pointwise symbols are represented;
the relations T = T^*, 0 <= T <= 1, T + JTJ = 1 and trivial kernels of T and 1 - T are
checked at the symbol level on a grid.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import partial

import numpy as np
import structlog
from scipy.special import expit

from taulab.config import settings
from taulab.models.documents import FawSymbolExport, SymbolRow, decimal_string
from taulab.services.measures import Measure, lebesgue, mix, quantiles, symmetrize
from taulab.utils.errors import DomainError, InputValidationError

logger = structlog.get_logger()

J_STRUCTURE = "swap-and-conjugate the two function components; J0 swaps e1, e2"

Symbol = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FawSymbol:
    """
    Pointwise data of (J, T): f1, f2 evaluate the two multiplication symbols on [0, 1]
    (vectorized over numpy arrays), matrix_diag is the diagonal of the C^2 block.
    """

    q: float
    f1: Symbol
    f2: Symbol
    matrix_diag: tuple[float, float]
    j_structure: str = J_STRUCTURE
    source: Measure | None = field(default=None, compare=False)


def _quantile_symbol(mu: Measure, sign: float, x) -> np.ndarray:
    """expit(sign * phi_mu(x)): sign -1 gives (1 + e^phi)^{-1}, sign +1 gives (1 + e^-phi)^{-1}."""
    levels = np.atleast_1d(np.asarray(x, dtype=float))
    return expit(sign * quantiles(mu, levels))


def matrix_block(q: float) -> tuple[float, float]:
    """((1 + q)^{-1}, (1 + q^{-1})^{-1}); the second entry is written q / (1 + q)."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"q={q} must lie in (0, 1)")
    return 1.0 / (1.0 + q), q / (1.0 + q)


def build_faw_symbol(mu: Measure, q: float) -> FawSymbol:
    """
    Symbol of T_mu for a measure supported in [0, 1].

    Raises:
        DomainError: if the support of mu leaves [0, 1] or q is outside (0, 1)
    """
    lo, hi = mu.support_hull
    if lo < 0.0 or hi > 1.0:
        raise DomainError(f"measure support [{lo}, {hi}] is not contained in [0, 1]")
    diag = matrix_block(q)

    return FawSymbol(
        q=q,
        f1=partial(_quantile_symbol, mu, -1.0),
        f2=partial(_quantile_symbol, mu, 1.0),
        matrix_diag=diag,
        source=mu,
    )


def build_cantor_symbol(mu: Measure, q: float) -> FawSymbol:
    """Symbol of the average (mu + lambda) / 2 with Lebesgue measure on [0, 1]."""
    return build_faw_symbol(mix([0.5, 0.5], [mu, lebesgue()]), q)


def spectral_measure(mu: Measure, q: float) -> Measure:
    """(mu + mu_op + delta_{log q} + delta_{-log q}) / 4, the measure the pair (J, T_mu) encodes."""
    return symmetrize(mu, q)


def default_grid(mu: Measure | None = None, points: int = 1001) -> np.ndarray:
    """
    Uniform grid on [0, 1] (endpoints included) merged with the CDF values of mu at its
    breakpoints, where the quantile function jumps or changes slope.
    """
    if points < 2:
        raise InputValidationError(f"grid needs at least 2 points, got {points}")
    grid = np.linspace(0.0, 1.0, points)
    if mu is not None:
        table = mu.cdf_table
        extra = np.concatenate([table.values, table.left_values])
        grid = np.concatenate([grid, np.clip(extra, 0.0, 1.0)])
    return np.unique(grid)


@dataclass(frozen=True)
class RelationViolation:
    relation: str
    x: float | None
    value: float


@dataclass(frozen=True)
class DomainRelationReport:
    q: float
    points: int
    violations: tuple[RelationViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_domain_relations(
    s: FawSymbol,
    grid: Sequence[float] | np.ndarray,
    tolerance: float = 1e-12,
) -> DomainRelationReport:
    """
    Check at each grid point: f1, f2 in (0, 1) and f1 + f2 = 1 within ``tolerance``;
    check once: matrix_diag entries in (0, 1) summing to 1. Violations are collected,
    never raised.

    Raises:
        InputValidationError: on an empty grid or grid points outside [0, 1]
    """
    xs = np.asarray(grid, dtype=float)
    if xs.size == 0:
        raise InputValidationError("check_domain_relations needs a non-empty grid")
    if np.any((xs < 0.0) | (xs > 1.0)):
        raise InputValidationError("grid points must lie in [0, 1]")

    f1 = np.asarray(s.f1(xs), dtype=float)
    f2 = np.asarray(s.f2(xs), dtype=float)
    violations: list[RelationViolation] = []

    for name, values in (("f1_range", f1), ("f2_range", f2)):
        bad = np.flatnonzero(~((values > 0.0) & (values < 1.0)))
        violations.extend(RelationViolation(name, float(xs[i]), float(values[i])) for i in bad)

    gap = np.abs(f1 + f2 - 1.0)
    for i in np.flatnonzero(gap > tolerance):
        violations.append(RelationViolation("complement", float(xs[i]), float(gap[i])))

    d1, d2 = s.matrix_diag
    for value in (d1, d2):
        if not 0.0 < value < 1.0:
            violations.append(RelationViolation("matrix_range", None, value))
    if abs(math.fsum((d1, d2)) - 1.0) > tolerance:
        violations.append(RelationViolation("matrix_complement", None, math.fsum((d1, d2))))

    report = DomainRelationReport(q=s.q, points=int(xs.size), violations=tuple(violations))
    if report.ok:
        logger.debug("Symbol relations hold", q=s.q, points=report.points)
    else:
        logger.warning(
            "Symbol relations violated",
            q=s.q,
            violations=len(report.violations),
            first=report.violations[0].relation,
        )
    return report


def log_ratio(s: FawSymbol) -> float:
    """log(matrix_diag[0] / matrix_diag[1]); equals -log q for a built symbol."""
    d1, d2 = s.matrix_diag
    return math.log(d1 / d2)


def symbol_table(
    s: FawSymbol,
    grid: Sequence[float] | np.ndarray | None = None,
) -> list[tuple[float, float, float]]:
    """(x, f1(x), f2(x)) rows on ``grid`` (default_grid of the source measure by default)."""
    xs = np.asarray(
        grid if grid is not None else default_grid(s.source, settings.symbol_grid_points),
        dtype=float,
    )
    f1 = np.asarray(s.f1(xs), dtype=float)
    f2 = np.asarray(s.f2(xs), dtype=float)
    return [(float(x), float(a), float(b)) for x, a, b in zip(xs, f1, f2, strict=True)]


def export_symbol(
    s: FawSymbol,
    grid: Sequence[float] | np.ndarray | None = None,
) -> FawSymbolExport:
    """JSON export document of a symbol sampled on ``grid``."""
    d1, d2 = s.matrix_diag
    return FawSymbolExport(
        q=decimal_string(s.q),
        matrix_diag=(decimal_string(d1), decimal_string(d2)),
        j_structure=s.j_structure,
        table=[
            SymbolRow(x=decimal_string(x), f1=decimal_string(a), f2=decimal_string(b))
            for x, a, b in symbol_table(s, grid)
        ],
    )
