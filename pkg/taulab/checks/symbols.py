"""
Domain relations of the free Araki-Woods parameter symbols.
"""

import math
from dataclasses import replace

from taulab.checks.base import BaseInvariantCheck
from taulab.checks.fixtures import stock_measures
from taulab.config import settings
from taulab.services.faw_params import (
    build_faw_symbol,
    check_domain_relations,
    default_grid,
    log_ratio,
)

Q_VALUES = (0.1, 0.5, 0.9)


class DomainRelationsCheck(BaseInvariantCheck):
    """Built symbols satisfy every relation on their default grid; log-ratio equals -log q."""

    def get_name(self) -> str:
        return "domain_relations"

    def get_description(self) -> str:
        return "T + JTJ = 1 and trivial kernels at the symbol level"

    def evaluate(self, inject_fault: bool) -> tuple[int, list[str], list[str]]:
        failures: list[str] = []
        cases = 0
        for name, mu in stock_measures().items():
            grid = default_grid(mu, settings.symbol_grid_points)
            for q in Q_VALUES:
                cases += 1
                symbol = build_faw_symbol(mu, q)
                if inject_fault:
                    symbol = replace(symbol, f2=symbol.f1)
                report = check_domain_relations(symbol, grid)
                if not report.ok:
                    first = report.violations[0]
                    failures.append(
                        f"{name}, q={q}: {len(report.violations)} violations, "
                        f"first {first.relation} at x={first.x!r}"
                    )
                if abs(log_ratio(symbol) + math.log(q)) > 1e-12:
                    failures.append(f"{name}, q={q}: log ratio {log_ratio(symbol)!r} != -log q")
        return cases, failures, []
