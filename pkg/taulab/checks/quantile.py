"""
Quantile/CDF Galois connection and monotonicity of the quantile function.
"""

import numpy as np

from taulab.checks.base import BaseInvariantCheck
from taulab.checks.fixtures import random_measure, stock_measures
from taulab.services.measures import Measure, cdf, quantile

# A quantile shifted down by this much in level is the injected fault
FAULT_SHIFT = 0.01


class QuantileGaloisCheck(BaseInvariantCheck):
    """
    For y in (0, 1]: cdf(quantile(y)) >= y, and every breakpoint x < quantile(y) has
    cdf(x) < y. quantile must also be non-decreasing in y. Runs on the stock measures and on
    seeded random measures.
    """

    def __init__(self, levels: int = 1000, random_measures: int = 50, seed: int = 20240603):
        self.levels = levels
        self.random_measures = random_measures
        self.seed = seed

    def get_name(self) -> str:
        return "quantile_galois"

    def get_description(self) -> str:
        return "quantile is the generalized inverse of the CDF and is non-decreasing"

    def evaluate(self, inject_fault: bool) -> tuple[int, list[str], list[str]]:
        def phi(mu: Measure, y: float) -> float:
            if inject_fault:
                return quantile(mu, max(y - FAULT_SHIFT, 0.0))
            return quantile(mu, y)

        ys = np.linspace(0.0, 1.0, self.levels + 1)[1:]
        failures: list[str] = []
        cases = 0
        rng = np.random.default_rng(self.seed)
        measures = stock_measures()
        for i in range(self.random_measures):
            measures[f"random[{i}]"] = random_measure(rng)
        for name, mu in measures.items():
            breakpoints = mu.cdf_table.breakpoints
            previous = -np.inf
            for y in ys:
                y = float(y)
                x = phi(mu, y)
                cases += 1
                if cdf(mu, x) < y:
                    failures.append(f"{name}: cdf(quantile({y!r})) = {cdf(mu, x)!r} < y")
                below = breakpoints[breakpoints < x]
                if below.size and cdf(mu, float(below[-1])) >= y:
                    failures.append(f"{name}: breakpoint {below[-1]!r} < quantile({y!r}) reaches y")
                if x < previous:
                    failures.append(f"{name}: quantile decreases at y={y!r}")
                previous = x
        return cases, failures, []
