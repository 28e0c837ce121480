"""
L1 distance between quantile functions, checked against adaptive quadrature of the CDF gap.
"""

import itertools
import math

import numpy as np
from scipy import integrate

from taulab.checks.base import BaseInvariantCheck
from taulab.checks.fixtures import random_measure, stock_measures
from taulab.services.measures import Measure, cdf, dirac, l1_quantile_distance, lebesgue, mix

TOLERANCE = 1e-9


def cdf_gap_quadrature(mu: Measure, eta: Measure) -> float:
    """Integral of |F_mu - F_eta| by scipy quad, split at the merged breakpoints."""
    points = sorted(
        set(mu.cdf_table.breakpoints.tolist()) | set(eta.cdf_table.breakpoints.tolist())
    )
    total = [
        integrate.quad(lambda x: abs(cdf(mu, x) - cdf(eta, x)), u, v, epsabs=1e-14, limit=200)[0]
        for u, v in zip(points[:-1], points[1:], strict=True)
    ]
    return math.fsum(total)


class DistanceIdentityCheck(BaseInvariantCheck):
    """
    l1_quantile_distance equals the quadrature of |F_mu - F_eta| on all stock pairs and on
    seeded random pairs, and reproduces the exact values 1 for (delta_0, delta_1) and 1/2
    for (lambda, delta_0).
    """

    def __init__(self, random_pairs: int = 50, seed: int = 20240604):
        self.random_pairs = random_pairs
        self.seed = seed

    def get_name(self) -> str:
        return "distance_identity"

    def get_description(self) -> str:
        return "||phi_mu - phi_eta||_1 equals the integral of |F_mu - F_eta|"

    def evaluate(self, inject_fault: bool) -> tuple[int, list[str], list[str]]:
        failures: list[str] = []
        cases = 0

        def distance(mu: Measure, eta: Measure) -> float:
            if inject_fault:
                # Move 1% of eta's mass to its right end before measuring
                eta = mix([0.99, 0.01], [eta, dirac(eta.support_hull[1] + 1.0)])
            return l1_quantile_distance(mu, eta)

        pairs = list(itertools.combinations(stock_measures().items(), 2))
        rng = np.random.default_rng(self.seed)
        for i in range(self.random_pairs):
            mu, eta = random_measure(rng), random_measure(rng)
            pairs.append(((f"random[{i}].mu", mu), (f"random[{i}].eta", eta)))
        for (name_a, mu), (name_b, eta) in pairs:
            cases += 1
            exact = distance(mu, eta)
            oracle = cdf_gap_quadrature(mu, eta)
            if abs(exact - oracle) > TOLERANCE:
                failures.append(f"({name_a}, {name_b}): {exact!r} vs quadrature {oracle!r}")

        for label, (mu, eta), expected in (
            ("(delta_0, delta_1)", (dirac(0.0), dirac(1.0)), 1.0),
            ("(lambda, delta_0)", (lebesgue(), dirac(0.0)), 0.5),
        ):
            cases += 1
            value = distance(mu, eta)
            if abs(value - expected) > 1e-12:
                failures.append(f"{label}: {value!r} != {expected!r}")
        return cases, failures, []
