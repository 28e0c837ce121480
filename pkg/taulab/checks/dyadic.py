"""
Dyadic metric series against closed forms, and the two-sided bounds that sandwich it.
"""

import numpy as np

from taulab.checks.base import BaseInvariantCheck
from taulab.checks.fixtures import random_sequence, witness_family
from taulab.services.product_measures import constant_seq
from taulab.services.tau_metrics import d_a, d_a_dyadic_sq, two_sided_bounds

MAX_WIDTH = 1e-10
EQUIVALENCE_TERMS = range(5, 21)


class DyadicSeriesCheck(BaseInvariantCheck):
    """
    d_a(2^m, 0)^2 brackets contain 1/24 for a = 1/8 and 4^{-m-1}/15 for a_n = 4^{-n-1};
    two-sided bounds sandwich the series on seeded random (a, m, n), and the series agrees
    with the general d_a(2^m, 0, truncation=m+N)^2 enclosure for N >= 5.

    The unsquared lower bound a_{m+1}/2 exceeding the series for a = 1/8 is reported as a
    note, not a failure.
    """

    def __init__(self, samples: int = 100, seed: int = 20240601):
        self.samples = samples
        self.seed = seed

    def get_name(self) -> str:
        return "dyadic_series"

    def get_description(self) -> str:
        return "dyadic series closed forms and two-sided bounds"

    def evaluate(self, inject_fault: bool) -> tuple[int, list[str], list[str]]:
        failures: list[str] = []
        notes: list[str] = []
        cases = 0

        constant = constant_seq(0.125)
        witness = witness_family()
        for m in range(11):
            for label, a, expected in (
                ("constant 1/8", constant, 1.0 / 24.0),
                ("4^{-n-1}", witness, 4.0 ** (-m - 1) / 15.0),
            ):
                cases += 1
                if inject_fault:
                    # Closed form of the series with weights 2^{-k} instead of 4^{-k}
                    expected = 0.125 if a is constant else 4.0 ** (-m - 1) / 7.0
                bracket = d_a_dyadic_sq(a, m)
                if not bracket.contains(expected):
                    failures.append(
                        f"{label}, m={m}: {expected!r} outside [{bracket.lo!r}, {bracket.hi!r}]"
                    )
                if bracket.width >= MAX_WIDTH:
                    failures.append(f"{label}, m={m}: width {bracket.width!r} >= {MAX_WIDTH}")

        rng = np.random.default_rng(self.seed)
        for _ in range(self.samples):
            a = random_sequence(rng)
            m = int(rng.integers(0, 11))
            n = int(rng.integers(1, 13))
            cases += 1
            bounds = two_sided_bounds(a, m, n)
            if bounds.lower > bounds.series.hi or bounds.upper < bounds.series.lo:
                failures.append(
                    f"m={m}, n={n}: [{bounds.lower!r}, {bounds.upper!r}] misses "
                    f"[{bounds.series.lo!r}, {bounds.series.hi!r}]"
                )

        for _ in range(self.samples):
            a = random_sequence(rng)
            m = int(rng.integers(0, 11))
            for n in EQUIVALENCE_TERMS:
                cases += 1
                series = d_a_dyadic_sq(a, m, n)
                general = d_a(a, float(2**m), 0.0, truncation=m + n).square()
                if not series.intersects(general):
                    failures.append(f"m={m}, N={n}: series {series} misses general {general}")

        discrepancy = two_sided_bounds(constant, 0, 1)
        if discrepancy.unsquared_lower_exceeds:
            notes.append(
                f"unsquared lower bound a_1/2 = {discrepancy.unsquared_lower!r} exceeds "
                f"d_a(1, 0)^2 <= {discrepancy.series.hi!r} for constant a = 1/8"
            )
        return cases, failures, notes
