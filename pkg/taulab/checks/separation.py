"""
Separation of the topologies of a_n = 4^{-n-1} and b = 1/8 at dyadic points, on the
metric side and on the Fourier side.
"""

from taulab.checks.base import BaseInvariantCheck
from taulab.checks.fixtures import witness_family
from taulab.services.product_measures import char_fn_product, constant_seq
from taulab.services.tau_metrics import find_null_dyadic, separation_search

FOURIER_LEVEL = 1.0 - 1e-3


class SeparationCheck(BaseInvariantCheck):
    """
    separation_search finds its first witness at m = 1 for epsilon = 0.1, find_null_dyadic
    first hits m = 4 at epsilon = 0.01, and the product brackets agree: mu_a^(2^m) >= 1 - 1e-3
    for m >= 10 while mu_b^(2^m) <= 1 - 1e-3 for m <= 30.
    """

    def get_name(self) -> str:
        return "separation"

    def get_description(self) -> str:
        return "certified separation of d_a and d_b on the witness pair"

    def evaluate(self, inject_fault: bool) -> tuple[int, list[str], list[str]]:
        a = witness_family()
        b = a if inject_fault else constant_seq(0.125)
        failures: list[str] = []
        notes: list[str] = []

        report = separation_search(a, b, 0.1, m_max=10)
        if report.witness is None or report.witness.m != 1:
            found = report.witness.m if report.witness else None
            failures.append(f"separation witness at m={found}, expected m=1")
        later = separation_search(a, b, 0.1, m_max=10, m_min=2)
        if later.witness is not None:
            notes.append(f"first witness from m=2 on: m={later.witness.m}")

        nulls = find_null_dyadic(a, 0.01, m_max=10)
        first = nulls.hits[0].m if nulls.hits else None
        if first != 4:
            failures.append(f"first null dyadic hit at m={first}, expected m=4")

        cases = 3
        for m in range(31):
            t = float(2**m)
            if m >= 10:
                cases += 1
                value = char_fn_product(a, t)
                if not value.lo >= FOURIER_LEVEL:
                    failures.append(f"mu_a^(2^{m}) not certified >= {FOURIER_LEVEL}: {value}")
            cases += 1
            value = char_fn_product(b, t)
            if not value.hi <= FOURIER_LEVEL:
                failures.append(f"mu_b^(2^{m}) not certified <= {FOURIER_LEVEL}: {value}")
        return cases, failures, notes
