"""
Enclosures of the infinite-product characteristic function against a high-precision
reference truncated three times deeper.
"""

from taulab.checks.base import BaseInvariantCheck
from taulab.checks.fixtures import stock_sequences
from taulab.services.product_measures import (
    ParamSeq,
    char_fn_product,
    char_fn_product_reference,
    param_at,
)

T_VALUES = (0.3, 1.0, 1.7, 3.5, 8.0, 8.25, -5.125, 33.3)
TRUNCATIONS = (20, 30)


def _perturbed(a: ParamSeq) -> ParamSeq:
    """``a`` with a_0 halved."""
    return ParamSeq(prefix=(param_at(a, 0) / 2.0,) + a.prefix[1:], tail=a.tail)


class ProductBracketCheck(BaseInvariantCheck):
    """char_fn_product(a, t, N) contains the 3N-term reference; brackets shrink in N."""

    def get_name(self) -> str:
        return "char_fn_bracket"

    def get_description(self) -> str:
        return "product brackets contain a deeper high-precision product and are nested in N"

    def evaluate(self, inject_fault: bool) -> tuple[int, list[str], list[str]]:
        failures: list[str] = []
        cases = 0
        for name, a in stock_sequences().items():
            oracle_seq = _perturbed(a) if inject_fault else a
            for t in T_VALUES:
                previous = None
                for n in TRUNCATIONS:
                    cases += 1
                    bracket = char_fn_product(a, t, n)
                    reference = char_fn_product_reference(oracle_seq, t, 3 * n)
                    if not bracket.contains(reference):
                        failures.append(
                            f"{name}, t={t}, N={n}: reference {reference!r} outside "
                            f"[{bracket.lo!r}, {bracket.hi!r}]"
                        )
                    if previous is not None and bracket.width > previous.width:
                        failures.append(f"{name}, t={t}: bracket widens from N={n} on")
                    previous = bracket
        return cases, failures, []
