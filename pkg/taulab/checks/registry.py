"""
Invariant check registry used by `taulab validate`.
"""

import structlog

from taulab.checks.base import BaseInvariantCheck, CheckResult

logger = structlog.get_logger()


class InvariantRegistry:
    """Registry that manages and runs all invariant checks."""

    def __init__(self):
        """Initialize the registry with the built-in checks."""
        self._checks: dict[str, BaseInvariantCheck] = {}
        self._load_checks()

    def _load_checks(self):
        """Register the built-in checks in suite order."""
        from taulab.checks.distance import DistanceIdentityCheck
        from taulab.checks.dyadic import DyadicSeriesCheck
        from taulab.checks.product import ProductBracketCheck
        from taulab.checks.quantile import QuantileGaloisCheck
        from taulab.checks.separation import SeparationCheck
        from taulab.checks.symbols import DomainRelationsCheck

        for check in (
            QuantileGaloisCheck(),
            DistanceIdentityCheck(),
            ProductBracketCheck(),
            DyadicSeriesCheck(),
            SeparationCheck(),
            DomainRelationsCheck(),
        ):
            self.register(check)

    def register(self, check: BaseInvariantCheck):
        """
        Register an invariant check.

        Args:
            check: Check instance
        """
        name = check.get_name()
        if name in self._checks:
            logger.warning("Check already registered, replacing", check=name)
        self._checks[name] = check
        logger.debug("Registered invariant check", check=name)

    def get_check(self, name: str) -> BaseInvariantCheck | None:
        return self._checks.get(name.lower())

    def list_available(self) -> list[str]:
        return list(self._checks.keys())

    def run_all(self, inject_fault: str | None = None) -> list[CheckResult]:
        """
        Run every check in registration order.

        Args:
            inject_fault: Name of a check to run with its fault injected, or None
        """
        if inject_fault is not None and inject_fault not in self._checks:
            raise KeyError(inject_fault)
        return [
            check.run(inject_fault=(name == inject_fault)) for name, check in self._checks.items()
        ]


# Global registry instance
invariant_registry = InvariantRegistry()
