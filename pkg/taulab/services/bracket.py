"""
Rigorous enclosures of real values.

A Bracket [lo, hi] is certified to contain an exactly defined real number. Brackets are
produced by truncating a series or product, bounding the tail in closed form and padding
the partial result by a relative float slack (``settings.slack`` per accumulation step).
"""

import math
from dataclasses import dataclass

from taulab.config import settings
from taulab.utils.errors import UndecidedError


@dataclass(frozen=True)
class Bracket:
    """Closed interval [lo, hi] containing a mathematical real value."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"Bracket requires lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def intersects(self, other: "Bracket") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def distance_to(self, value: complex) -> float:
        """Distance from a complex number to the real segment [lo, hi]."""
        re = value.real if isinstance(value, complex) else float(value)
        im = value.imag if isinstance(value, complex) else 0.0
        gap = max(self.lo - re, 0.0, re - self.hi)
        return math.hypot(gap, im)

    def sqrt(self) -> "Bracket":
        """Enclosure of the square root of a non-negative bracketed value."""
        lo = math.sqrt(max(self.lo, 0.0))
        hi = math.sqrt(max(self.hi, 0.0))
        # sqrt is correctly rounded; one ulp outward keeps the enclosure rigorous
        return Bracket(
            math.nextafter(lo, 0.0) if lo > 0.0 else 0.0,
            math.nextafter(hi, math.inf) if hi > 0.0 else 0.0,
        )

    def square(self) -> "Bracket":
        """Enclosure of the square of a non-negative bracketed value."""
        lo, hi = max(self.lo, 0.0), max(self.hi, 0.0)
        pad = 2.0 * settings.slack
        return Bracket(lo * lo * (1.0 - pad), hi * hi * (1.0 + pad))

    def below(self, threshold: float) -> bool:
        """
        Certified comparison bracket < threshold.

        Raises:
            UndecidedError: if threshold lies inside the bracket
        """
        if self.hi < threshold:
            return True
        if self.lo > threshold:
            return False
        raise UndecidedError(
            "Threshold inside bracket",
            threshold=threshold,
            lo=self.lo,
            hi=self.hi,
        )


def pad_factor(steps: int) -> float:
    """Relative pad for a partial sum or product accumulated over ``steps`` operations."""
    return settings.slack * max(steps, 1)


def padded(lower: float, upper: float, steps: int) -> Bracket:
    """
    Widen a non-negative [lower, upper] estimate by the float pad for ``steps`` operations.
    Zero endpoints stay exact.
    """
    pad = pad_factor(steps)
    return Bracket(max(lower * (1.0 - pad), 0.0), upper * (1.0 + pad))
