"""
Stock fixtures shared by the invariant checks and the test suite.
"""

import numpy as np

from taulab.services.measures import (
    Measure,
    dirac,
    from_density,
    lebesgue,
    make_measure,
    mix,
    uniform,
)
from taulab.services.product_measures import (
    ParamSeq,
    TailRule,
    constant_seq,
    geometric_seq,
    power_seq,
)


def witness_family() -> ParamSeq:
    """a_n = 4^{-n-1} for n >= 1 (a_0 = 1/8, since 4^{-1} is not inside (0, 1/4))."""
    return ParamSeq(prefix=(0.125,), tail=TailRule("geometric", 0.25, r=0.25))


def stock_measures() -> dict[str, Measure]:
    """Named measures on [0, 1] covering atoms, pieces, overlaps and a refined density."""
    return {
        "lebesgue": lebesgue(),
        "dirac_half": dirac(0.5),
        "atom_and_piece": mix([0.5, 0.5], [dirac(0.25), uniform(0.5, 1.0)]),
        "three_atoms": make_measure(atoms=[(0.1, 0.2), (0.4, 0.3), (0.9, 0.5)]),
        "overlapping_pieces": make_measure(pieces=[(0.0, 0.6, 0.5), (0.3, 1.0, 0.5)]),
        "beta_2_2": from_density(lambda x: 6.0 * x * (1.0 - x), 0.0, 1.0, 32),
    }


def stock_sequences() -> dict[str, ParamSeq]:
    return {
        "constant_eighth": constant_seq(0.125),
        "constant_tenth": constant_seq(0.1),
        "witness_family": witness_family(),
        "power_decay": power_seq(0.2, 2.0),
        "geometric_half": geometric_seq(0.2, 0.5),
    }


def random_measure(rng: np.random.Generator, lo: float = 0.0, hi: float = 1.0) -> Measure:
    """Up to three atoms and up to three pieces inside [lo, hi] with random weights."""
    n_atoms = int(rng.integers(0, 4))
    n_pieces = int(rng.integers(0 if n_atoms else 1, 4))
    weights = rng.dirichlet(np.ones(n_atoms + n_pieces))

    locations = rng.uniform(lo, hi, n_atoms)
    atoms = [(float(x), float(w)) for x, w in zip(locations, weights[:n_atoms], strict=True)]
    pieces = []
    for w in weights[n_atoms:]:
        a = rng.uniform(lo, hi - 1e-3)
        b = rng.uniform(a + 1e-3, hi)
        pieces.append((float(a), float(b), float(w)))
    return make_measure(atoms, pieces, tolerance=1e-9)


def random_sequence(rng: np.random.Generator, prefix_length: int = 60) -> ParamSeq:
    """Random prefix inside (0.001, 0.249) followed by a random constant tail."""
    prefix = tuple(float(v) for v in rng.uniform(0.001, 0.249, prefix_length))
    return ParamSeq(prefix=prefix, tail=TailRule("constant", float(rng.uniform(0.001, 0.249))))
