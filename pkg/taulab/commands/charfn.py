"""
`taulab charfn`: characteristic function over a t-grid.

Parameter sequences give certified product brackets (t, lo, hi); measures give the closed
form (t, re, im). With --samples, a seeded Monte Carlo estimate is appended.
"""

import numpy as np
import structlog

from taulab.commands.common import RunConfig, emit, load_inputs, render_table, require_t_values
from taulab.services.measures import Measure, char_fn, empirical_char_fn, sample
from taulab.services.product_measures import ParamSeq, char_fn_product_many, mu_a_sample

logger = structlog.get_logger()


def _samples(source: Measure | ParamSeq, config: RunConfig) -> np.ndarray:
    if isinstance(source, ParamSeq):
        return mu_a_sample(source, depth=config.depth_d, seed=config.seed, n=config.samples)
    return sample(source, config.seed, config.samples)


def cmd_charfn(config: RunConfig) -> int:
    ts = require_t_values(config)
    (source,) = load_inputs(config, 1)

    if isinstance(source, ParamSeq):
        columns = ["t", "lo", "hi"]
        brackets = char_fn_product_many(source, ts, config.trunc_n)
        rows = [[t, b.lo, b.hi] for t, b in zip(ts, brackets, strict=True)]
    else:
        columns = ["t", "re", "im"]
        values = char_fn(source, np.asarray(ts, dtype=float))
        rows = [[t, v.real, v.imag] for t, v in zip(ts, values, strict=True)]

    if config.samples:
        estimate = empirical_char_fn(_samples(source, config), np.asarray(ts, dtype=float))
        columns += ["empirical_re", "empirical_im"]
        for row, v in zip(rows, estimate, strict=True):
            row.extend([v.real, v.imag])

    logger.info("Evaluated characteristic function", points=len(ts), samples=config.samples)
    emit(config, render_table(config, columns, rows))
    return 0
