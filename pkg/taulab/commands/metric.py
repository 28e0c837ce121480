"""
`taulab metric`: the metric d_a at dyadic points 2^m over an m-range, with both the
squared-series bounds and the unsquared ones; or, given a t-grid, d_a(t, 0) next to the
product bracket of mu_a^(t).
"""

import structlog

from taulab.commands.common import RunConfig, emit, load_inputs, render_table, require_param_seq
from taulab.services.tau_metrics import d_a_dyadic_sq, fourier_metric_profile, two_sided_bounds
from taulab.utils.errors import InputValidationError

logger = structlog.get_logger()

DYADIC_COLUMNS = [
    "m",
    "d_sq_lo",
    "d_sq_hi",
    "d_lo",
    "d_hi",
    "lower",
    "upper",
    "unsquared_lower",
    "unsquared_upper",
    "unsquared_lower_exceeds",
]


def cmd_metric(config: RunConfig) -> int:
    (source,) = load_inputs(config, 1)
    a = require_param_seq(source, "metric input")

    if config.t_values:
        profile = fourier_metric_profile(a, config.t_values, config.trunc_n)
        columns = ["t", "char_fn_lo", "char_fn_hi", "d_lo", "d_hi"]
        rows = [
            [r.t, r.char_fn.lo, r.char_fn.hi, r.distance.lo, r.distance.hi] for r in profile
        ]
        emit(config, render_table(config, columns, rows))
        return 0

    if config.m_max is None:
        raise InputValidationError("metric needs --m-max (or a t-grid)")

    rows = []
    for m in range(config.m_min, config.m_max + 1):
        squared = d_a_dyadic_sq(a, m, config.trunc_n)
        distance = squared.sqrt()
        bounds = two_sided_bounds(a, m, config.bound_n)
        rows.append(
            [
                m,
                squared.lo,
                squared.hi,
                distance.lo,
                distance.hi,
                bounds.lower,
                bounds.upper,
                bounds.unsquared_lower,
                bounds.unsquared_upper,
                bounds.unsquared_lower_exceeds,
            ]
        )

    exceeded = [row[0] for row in rows if row[-1]]
    if exceeded:
        logger.warning(
            "Unsquared lower bound exceeds the series at some m",
            m_values=exceeded[:10],
            count=len(exceeded),
        )
    emit(config, render_table(config, DYADIC_COLUMNS, rows))
    return 0
