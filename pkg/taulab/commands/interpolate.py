"""
`taulab interpolate`: characteristic functions of the mixtures w * eta0 + (1 - w) * eta1
along a t-sequence, followed by the decay profile of eta1 over frequency bands.
"""

import numpy as np
import structlog

from taulab.commands.common import (
    RunConfig,
    emit,
    load_inputs,
    render_table,
    require_measure,
    require_t_values,
)
from taulab.services.measures import char_fn, decay_profile, mix

logger = structlog.get_logger()

DEFAULT_WEIGHTS = [0.0, 0.25, 0.5, 0.75, 1.0]
DEFAULT_BANDS = [(8.0, 16.0), (64.0, 128.0)]

COLUMNS = ["kind", "w", "t", "band_lo", "band_hi", "re", "im", "value"]


def cmd_interpolate(config: RunConfig) -> int:
    ts = np.asarray(require_t_values(config), dtype=float)
    first, second = load_inputs(config, 2)
    eta0 = require_measure(first, "first input")
    eta1 = require_measure(second, "second input")
    weights = config.weights if config.weights is not None else DEFAULT_WEIGHTS
    bands = config.bands if config.bands is not None else DEFAULT_BANDS

    rows = []
    for w in weights:
        values = char_fn(mix([w, 1.0 - w], [eta0, eta1]), ts)
        rows.extend(
            ["mix", w, float(t), None, None, v.real, v.imag, abs(v)]
            for t, v in zip(ts, values, strict=True)
        )

    profile = decay_profile(eta1, bands)
    rows.extend(
        ["decay", None, None, lo, hi, None, None, sup]
        for (lo, hi), sup in zip(bands, profile, strict=True)
    )

    logger.info("Interpolated characteristic functions", weights=len(weights), points=len(ts))
    emit(config, render_table(config, COLUMNS, rows))
    return 0
