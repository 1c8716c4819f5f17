"""Hot basis-weight kernels: vectorized generalized-Poisson weight blocks.

These two block fills sit under every operator evaluation.  They are
numpy/scipy-vectorized; a Cython variant (scalar libm loop with an
incremental compensated log-factorial) was benchmarked at 0.9-1.0x of this
implementation on representative workloads, so no compiled path is shipped.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln


def jain_log_weights(nx: float, beta: float, v0: int, count: int) -> np.ndarray:
    """Log generalized-Poisson weights log w(v) for v = v0 .. v0+count-1.

    w(v) = nx * (nx + v*beta)^(v-1) * exp(-(nx + v*beta)) / v!,  nx > 0.
    """
    v = np.arange(v0, v0 + count, dtype=np.float64)
    m = nx + v * beta
    out = np.log(nx) + (v - 1.0) * np.log(m) - m - gammaln(v + 1.0)
    if v0 == 0:
        out[0] = -nx
    return out


def jain_weights(nx: float, beta: float, v0: int, count: int) -> np.ndarray:
    """exp of :func:`jain_log_weights`."""
    return np.exp(jain_log_weights(nx, beta, v0, count))
