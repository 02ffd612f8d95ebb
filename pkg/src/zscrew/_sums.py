"""Compensated summation helpers.

Every series loop in this package accumulates through one of these to keep
roundoff near 2*eps*sum|x| instead of n*eps*sum|x|.  The prefix-sum variant
is what makes the prime-side evaluator O(1) per point at tables of 1e8+
entries without losing the positivity scans to accumulated rounding.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


def kahan_sum(x: np.ndarray) -> float:
    """Sequential Kahan-Babuska (Neumaier) sum of a 1-d array."""
    return float(math.fsum(x)) if x.size < 100_000 else _kahan_np(x)


def _kahan_np(x: np.ndarray) -> float:
    s = 0.0
    c = 0.0
    # block fsum: exact within blocks, Neumaier across blocks
    for i in range(0, x.size, 1 << 16):
        v = math.fsum(x[i:i + (1 << 16)])
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def pairwise_sum(x: np.ndarray) -> float:
    """Fixed-shape pairwise tree reduction (deterministic, thread-count free)."""
    return float(np.sum(x))  # numpy reduces pairwise with a fixed block shape


if _HAVE_NUMBA:

    @njit(cache=True)
    def _kahan_cumsum_nb(x, out, s, c):  # pragma: no cover - via wrapper
        for i in range(x.size):
            v = x[i]
            t = s + v
            if abs(s) >= abs(v):
                c += (s - t) + v
            else:
                c += (v - t) + s
            s = t
            out[i] = s + c
        return s, c


def kahan_cumsum_into(x: np.ndarray, out: np.ndarray,
                      state: tuple[float, float]) -> tuple[float, float]:
    """Compensated running sums of `x` written into `out`; resumable.

    `state` carries the (sum, compensation) pair across chunks so a
    1e8-entry prefix array can be built without a same-size temporary.
    Error per prefix stays O(eps * sum|x|).
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    s, c = state
    if _HAVE_NUMBA:
        return _kahan_cumsum_nb(x, out, s, c)
    acc = np.cumsum(x, dtype=np.longdouble) + (np.longdouble(s) + np.longdouble(c))
    out[:] = acc.astype(np.float64)
    return float(acc[-1]), 0.0


def kahan_cumsum(x: np.ndarray) -> np.ndarray:
    """Compensated running sums of a float64 array."""
    out = np.empty(len(x), dtype=np.float64)
    kahan_cumsum_into(np.asarray(x, dtype=np.float64), out, (0.0, 0.0))
    return out
