"""NumPy reference implementation of the PEXIT probe kernel.

The compiled twin in ``_core`` follows the same arithmetic: forward J
lookups use index math on a uniform sigma grid, inverse lookups use
binary search on the strictly-increasing knot prefix, and every
accumulation runs over rows/columns in ascending order.  Keeping the
operations aligned lets the backends be compared result-for-result.
"""
from __future__ import annotations

import numpy as np


def j_forward(x: np.ndarray, ival: np.ndarray, inv_h: float) -> np.ndarray:
    """Piecewise-linear J on the uniform grid ``sigma_k = k / inv_h``."""
    x = np.asarray(x, dtype=np.float64)
    n = ival.shape[0]
    t = x * inv_h
    k = np.minimum(t.astype(np.int64), n - 2)
    y = ival[k] + (t - k) * (ival[k + 1] - ival[k])
    return np.where(t >= n - 1, ival[n - 1], y)


def j_inverse_sq(
    i: np.ndarray, kn_i: np.ndarray, kn_s: np.ndarray
) -> np.ndarray:
    """Squared inverse of J, clamped to the knot range (no domain errors)."""
    i = np.asarray(i, dtype=np.float64)
    m = kn_i.shape[0]
    k = np.clip(np.searchsorted(kn_i, i, side="right") - 1, 0, m - 2)
    frac = (i - kn_i[k]) / (kn_i[k + 1] - kn_i[k])
    s = kn_s[k] + frac * (kn_s[k + 1] - kn_s[k])
    s = np.clip(s, 0.0, kn_s[m - 1])
    return s * s


def step(
    b: np.ndarray,
    bmask: np.ndarray,
    ch_var: np.ndarray,
    iev: np.ndarray,
    iec: np.ndarray,
    tables: tuple[np.ndarray, float, np.ndarray, np.ndarray],
) -> float:
    """One PEXIT iteration in place; returns the minimum per-column APP MI.

    ``b`` is the (C, V) parallel-edge count matrix, ``bmask`` its boolean
    support, ``ch_var`` the per-column channel-LLR variance (zero on
    punctured columns).  ``iev``/``iec`` are the (C, V) per-edge-type MI
    matrices, zero outside the support.
    """
    ival, inv_h, kn_i, kn_s = tables
    n_chk = b.shape[0]

    # variable -> check
    u = np.where(bmask, j_inverse_sq(iec, kn_i, kn_s), 0.0)
    s_col = ch_var.copy()
    for s in range(n_chk):
        s_col += b[s] * u[s]
    arg = np.maximum(s_col[None, :] - u, 0.0)
    iev[:] = np.where(bmask, j_forward(np.sqrt(arg), ival, inv_h), 0.0)

    # check -> variable
    w = np.where(bmask, j_inverse_sq(1.0 - iev, kn_i, kn_s), 0.0)
    t_row = (b * w).sum(axis=1)
    arg = np.maximum(t_row[:, None] - w, 0.0)
    iec[:] = np.where(bmask, 1.0 - j_forward(np.sqrt(arg), ival, inv_h), 0.0)

    # a-posteriori MI per column
    u = np.where(bmask, j_inverse_sq(iec, kn_i, kn_s), 0.0)
    a_col = ch_var.copy()
    for s in range(n_chk):
        a_col += b[s] * u[s]
    app = j_forward(np.sqrt(a_col), ival, inv_h)
    return float(app.min())


def pexit_probe(
    b: np.ndarray,
    punctured: np.ndarray,
    sigma_ch2: float,
    max_iters: int,
    target: float,
    stall_eps: float,
    ival: np.ndarray,
    inv_h: float,
    kn_i: np.ndarray,
    kn_s: np.ndarray,
) -> tuple[bool, int]:
    """Run PEXIT at fixed channel-LLR variance ``sigma_ch2``.

    Returns ``(converged, iterations_used)``.  A probe whose minimum APP
    MI advances by less than ``stall_eps`` in one iteration exits early as
    non-converged: trajectories are monotone, so progress that slow can
    never bridge the remaining gap within any realistic budget.
    """
    b = np.asarray(b, dtype=np.float64)
    bmask = b > 0
    ch_var = np.where(np.asarray(punctured, dtype=bool), 0.0, float(sigma_ch2))
    iev = np.zeros_like(b)
    iec = np.zeros_like(b)
    tables = (ival, float(inv_h), kn_i, kn_s)

    prev = -np.inf
    for it in range(1, int(max_iters) + 1):
        m = step(b, bmask, ch_var, iev, iec, tables)
        if m >= target:
            return True, it
        if m - prev < stall_eps:
            return False, it
        prev = m
    return False, int(max_iters)
