"""NumPy reference implementation of the flooding sum-product decoder.

Check-node products use padded prefix/suffix cumulative products, never
division, so exact-zero LLRs (erasures) pass through correctly.  The
compiled twin in ``_core`` applies the same update order and clamps.
"""
from __future__ import annotations

import numpy as np

#: tanh-domain product magnitude cap before atanh.
ATANH_CLAMP = 1.0 - 1e-15


def bp_decode(
    graph,
    llr: np.ndarray,
    syndrome: np.ndarray,
    row_active: np.ndarray,
    col_active: np.ndarray,
    max_iter: int,
    clip: float,
) -> tuple[np.ndarray, bool, int]:
    """Sum-product decode; returns ``(hard_bits, converged, iterations)``.

    ``syndrome`` gives the target parity per check (coset decoding);
    inactive rows send nothing and are not required to be satisfied;
    inactive columns are treated as known zeros.
    """
    e_col = graph.e_col
    pad_edge = graph.pad_edge
    pad_valid = graph.pad_valid

    col_ok = col_active.astype(bool)
    row_ok = row_active.astype(bool)
    e_active = col_ok[e_col] & row_ok[graph.e_row]
    pad_live = pad_valid & e_active[np.where(pad_valid, pad_edge, 0)]
    sign = np.where(syndrome.astype(bool), -1.0, 1.0)

    llr = np.where(col_ok, llr, 0.0)
    m_c2v = np.zeros(e_col.shape[0])

    def hard_bits() -> np.ndarray:
        app = llr + np.bincount(e_col, weights=m_c2v, minlength=graph.n_var)
        bits = (app < 0).astype(np.uint8)
        bits[~col_ok] = 0
        return bits

    def satisfied(bits: np.ndarray) -> bool:
        if graph.chk_ptr[-1] == 0:
            return True
        parity = np.bitwise_xor.reduceat(
            bits[e_col] & e_active, graph.chk_ptr[:-1]
        )
        parity[np.diff(graph.chk_ptr) == 0] = 0
        ok = (parity == syndrome) | ~row_ok
        return bool(ok.all())

    bits = hard_bits()
    if satisfied(bits):
        return bits, True, 0

    for it in range(1, int(max_iter) + 1):
        total = llr + np.bincount(e_col, weights=m_c2v, minlength=graph.n_var)
        m_v2c = np.clip(total[e_col] - m_c2v, -clip, clip)

        t = np.ones(pad_edge.shape)
        t[pad_live] = np.tanh(0.5 * m_v2c[pad_edge[pad_live]])
        pre = np.cumprod(t, axis=1)
        suf = np.cumprod(t[:, ::-1], axis=1)[:, ::-1]
        excl = np.ones_like(t)
        excl[:, 1:] *= pre[:, :-1]
        excl[:, :-1] *= suf[:, 1:]
        excl = np.clip(excl * sign[:, None], -ATANH_CLAMP, ATANH_CLAMP)
        vals = 2.0 * np.arctanh(excl)

        m_c2v = np.zeros_like(m_c2v)
        m_c2v[pad_edge[pad_live]] = vals[pad_live]

        bits = hard_bits()
        if satisfied(bits):
            return bits, True, it

    return bits, False, int(max_iter)
