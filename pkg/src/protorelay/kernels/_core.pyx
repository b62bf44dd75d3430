# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: PEXIT probe and flooding sum-product decoder.

Arithmetic mirrors the NumPy reference implementations (_pexit_py, _bp_py):
same interpolation formulas, same accumulation order, same clamps.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport atanh, sqrt, tanh

cnp.import_array()

cdef double ATANH_CLAMP = 1.0 - 1e-15


cdef inline double _fwd(double x, const double[::1] ival, double inv_h) noexcept nogil:
    cdef double t = x * inv_h
    cdef Py_ssize_t n = ival.shape[0]
    cdef Py_ssize_t k
    if t >= n - 1:
        return ival[n - 1]
    k = <Py_ssize_t>t
    if k > n - 2:
        k = n - 2
    return ival[k] + (t - k) * (ival[k + 1] - ival[k])


cdef inline double _inv_sq(double x, const double[::1] kn_i,
                           const double[::1] kn_s) noexcept nogil:
    cdef Py_ssize_t m = kn_i.shape[0]
    cdef Py_ssize_t lo = 0, hi = m, mid
    cdef double frac, s
    while lo < hi:
        mid = (lo + hi) // 2
        if kn_i[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    lo = lo - 1
    if lo < 0:
        lo = 0
    elif lo > m - 2:
        lo = m - 2
    frac = (x - kn_i[lo]) / (kn_i[lo + 1] - kn_i[lo])
    s = kn_s[lo] + frac * (kn_s[lo + 1] - kn_s[lo])
    if s < 0.0:
        s = 0.0
    elif s > kn_s[m - 1]:
        s = kn_s[m - 1]
    return s * s


def pexit_probe(const double[:, ::1] b, const unsigned char[::1] punctured,
                double sigma_ch2, int max_iters, double target,
                double stall_eps, const double[::1] ival, double inv_h,
                const double[::1] kn_i, const double[::1] kn_s):
    """Run PEXIT at fixed channel-LLR variance; returns (converged, iters)."""
    cdef Py_ssize_t n_chk = b.shape[0], n_var = b.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] iev_a = np.zeros((n_chk, n_var))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] iec_a = np.zeros((n_chk, n_var))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] u_a = np.zeros((n_chk, n_var))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] w_a = np.zeros((n_chk, n_var))
    cdef double[:, ::1] iev = iev_a, iec = iec_a, u = u_a, w = w_a
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ch_a = np.empty(n_var)
    cdef double[::1] ch = ch_a
    cdef Py_ssize_t i, j, s
    cdef int it
    cdef double acc, arg, m_app, app, prev = -np.inf

    for j in range(n_var):
        ch[j] = 0.0 if punctured[j] else sigma_ch2

    with nogil:
        for it in range(1, max_iters + 1):
            # variable -> check
            for j in range(n_var):
                acc = ch[j]
                for s in range(n_chk):
                    acc += b[s, j] * u[s, j]
                for i in range(n_chk):
                    if b[i, j] > 0:
                        arg = acc - u[i, j]
                        if arg < 0.0:
                            arg = 0.0
                        iev[i, j] = _fwd(sqrt(arg), ival, inv_h)
                    else:
                        iev[i, j] = 0.0
            # check -> variable
            for i in range(n_chk):
                acc = 0.0
                for j in range(n_var):
                    if b[i, j] > 0:
                        w[i, j] = _inv_sq(1.0 - iev[i, j], kn_i, kn_s)
                    else:
                        w[i, j] = 0.0
                    acc += b[i, j] * w[i, j]
                for j in range(n_var):
                    if b[i, j] > 0:
                        arg = acc - w[i, j]
                        if arg < 0.0:
                            arg = 0.0
                        iec[i, j] = 1.0 - _fwd(sqrt(arg), ival, inv_h)
                        u[i, j] = _inv_sq(iec[i, j], kn_i, kn_s)
                    else:
                        iec[i, j] = 0.0
                        u[i, j] = 0.0
            # a-posteriori MI minimum over columns
            m_app = 2.0
            for j in range(n_var):
                acc = ch[j]
                for s in range(n_chk):
                    acc += b[s, j] * u[s, j]
                app = _fwd(sqrt(acc), ival, inv_h)
                if app < m_app:
                    m_app = app
            if m_app >= target:
                with gil:
                    return True, it
            if m_app - prev < stall_eps:
                with gil:
                    return False, it
            prev = m_app

    return False, max_iters


def bp_decode(const int[::1] chk_ptr, const int[::1] e_col,
              const int[::1] var_ptr, const int[::1] var_eids,
              const double[::1] llr_in, const unsigned char[::1] syndrome,
              const unsigned char[::1] row_active,
              const unsigned char[::1] col_active,
              int max_iter, double clip):
    """Flooding sum-product decode; returns (bits, converged, iterations)."""
    cdef Py_ssize_t n_chk = chk_ptr.shape[0] - 1
    cdef Py_ssize_t n_var = var_ptr.shape[0] - 1
    cdef Py_ssize_t n_edge = e_col.shape[0]
    cdef Py_ssize_t c, v, p, e, d, k, d_max = 0
    cdef int it
    cdef double acc, t, val
    cdef bint all_ok, conv

    for c in range(n_chk):
        if chk_ptr[c + 1] - chk_ptr[c] > d_max:
            d_max = chk_ptr[c + 1] - chk_ptr[c]

    cdef cnp.ndarray[cnp.float64_t, ndim=1] m_c2v_a = np.zeros(n_edge)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m_v2c_a = np.zeros(n_edge)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] th_a = np.zeros(n_edge)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] total_a = np.zeros(n_var)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] llr_a = np.zeros(n_var)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pre_a = np.ones(d_max + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] suf_a = np.ones(d_max + 1)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] bits_a = np.zeros(n_var, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] e_act_a = np.zeros(n_edge, dtype=np.uint8)
    cdef double[::1] m_c2v = m_c2v_a, m_v2c = m_v2c_a, th = th_a
    cdef double[::1] total = total_a, llr = llr_a, pre = pre_a, suf = suf_a
    cdef unsigned char[::1] bits = bits_a, e_act = e_act_a
    cdef unsigned char parity

    for v in range(n_var):
        llr[v] = llr_in[v] if col_active[v] else 0.0
    for c in range(n_chk):
        for p in range(chk_ptr[c], chk_ptr[c + 1]):
            e_act[p] = 1 if (row_active[c] and col_active[e_col[p]]) else 0

    with nogil:
        conv = False
        for it in range(0, max_iter + 1):
            if it > 0:
                # variable -> check (exclusion by subtraction from the total)
                for v in range(n_var):
                    acc = llr[v]
                    for k in range(var_ptr[v], var_ptr[v + 1]):
                        acc += m_c2v[var_eids[k]]
                    total[v] = acc
                for e in range(n_edge):
                    val = total[e_col[e]] - m_c2v[e]
                    if val > clip:
                        val = clip
                    elif val < -clip:
                        val = -clip
                    m_v2c[e] = val
                    th[e] = tanh(0.5 * val) if e_act[e] else 1.0
                # check -> variable (prefix/suffix tanh products, no division)
                for c in range(n_chk):
                    d = chk_ptr[c + 1] - chk_ptr[c]
                    pre[0] = 1.0
                    suf[d] = 1.0
                    for k in range(d):
                        pre[k + 1] = pre[k] * th[chk_ptr[c] + k]
                    for k in range(d - 1, -1, -1):
                        suf[k] = suf[k + 1] * th[chk_ptr[c] + k]
                    for k in range(d):
                        p = chk_ptr[c] + k
                        if e_act[p]:
                            val = pre[k] * suf[k + 1]
                            if syndrome[c]:
                                val = -val
                            if val > ATANH_CLAMP:
                                val = ATANH_CLAMP
                            elif val < -ATANH_CLAMP:
                                val = -ATANH_CLAMP
                            m_c2v[p] = 2.0 * atanh(val)
                        else:
                            m_c2v[p] = 0.0
            # hard decision
            for v in range(n_var):
                acc = llr[v]
                for k in range(var_ptr[v], var_ptr[v + 1]):
                    acc += m_c2v[var_eids[k]]
                bits[v] = 1 if (acc < 0.0 and col_active[v]) else 0
            # parity check against the target syndrome
            all_ok = True
            for c in range(n_chk):
                if not row_active[c]:
                    continue
                parity = 0
                for p in range(chk_ptr[c], chk_ptr[c + 1]):
                    if e_act[p]:
                        parity ^= bits[e_col[p]]
                if parity != syndrome[c]:
                    all_ok = False
                    break
            if all_ok:
                conv = True
                break

    if conv:
        return bits_a, True, it
    return bits_a, False, max_iter
