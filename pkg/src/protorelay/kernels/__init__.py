"""Numeric kernel backends.

Two hot loops live here: the PEXIT probe (inner loop of threshold search)
and the flooding sum-product decoder (inner loop of Monte Carlo runs).
Both exist twice: a compiled Cython extension (``_core``) and a NumPy
reference (``_pexit_py``/``_bp_py``).  The compiled backend is selected at
import when it built successfully; setting ``PROTORELAY_PURE_PYTHON=1``
forces the reference backend.  ``benchmarks/bench_kernels.py`` compares
the two.
"""
from __future__ import annotations

import os

import numpy as np

from . import _bp_py, _pexit_py

_FORCED_PURE = os.environ.get("PROTORELAY_PURE_PYTHON", "").strip() not in ("", "0")

try:
    from . import _core  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on build environment
    _core = None

_BACKEND = "numpy" if (_FORCED_PURE or _core is None) else "compiled"


def backend_name() -> str:
    """Name of the backend serving :func:`pexit_probe` and :func:`bp_decode`."""
    return _BACKEND


def available_backends() -> tuple[str, ...]:
    return ("numpy", "compiled") if _core is not None else ("numpy",)


def pexit_probe(b, punctured, sigma_ch2, max_iters, target, stall_eps,
                ival, inv_h, kn_i, kn_s, *, backend: str | None = None):
    """Dispatch a PEXIT probe to the selected (or named) backend."""
    if (backend or _BACKEND) == "compiled":
        return _core.pexit_probe(
            np.ascontiguousarray(b, dtype=np.float64),
            np.ascontiguousarray(punctured, dtype=np.uint8),
            float(sigma_ch2), int(max_iters), float(target), float(stall_eps),
            ival, float(inv_h), kn_i, kn_s,
        )
    return _pexit_py.pexit_probe(
        b, punctured, sigma_ch2, max_iters, target, stall_eps,
        ival, inv_h, kn_i, kn_s,
    )


def bp_decode(graph, llr, syndrome, row_active, col_active, max_iter, clip,
              *, backend: str | None = None):
    """Dispatch a sum-product decode to the selected (or named) backend."""
    if (backend or _BACKEND) == "compiled":
        bits, conv, iters = _core.bp_decode(
            graph.chk_ptr, graph.e_col, graph.var_ptr, graph.var_eids,
            np.ascontiguousarray(llr, dtype=np.float64),
            np.ascontiguousarray(syndrome, dtype=np.uint8),
            np.ascontiguousarray(row_active, dtype=np.uint8),
            np.ascontiguousarray(col_active, dtype=np.uint8),
            int(max_iter), float(clip),
        )
        return bits, bool(conv), int(iters)
    return _bp_py.bp_decode(
        graph, llr, syndrome, row_active, col_active, max_iter, clip
    )
