"""Protograph EXIT (PEXIT) threshold analysis over the BI-AWGN channel.

The channel model is BPSK over AWGN.  All mutual-information bookkeeping
runs through the J function: the MI carried by a consistent Gaussian LLR
message of standard deviation sigma (mean sigma^2/2).  J is tabulated once
by Gauss-Hermite quadrature on a dense uniform sigma grid and evaluated by
piecewise-linear interpolation; the inverse interpolates the same knots in
the other direction, which makes the pair mutually inverse to floating
precision.

Eb/N0 normalization: the design rate over *transmitted* columns converts
per-information-bit SNR to per-symbol SNR, so a punctured protograph is
charged only for the symbols it actually sends.  At Eb/N0 = x dB the
channel LLR variance on transmitted columns is ``8 * rate * 10**(x/10)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .kernels import _pexit_py
from .protograph import ProtoMatrix, design_rate

__all__ = [
    "PexitState",
    "ThresholdResult",
    "j_function",
    "j_inverse",
    "pexit_converges",
    "pexit_init",
    "pexit_step",
    "threshold",
    "biawgn_capacity_db",
    "llr_channel_variance",
]

#: Every column's APP MI must reach this value for a probe to converge.
TARGET_APP_MI = 1.0 - 1e-6
#: Iteration budget per probe.
MAX_PEXIT_ITERS = 1000
#: Early exit: minimum APP-MI progress per iteration below this is a stall.
STALL_EPS = 1e-12

_GRID_STEP = 5e-4
_GRID_MAX_SIGMA = 18.0
_QUAD_NODES = 128


@lru_cache(maxsize=1)
def _tables() -> tuple[np.ndarray, float, np.ndarray, np.ndarray]:
    """(forward values, 1/step, inverse MI knots, inverse sigma knots)."""
    n = int(round(_GRID_MAX_SIGMA / _GRID_STEP)) + 1
    sig = _GRID_STEP * np.arange(n)
    x, w = np.polynomial.hermite.hermgauss(_QUAD_NODES)
    ival = np.empty(n)
    chunk = 4096
    for lo in range(0, n, chunk):
        s = sig[lo : lo + chunk, None]
        llr = 0.5 * s * s + np.sqrt(2.0) * s * x[None, :]
        # E[log2(1 + exp(-L))] for L ~ N(sigma^2/2, sigma^2)
        ent = np.logaddexp(0.0, -llr) @ w / (np.sqrt(np.pi) * np.log(2.0))
        ival[lo : lo + chunk] = 1.0 - ent
    ival = np.minimum(np.maximum.accumulate(np.maximum(ival, 0.0)), 1.0)
    ival[0] = 0.0
    increasing = np.flatnonzero(np.diff(ival) <= 0)
    m = int(increasing[0]) + 1 if increasing.size else n
    for a in (ival, sig):
        a.setflags(write=False)
    return ival, 1.0 / _GRID_STEP, ival[:m], sig[:m]


def j_function(sigma):
    """MI of a consistent Gaussian LLR message with std deviation ``sigma``.

    Accepts scalars or arrays; strictly increasing with J(0) = 0 and
    J(sigma) -> 1 as sigma grows.  Raises ``ValueError`` on negative input.
    """
    s = np.asarray(sigma, dtype=np.float64)
    if np.any(s < 0):
        raise ValueError("sigma must be >= 0")
    ival, inv_h, _, _ = _tables()
    out = _pexit_py.j_forward(s, ival, inv_h)
    return float(out) if np.isscalar(sigma) or s.ndim == 0 else out


def j_inverse(i):
    """Inverse of :func:`j_function` on MI values in ``[0, 1)``.

    Raises ``ValueError`` at 1 (infinite scale) or outside the domain.
    """
    v = np.asarray(i, dtype=np.float64)
    if np.any(v < 0) or np.any(v >= 1):
        raise ValueError("MI must lie in [0, 1)")
    _, _, kn_i, kn_s = _tables()
    out = np.sqrt(_pexit_py.j_inverse_sq(v, kn_i, kn_s))
    return float(out) if np.isscalar(i) or v.ndim == 0 else out


def llr_channel_variance(rate: Fraction | float, ebno_db: float) -> float:
    """Channel-LLR variance on a transmitted column at the given Eb/N0."""
    return 8.0 * float(rate) * 10.0 ** (ebno_db / 10.0)


@dataclass(frozen=True)
class PexitState:
    """Per-edge-type MI state of a PEXIT evolution.

    ``iev``/``iec`` are (C, V) variable-to-check / check-to-variable
    extrinsic MI matrices, zero wherever the proto-matrix has no edge;
    ``ich`` is the per-column channel MI, zero on punctured columns.
    """

    iev: np.ndarray
    iec: np.ndarray
    ich: np.ndarray


def _channel_variance_vector(p: ProtoMatrix, ebno_db: float) -> np.ndarray:
    var = llr_channel_variance(design_rate(p), ebno_db)
    ch = np.full(p.n_vars, var)
    ch[list(p.punctured)] = 0.0
    return ch


def pexit_init(p: ProtoMatrix, ebno_db: float) -> PexitState:
    """Fresh state: no extrinsic information, channel MI on transmitted columns."""
    shape = (p.n_checks, p.n_vars)
    ich = j_function(np.sqrt(_channel_variance_vector(p, ebno_db)))
    return PexitState(np.zeros(shape), np.zeros(shape), ich)


def pexit_step(p: ProtoMatrix, state: PexitState, ebno_db: float) -> PexitState:
    """One PEXIT iteration as a pure function (reference path for analysis)."""
    b = p.entries.astype(np.float64)
    ival, inv_h, kn_i, kn_s = _tables()
    iev = state.iev.copy()
    iec = state.iec.copy()
    _pexit_py.step(
        b,
        b > 0,
        _channel_variance_vector(p, ebno_db),
        iev,
        iec,
        (ival, inv_h, kn_i, kn_s),
    )
    return PexitState(iev, iec, state.ich)


def pexit_converges(
    p: ProtoMatrix,
    ebno_db: float,
    max_iters: int = MAX_PEXIT_ITERS,
    *,
    target: float = TARGET_APP_MI,
) -> tuple[bool, int]:
    """Whether every column's APP MI reaches ``target`` within ``max_iters``.

    Returns ``(converged, iterations_used)``.
    """
    ival, inv_h, kn_i, kn_s = _tables()
    conv, iters = kernels.pexit_probe(
        p.entries.astype(np.float64),
        np.asarray([j in p.punctured for j in range(p.n_vars)], dtype=np.uint8),
        llr_channel_variance(design_rate(p), ebno_db),
        max_iters,
        target,
        STALL_EPS,
        ival,
        inv_h,
        kn_i,
        kn_s,
    )
    return bool(conv), int(iters)


@dataclass(frozen=True)
class ThresholdResult:
    """Decoding threshold of a protograph with its capacity reference."""

    threshold_db: float
    capacity_db: float
    gap_db: float
    iterations_at_threshold: int


def threshold(
    p: ProtoMatrix,
    *,
    resolution_db: float = 0.005,
    max_iters: int = MAX_PEXIT_ITERS,
    bracket_step_db: float = 0.5,
    bracket_limit_db: float = 15.0,
    target: float = TARGET_APP_MI,
) -> ThresholdResult:
    """Iterative-decoding threshold in Eb/N0 by bracketing and bisection.

    The bracket starts at the capacity limit for the code's design rate
    and expands upward in ``bracket_step_db`` steps until a converging
    point is found; bisection then narrows to ``resolution_db``.  Raises
    ``ValueError`` when nothing converges within ``bracket_limit_db`` of
    capacity (malformed code).
    """
    capacity_db = biawgn_capacity_db(design_rate(p))
    trace: list[tuple[float, bool]] = []

    def probe(x: float) -> tuple[bool, int]:
        conv, iters = pexit_converges(p, x, max_iters, target=target)
        trace.append((x, conv))
        return conv, iters

    lo = capacity_db
    hi = lo + bracket_step_db
    conv, hi_iters = probe(hi)
    while not conv:
        lo = hi
        hi = hi + bracket_step_db
        if hi - capacity_db > bracket_limit_db:
            raise ValueError(
                f"no PEXIT convergence within {bracket_limit_db} dB of capacity"
            )
        conv, hi_iters = probe(hi)

    while hi - lo > resolution_db:
        mid = 0.5 * (lo + hi)
        conv, iters = probe(mid)
        if conv:
            hi, hi_iters = mid, iters
        else:
            lo = mid

    failing = [x for x, c in trace if not c]
    passing = [x for x, c in trace if c]
    if failing and passing and max(failing) >= min(passing):
        raise RuntimeError("non-monotone PEXIT probe trace")

    return ThresholdResult(
        threshold_db=hi,
        capacity_db=capacity_db,
        gap_db=hi - capacity_db,
        iterations_at_threshold=hi_iters,
    )


def biawgn_capacity_db(rate: Fraction | float) -> float:
    """Eb/N0 (dB) at which BI-AWGN capacity equals ``rate``.

    Raises ``ValueError`` for rates outside (0, 1).
    """
    r = float(rate)
    if not (0.0 < r < 1.0):
        raise ValueError(f"rate must lie in (0, 1), got {rate}")

    def gap(ebno_db: float) -> float:
        return j_function(np.sqrt(llr_channel_variance(r, ebno_db))) - r

    return float(brentq(gap, -30.0, 30.0, xtol=1e-9))
