"""Encoding and belief-propagation decoding of lifted codes.

The decoder operates on a flat edge list in check-major (CSR) order; the
same graph serves a whole nested family because rows and columns can be
deactivated per call.  Deactivated columns are treated as known zeros and
deactivated rows send nothing, which reproduces the standalone sub-code
decoder message-for-message.  Coset decoding (nonzero target syndrome)
covers the relay protocols, where known extension bits are folded into
the syndrome instead of the channel values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import kernels
from .gf2 import Gf2Encoder, syndrome_of
from .lifting import FamilyLift, LiftedCode

__all__ = [
    "LLR_CLIP",
    "MAX_BP_ITERS",
    "DecoderGraph",
    "Codeword",
    "LlrVector",
    "build_graph",
    "graph_of",
    "encoder_of",
    "encode",
    "random_codeword",
    "bp_decode",
    "decode_nested",
    "relay_parities",
    "gauge_rows",
    "expand_gauge_syndrome",
]

#: default magnitude cap for LLR totals inside the decoder.
LLR_CLIP = 30.0
#: default iteration budget of every Monte Carlo decode.
MAX_BP_ITERS = 200


@dataclass(eq=False)
class DecoderGraph:
    """Flat Tanner-graph arrays shared by both decoder backends.

    Edges are numbered in CSR order (grouped by check).  ``var_ptr`` /
    ``var_eids`` regroup the same edge ids by variable, ascending within
    each variable; ``pad_edge`` / ``pad_valid`` give the checks' edges as
    a padded rectangle for the vectorized reference backend.
    """

    n_chk: int
    n_var: int
    chk_ptr: np.ndarray
    e_col: np.ndarray
    e_row: np.ndarray
    var_ptr: np.ndarray
    var_eids: np.ndarray
    pad_edge: np.ndarray
    pad_valid: np.ndarray
    d_max: int


@dataclass
class Codeword:
    """``bits`` over every variable node; ``info`` is the systematic part."""

    bits: np.ndarray
    info: np.ndarray


@dataclass
class LlrVector:
    """Channel LLRs aligned to a code's transmitted-column order.

    Erasures are exact zeros; the decoder never divides by a tanh so they
    stay neutral.
    """

    values: np.ndarray

    def __len__(self) -> int:
        return int(self.values.size)


def build_graph(h: sp.spmatrix) -> DecoderGraph:
    csr = sp.csr_matrix(h, dtype=np.uint8)
    csr.sum_duplicates()
    n_chk, n_var = csr.shape
    chk_ptr = csr.indptr.astype(np.int32)
    e_col = csr.indices.astype(np.int32)
    e_row = np.repeat(
        np.arange(n_chk, dtype=np.int32), np.diff(csr.indptr)
    )
    order = np.argsort(e_col, kind="stable").astype(np.int32)
    var_ptr = np.zeros(n_var + 1, dtype=np.int32)
    np.cumsum(np.bincount(e_col, minlength=n_var), out=var_ptr[1:])
    deg = np.diff(chk_ptr)
    d_max = int(deg.max()) if deg.size else 0
    pad_valid = np.arange(d_max)[None, :] < deg[:, None]
    pad_edge = np.zeros((n_chk, d_max), dtype=np.int64)
    pad_edge[pad_valid] = np.arange(e_col.size)
    return DecoderGraph(
        n_chk=n_chk,
        n_var=n_var,
        chk_ptr=chk_ptr,
        e_col=e_col,
        e_row=e_row,
        var_ptr=var_ptr.astype(np.int32),
        var_eids=order,
        pad_edge=pad_edge,
        pad_valid=pad_valid,
        d_max=d_max,
    )


def graph_of(code: LiftedCode) -> DecoderGraph:
    """Decoder graph of ``code``, built once and cached on the object."""
    g = getattr(code, "_graph", None)
    if g is None:
        g = build_graph(code.h)
        code._graph = g
    return g


def encoder_of(code: LiftedCode) -> Gf2Encoder:
    """Systematic encoder of ``code``, built once and cached on the object."""
    enc = getattr(code, "_encoder", None)
    if enc is None:
        enc = Gf2Encoder(code.h)
        code._encoder = enc
    return enc


def encode(code: LiftedCode, info_bits: np.ndarray) -> Codeword:
    """Codeword carrying ``info_bits``; length must match the actual rank.

    The information length is ``n_cols - rank(h)``; lifted matrices can be
    slightly rank-deficient, in which case the encoder's ``k`` is the
    authoritative value.
    """
    enc = encoder_of(code)
    bits = enc.encode(info_bits)
    return Codeword(bits=bits, info=np.asarray(info_bits, dtype=np.uint8))


def random_codeword(code: LiftedCode, rng: np.random.Generator) -> Codeword:
    enc = encoder_of(code)
    return encode(code, rng.integers(0, 2, size=enc.k, dtype=np.uint8))


def _llr_values(llrs) -> np.ndarray:
    vals = llrs.values if isinstance(llrs, LlrVector) else llrs
    return np.asarray(vals, dtype=np.float64)


def bp_decode(
    code: LiftedCode,
    llrs,
    known_syndrome: np.ndarray | None = None,
    max_iter: int = MAX_BP_ITERS,
    *,
    clip: float = LLR_CLIP,
    backend: str | None = None,
) -> tuple[np.ndarray, bool, int]:
    """Flooding sum-product decode; ``(bits, converged, iterations)``.

    ``llrs`` is aligned to ``code.transmitted``; punctured positions start
    at LLR zero.  ``known_syndrome`` selects the coset to decode into
    (default all-zeros, i.e. plain codewords).  Hard decisions are checked
    before the first update, so noiseless input converges in at most two
    iterations and typically zero.
    """
    g = graph_of(code)
    vals = _llr_values(llrs)
    if vals.size != code.transmitted.size:
        raise ValueError(
            f"need {code.transmitted.size} channel LLRs, got {vals.size}"
        )
    llr_full = np.zeros(g.n_var, dtype=np.float64)
    llr_full[code.transmitted] = np.clip(vals, -clip, clip)
    if known_syndrome is None:
        syndrome = np.zeros(g.n_chk, dtype=np.uint8)
    else:
        syndrome = np.asarray(known_syndrome, dtype=np.uint8)
        if syndrome.size != g.n_chk:
            raise ValueError(
                f"syndrome length {syndrome.size} != {g.n_chk} checks"
            )
    ones_r = np.ones(g.n_chk, dtype=np.uint8)
    ones_c = np.ones(g.n_var, dtype=np.uint8)
    return kernels.bp_decode(
        g, llr_full, syndrome, ones_r, ones_c, max_iter, clip, backend=backend
    )


def decode_nested(
    family: FamilyLift,
    member,
    llrs,
    known_syndrome: np.ndarray | None = None,
    max_iter: int = MAX_BP_ITERS,
    *,
    clip: float = LLR_CLIP,
    backend: str | None = None,
) -> tuple[np.ndarray, bool, int]:
    """Decode one family member on the shared extreme-member graph.

    ``member`` is a name or a design rate.  Columns the member does not
    have are deactivated (known zeros); rows it does not have are
    deactivated (no messages, parity not required).  The result is
    message-for-message identical to decoding the standalone sub-matrix;
    returned bits cover the member's own columns.
    """
    if isinstance(member, str):
        code = family[member]
    else:
        code = family.member_by_rate(member)
    ext = family.extreme
    g = graph_of(ext)

    vals = _llr_values(llrs)
    if vals.size != code.transmitted.size:
        raise ValueError(
            f"need {code.transmitted.size} channel LLRs, got {vals.size}"
        )
    llr_full = np.zeros(g.n_var, dtype=np.float64)
    llr_full[code.transmitted] = np.clip(vals, -clip, clip)

    col_active = np.zeros(g.n_var, dtype=np.uint8)
    col_active[: code.n_cols] = 1
    row_active = np.zeros(g.n_chk, dtype=np.uint8)
    row_active[: code.n_rows] = 1

    syndrome = np.zeros(g.n_chk, dtype=np.uint8)
    if known_syndrome is not None:
        ks = np.asarray(known_syndrome, dtype=np.uint8)
        if ks.size != code.n_rows:
            raise ValueError(
                f"syndrome length {ks.size} != member's {code.n_rows} checks"
            )
        syndrome[: code.n_rows] = ks

    bits, conv, iters = kernels.bp_decode(
        g, llr_full, syndrome, row_active, col_active, max_iter, clip,
        backend=backend,
    )
    return bits[: code.n_cols], conv, iters


def gauge_rows(code: LiftedCode) -> tuple[int, int, int, int]:
    """Row and column span of the gauge block used for syndrome shortening.

    For a code with one punctured proto column, the proto row with a
    single edge into that column lifts to a permutation block.  Returns
    ``(row_start, row_stop, col_start, col_stop)`` in lifted indices.
    """
    p = code.proto
    if len(p.punctured) != 1:
        raise ValueError("gauge shortening needs exactly one punctured column")
    pc = p.punctured[0]
    hits = np.flatnonzero(p.entries[:, pc] == 1)
    if hits.size == 0:
        raise ValueError("no proto row meets the punctured column exactly once")
    r = int(hits[0])
    f = code.factor
    return r * f, (r + 1) * f, pc * f, (pc + 1) * f


def relay_parities(extension, bits: np.ndarray) -> np.ndarray:
    """Parity payload the relay forwards for one decoded frame.

    With a sparse matrix ``extension`` (the expurgation rows), this is the
    plain syndrome of ``bits`` under those rows.  With a :class:`LiftedCode`
    (the overlay code of a lengthened scheme), ``bits`` are the extension
    bits in transmitted order; the overlay's punctured bits are chosen so
    the gauge block's checks vanish, and the remaining checks' syndrome is
    returned.  Either way the destination can reconstruct a full coset
    target from the payload alone.
    """
    if sp.issparse(extension):
        return syndrome_of(extension, bits)
    if not isinstance(extension, LiftedCode):
        raise TypeError("extension must be a sparse block or a LiftedCode")
    code = extension
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size != code.transmitted.size:
        raise ValueError(
            f"need {code.transmitted.size} extension bits, got {bits.size}"
        )
    r0, r1, c0, c1 = gauge_rows(code)
    x = np.zeros(code.n_cols, dtype=np.uint8)
    x[code.transmitted] = bits
    rhs = syndrome_of(code.h[r0:r1, :], x)
    block = code.h[r0:r1, c0:c1].tocsr()
    cols = block.indices  # one entry per row: a permutation
    punct = np.zeros(r1 - r0, dtype=np.uint8)
    punct[cols] = rhs
    x[c0:c1] = punct
    full = syndrome_of(code.h, x)
    keep = np.ones(code.n_rows, dtype=bool)
    keep[r0:r1] = False
    return full[keep]


def expand_gauge_syndrome(code: LiftedCode, parities: np.ndarray) -> np.ndarray:
    """Full-length coset target from a shortened parity payload.

    Inverse of the packing done by :func:`relay_parities` for an overlay
    code: gauge rows are zero by construction, the rest carry ``parities``
    in ascending row order.
    """
    r0, r1, _, _ = gauge_rows(code)
    parities = np.asarray(parities, dtype=np.uint8)
    if parities.size != code.n_rows - (r1 - r0):
        raise ValueError(
            f"need {code.n_rows - (r1 - r0)} parities, got {parities.size}"
        )
    syndrome = np.zeros(code.n_rows, dtype=np.uint8)
    keep = np.ones(code.n_rows, dtype=bool)
    keep[r0:r1] = False
    syndrome[keep] = parities
    return syndrome
