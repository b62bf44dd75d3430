"""Bit-packed GF(2) linear algebra for encoding and syndrome work."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

__all__ = ["pack_bits", "unpack_bits", "popcount", "gf2_rank", "Gf2Encoder", "syndrome_of"]


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array (last axis) into uint64 words, LSB first."""
    b = np.asarray(bits, dtype=np.uint8)
    n = b.shape[-1]
    pad = (-n) % 64
    if pad:
        b = np.concatenate(
            [b, np.zeros(b.shape[:-1] + (pad,), dtype=np.uint8)], axis=-1
        )
    b = b.reshape(b.shape[:-1] + (-1, 8))
    packed8 = np.packbits(b, axis=-1, bitorder="little")
    return packed8.reshape(packed8.shape[:-2] + (-1,)).view(np.uint64).copy()


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`, trimming to ``n`` bits."""
    w8 = np.ascontiguousarray(words).view(np.uint8)
    bits = np.unpackbits(w8, axis=-1, bitorder="little")
    return bits[..., :n]


if hasattr(np, "bitwise_count"):
    def popcount(words: np.ndarray) -> np.ndarray:
        return np.bitwise_count(words)
else:  # pragma: no cover - numpy < 2.0
    _POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)

    def popcount(words: np.ndarray) -> np.ndarray:
        w8 = np.ascontiguousarray(words).view(np.uint8)
        return _POP8[w8].reshape(words.shape + (8,)).sum(axis=-1, dtype=np.int64)


def _reduce(h: sp.spmatrix) -> tuple[np.ndarray, list[int], int]:
    """Row-reduce a binary matrix; returns (packed RREF, pivot cols, rank)."""
    h = sp.csr_matrix(h, dtype=np.uint8)
    n_rows, n_cols = h.shape
    m = pack_bits(np.asarray((h.toarray() & 1), dtype=np.uint8))
    pivots: list[int] = []
    r = 0
    for col in range(n_cols):
        if r == n_rows:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(1) << np.uint64(b)
        hits = np.flatnonzero(m[r:, w] & bit)
        if hits.size == 0:
            continue
        pr = r + int(hits[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        rows = (m[:, w] & bit).astype(bool)
        rows[r] = False
        if rows.any():
            m[rows] ^= m[r]
        pivots.append(col)
        r += 1
    return m, pivots, r


def gf2_rank(h: sp.spmatrix | np.ndarray) -> int:
    if not sp.issparse(h):
        h = sp.csr_matrix(np.asarray(h, dtype=np.uint8))
    return _reduce(h)[2]


def syndrome_of(h: sp.spmatrix, bits: np.ndarray) -> np.ndarray:
    """Parity of ``h @ bits`` per check, as uint8."""
    return np.asarray(
        h.astype(np.int64).dot(np.asarray(bits, dtype=np.int64)) & 1, dtype=np.uint8
    )


class Gf2Encoder:
    """Systematic encoder for the null space of a binary parity matrix.

    Gaussian elimination splits columns into pivot and free sets; free
    columns carry the information bits and pivot columns are completed so
    every check is satisfied.  Works for rank-deficient matrices (the
    rank is exposed; the information length is ``n_cols - rank``).
    """

    def __init__(self, h: sp.spmatrix):
        h = sp.csr_matrix(h, dtype=np.uint8)
        self.n_checks, self.n = h.shape
        rref, pivots, rank = _reduce(h)
        self.rank = rank
        self.pivot_cols = np.array(pivots, dtype=np.int64)
        free = np.setdiff1d(np.arange(self.n), self.pivot_cols)
        self.info_cols = free
        self.k = int(free.size)
        dense = unpack_bits(rref[:rank], self.n)
        self._dep = pack_bits(dense[:, free])

    def encode(self, info_bits: np.ndarray) -> np.ndarray:
        """Codeword with ``info_bits`` on the free columns."""
        info = np.asarray(info_bits, dtype=np.uint8).reshape(-1)
        if info.shape[0] != self.k:
            raise ValueError(f"need {self.k} info bits, got {info.shape[0]}")
        packed = pack_bits(info)
        par = popcount(self._dep & packed[None, :]).sum(axis=-1) & 1
        word = np.zeros(self.n, dtype=np.uint8)
        word[self.info_cols] = info
        word[self.pivot_cols] = par.astype(np.uint8)
        return word
