import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from protorelay.gf2 import Gf2Encoder, gf2_rank, pack_bits, syndrome_of, unpack_bits


@settings(max_examples=30, derandomize=True)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=300))
def test_pack_unpack_round_trip(bits):
    arr = np.array(bits, dtype=np.uint8)
    assert np.array_equal(unpack_bits(pack_bits(arr), arr.size), arr)


def test_rank_basics():
    assert gf2_rank(sp.identity(5, dtype=np.uint8, format="csr")) == 5
    h = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8)
    assert gf2_rank(sp.csr_matrix(h)) == 2  # rows sum to zero mod 2


@settings(max_examples=25, derandomize=True)
@given(st.integers(0, 2**32 - 1))
def test_syndrome_is_linear(seed):
    rng = np.random.default_rng(seed)
    h = sp.csr_matrix(rng.integers(0, 2, size=(8, 20)).astype(np.uint8))
    x = rng.integers(0, 2, size=20).astype(np.uint8)
    y = rng.integers(0, 2, size=20).astype(np.uint8)
    lhs = syndrome_of(h, (x ^ y))
    rhs = syndrome_of(h, x) ^ syndrome_of(h, y)
    assert np.array_equal(lhs, rhs)


def test_encoder_spans_null_space():
    rng = np.random.default_rng(7)
    h = sp.csr_matrix(rng.integers(0, 2, size=(12, 30)).astype(np.uint8))
    enc = Gf2Encoder(h)
    assert enc.k == 30 - enc.rank
    for _ in range(10):
        info = rng.integers(0, 2, size=enc.k).astype(np.uint8)
        w = enc.encode(info)
        assert not syndrome_of(h, w).any()
        assert np.array_equal(w[enc.info_cols], info)


def test_encoder_handles_rank_deficiency():
    h = sp.csr_matrix(np.array([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1]],
                               dtype=np.uint8))
    enc = Gf2Encoder(h)
    assert enc.rank == 2
    assert enc.k == 2
    w = enc.encode(np.array([1, 1], dtype=np.uint8))
    assert not syndrome_of(h, w).any()


def test_encoder_rejects_wrong_length():
    enc = Gf2Encoder(sp.identity(4, dtype=np.uint8, format="csr"))
    with pytest.raises(ValueError, match="info bits"):
        enc.encode(np.array([1, 0]))


def test_lifted_code_rank_deficit_is_small(bl12_q25):
    # lifted parity matrices carry a handful of dependent rows
    enc = Gf2Encoder(bl12_q25.h)
    assert bl12_q25.n_rows - enc.rank <= 2
    assert enc.k >= bl12_q25.design_info_len
