import numpy as np
import pytest

from protorelay import kernels
from protorelay.channel import ebno_to_snr, frame_rng, transmit
from protorelay.codec import (
    bp_decode,
    build_graph,
    decode_nested,
    encode,
    encoder_of,
    expand_gauge_syndrome,
    gauge_rows,
    random_codeword,
    relay_parities,
)
from protorelay.gf2 import syndrome_of
from protorelay.lifting import lift_family

NEED_COMPILED = pytest.mark.skipif(
    "compiled" not in kernels.available_backends(),
    reason="compiled extension not built",
)


def _noisy(code, snr_db, seed, frames):
    for f in range(frames):
        rng = frame_rng(seed, f)
        cw = random_codeword(code, rng)
        yield cw, transmit(cw.bits[code.transmitted], snr_db, rng)


def test_graph_matches_matrix(bl12_q25):
    g = build_graph(bl12_q25.h)
    assert g.n_chk == bl12_q25.n_rows and g.n_var == bl12_q25.n_cols
    assert g.chk_ptr[-1] == bl12_q25.h.nnz
    # round trip one check row through the edge arrays
    row = bl12_q25.h.getrow(10)
    cols = g.e_col[g.chk_ptr[10] : g.chk_ptr[11]]
    assert sorted(cols.tolist()) == sorted(row.indices.tolist())


def test_encode_satisfies_every_check(bl12_q25):
    enc = encoder_of(bl12_q25)
    rng = np.random.default_rng(0)
    info = rng.integers(0, 2, size=enc.k).astype(np.uint8)
    cw = encode(bl12_q25, info)
    assert not syndrome_of(bl12_q25.h, cw.bits).any()
    assert np.array_equal(cw.info, info)


def test_clean_frames_decode_immediately(bl12_q25):
    for cw, llr in _noisy(bl12_q25, 12.0, seed=1, frames=5):
        bits, converged, iters = bp_decode(bl12_q25, llr)
        assert converged and iters <= 2
        assert np.array_equal(bits, cw.bits)


def test_moderate_noise_recovers_punctured_bits(bl12_q25):
    snr = ebno_to_snr(2.5, 0.5)
    ok = 0
    for cw, llr in _noisy(bl12_q25, snr, seed=2, frames=40):
        bits, converged, _ = bp_decode(bl12_q25, llr)
        ok += converged and np.array_equal(bits, cw.bits)
    assert ok >= 38  # well above the waterfall


def test_coset_decoding_follows_syndrome(bl12_q25):
    # an arbitrary word is a codeword of the coset defined by its syndrome
    rng = np.random.default_rng(3)
    x = rng.integers(0, 2, size=bl12_q25.n_cols).astype(np.uint8)
    s = syndrome_of(bl12_q25.h, x)
    llr = transmit(x[bl12_q25.transmitted], ebno_to_snr(3.0, 0.5), rng)
    bits, converged, _ = bp_decode(bl12_q25, llr, known_syndrome=s)
    assert converged
    assert np.array_equal(syndrome_of(bl12_q25.h, bits), s)
    assert np.array_equal(bits, x)


def test_decode_validates_lengths(bl12_q25):
    with pytest.raises(ValueError, match="channel LLRs"):
        bp_decode(bl12_q25, np.zeros(3))
    with pytest.raises(ValueError, match="syndrome length"):
        bp_decode(bl12_q25, np.zeros(bl12_q25.n_transmitted),
                  known_syndrome=np.zeros(4, dtype=np.uint8))


@pytest.mark.parametrize("names,info", [
    (("BL-1/2", "BL-2/3", "BL-3/4"), 3 * 96),
    (("BE-3/4", "BE-7/12", "BE-1/3"), 9 * 96),
])
def test_nested_equals_standalone(reg, names, info):
    fam = lift_family([reg[n] for n in names], info_len=info)
    target = names[0] if fam.kind == "lengthened" else names[-1]
    member = fam[target]
    snr = ebno_to_snr(1.8, member.design_info_len / member.n_transmitted)
    for cw, llr in _noisy(member, snr, seed=4, frames=60):
        direct = bp_decode(member, llr)
        nested = decode_nested(fam, target, llr)
        assert np.array_equal(direct[0], nested[0])
        assert direct[1:] == nested[1:]


def test_nested_accepts_rate_lookup(reg):
    fam = lift_family([reg[n] for n in ("BL-1/2", "BL-2/3")], info_len=3 * 96)
    member = fam["BL-1/2"]
    cw, llr = next(_noisy(member, 8.0, seed=5, frames=1))
    by_name = decode_nested(fam, "BL-1/2", llr)
    by_rate = decode_nested(fam, 0.5, llr)
    assert np.array_equal(by_name[0], by_rate[0])


@NEED_COMPILED
def test_backends_agree_exactly(bl12_q25):
    snr = ebno_to_snr(1.6, 0.5)  # noisy enough to exercise long runs
    for cw, llr in _noisy(bl12_q25, snr, seed=6, frames=30):
        a = bp_decode(bl12_q25, llr, backend="numpy")
        b = bp_decode(bl12_q25, llr, backend="compiled")
        assert np.array_equal(a[0], b[0])
        assert a[1:] == b[1:]


def test_gauge_rows_form_permutation(reg):
    # the overlay's single-edge proto row lifts to a permutation block on
    # the punctured column copies
    fam_info = 3 * 96
    fam = lift_family([reg["BL-1/2"], reg["BL-3/4"]], info_len=fam_info)
    c1 = fam["BL-1/2"]
    r0, r1, c0, c1_col = gauge_rows(c1)
    block = c1.h[r0:r1, c0:c1_col].toarray()
    assert block.shape == (c1.factor, c1.factor)
    assert np.all(block.sum(axis=0) == 1) and np.all(block.sum(axis=1) == 1)


def test_relay_parities_round_trip(reg):
    fam = lift_family([reg["BL-1/2"], reg["BL-3/4"]], info_len=3 * 96)
    c1 = fam["BL-1/2"]
    rng = np.random.default_rng(8)
    # payload: the parent code's extension bits, in the overlay's
    # transmitted order
    x = rng.integers(0, 2, size=c1.n_transmitted).astype(np.uint8)
    parities = relay_parities(c1, x)
    assert parities.size == c1.n_rows - c1.factor
    syn = expand_gauge_syndrome(c1, parities)
    r0, r1, _, _ = gauge_rows(c1)
    assert not syn[r0:r1].any()
    # the expanded syndrome names a coset containing a word that matches x
    # on every transmitted position; near-noiseless decoding finds it
    llr = transmit(x, 14.0, rng)
    bits, converged, _ = bp_decode(c1, llr, known_syndrome=syn)
    assert converged
    assert np.array_equal(bits[c1.transmitted], x)
    assert np.array_equal(syndrome_of(c1.h, bits), syn)


def test_expand_gauge_syndrome_validates_length(reg):
    fam = lift_family([reg["BL-1/2"], reg["BL-3/4"]], info_len=3 * 96)
    c1 = fam["BL-1/2"]
    with pytest.raises(ValueError, match="parit"):
        expand_gauge_syndrome(c1, np.zeros(5, dtype=np.uint8))
