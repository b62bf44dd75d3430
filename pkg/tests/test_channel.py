import numpy as np
import pytest

from protorelay.channel import (
    LLR_CLIP,
    LinkModel,
    SnrSlice,
    ebno_to_snr,
    frame_rng,
    sigma2_of,
    slice_point,
    snr_to_ebno,
    transmit,
)


def test_zero_db_means_unit_noise_variance():
    assert sigma2_of(0.0) == 1.0
    assert sigma2_of(10.0) == pytest.approx(0.1)


def test_snr_ebno_conversions_invert():
    for r in (0.5, 0.75, 1 / 3):
        for x in (-1.0, 0.0, 2.5):
            assert ebno_to_snr(snr_to_ebno(x, r), r) == pytest.approx(x)
    # rate 1/2 makes the two scales coincide (factor 2r = 1)
    assert snr_to_ebno(1.7, 0.5) == pytest.approx(1.7)
    with pytest.raises(ValueError):
        snr_to_ebno(1.0, 0.0)


def test_slice_point_offsets():
    s = SnrSlice(1.4, 1.6)
    assert slice_point(s, 0.8) == pytest.approx((0.8, 2.2, 2.4))


def test_link_model_round_trip():
    link = LinkModel.from_snr_db(6.0)
    assert link.snr_db == pytest.approx(6.0)
    assert link.gain == pytest.approx(10 ** (6.0 / 20))


def test_llr_moments_match_consistent_gaussian():
    # all-zeros word over BPSK: LLR ~ N(2/sigma^2, 4/sigma^2)
    rng = np.random.default_rng(0)
    snr_db = -3.0
    s2 = sigma2_of(snr_db)
    llr = transmit(np.zeros(200_000, dtype=np.uint8), snr_db, rng)
    vals = llr.values
    assert np.mean(vals) == pytest.approx(2 / s2, rel=0.02)
    assert np.var(vals) == pytest.approx(4 / s2, rel=0.02)


def test_transmit_sign_convention():
    rng = np.random.default_rng(1)
    bits = np.array([0, 1] * 1000, dtype=np.uint8)
    vals = transmit(bits, 12.0, rng).values
    assert np.all(vals[0::2] > 0)  # zeros map to +1, positive LLR
    assert np.all(vals[1::2] < 0)


def test_transmit_clips_at_high_snr():
    rng = np.random.default_rng(2)
    vals = transmit(np.zeros(100, dtype=np.uint8), 60.0, rng).values
    assert np.all(vals == LLR_CLIP)


def test_transmit_rejects_nonfinite_snr():
    rng = np.random.default_rng(3)
    with pytest.raises(ValueError):
        transmit(np.zeros(4, dtype=np.uint8), float("nan"), rng)
    with pytest.raises(ValueError):
        transmit(np.zeros(4, dtype=np.uint8), float("inf"), rng)


def test_frame_rng_streams_are_keyed():
    a = frame_rng(1, 0, 5).integers(0, 1 << 30, 8)
    b = frame_rng(1, 0, 5).integers(0, 1 << 30, 8)
    c = frame_rng(1, 0, 6).integers(0, 1 << 30, 8)
    d = frame_rng(2, 0, 5).integers(0, 1 << 30, 8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
