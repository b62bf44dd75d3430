"""BI-AWGN links, SNR bookkeeping, and the relay sweep geometry.

Convention: ``snr_db`` is received Es/N0 per transmitted BPSK symbol, so
``snr_db = 0`` means unit noise variance; punctured positions consume no
channel uses and no energy.  Eb/N0 conversions always go through the
transmitted rate (information bits per *sent* symbol).  Relay sweeps move
along an affine slice: the source-destination axis is swept while the
source-relay and relay-destination links ride at fixed dB offsets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codec import LLR_CLIP, LlrVector

__all__ = [
    "LinkModel",
    "SnrSlice",
    "sigma2_of",
    "snr_to_ebno",
    "ebno_to_snr",
    "transmit",
    "slice_point",
    "frame_rng",
]


def sigma2_of(snr_db: float) -> float:
    """Noise variance of a link at received SNR ``snr_db`` (unit symbols)."""
    return 10.0 ** (-snr_db / 10.0)


def snr_to_ebno(snr_db: float, transmitted_rate) -> float:
    """Es/N0 → Eb/N0 through the information bits per sent symbol."""
    r = float(transmitted_rate)
    if not 0.0 < r:
        raise ValueError("transmitted rate must be positive")
    return snr_db - 10.0 * math.log10(2.0 * r)


def ebno_to_snr(ebno_db: float, transmitted_rate) -> float:
    r = float(transmitted_rate)
    if not 0.0 < r:
        raise ValueError("transmitted rate must be positive")
    return ebno_db + 10.0 * math.log10(2.0 * r)


@dataclass(frozen=True)
class LinkModel:
    """One point-to-point link: fixed real gain into unit-variance noise.

    ``y = gain * x + n`` with ``n ~ N(0, 1)`` is the same channel as
    ``x + n'`` with ``n' ~ N(0, 1/gain^2)``, so the gain and the received
    SNR carry the same information.
    """

    gain: float

    @property
    def snr_db(self) -> float:
        return 20.0 * math.log10(self.gain)

    @classmethod
    def from_snr_db(cls, snr_db: float) -> "LinkModel":
        return cls(gain=10.0 ** (snr_db / 20.0))


@dataclass(frozen=True)
class SnrSlice:
    """Affine sweep slice: relay links at fixed offsets from the SD axis."""

    alpha_db: float
    beta_db: float
    snr_sd_db: float = 0.0


def slice_point(s: SnrSlice, snr_sd_db: float) -> tuple[float, float, float]:
    """(SNR_SD, SNR_SR, SNR_RD) at one sweep position."""
    return (snr_sd_db, snr_sd_db + s.alpha_db, snr_sd_db + s.beta_db)


def transmit(
    bits: np.ndarray,
    snr_db: float,
    rng: np.random.Generator,
    *,
    clip: float = LLR_CLIP,
) -> LlrVector:
    """BPSK over BI-AWGN at received SNR ``snr_db``; returns channel LLRs.

    Maps 0→+1, 1→−1, adds N(0, σ²) with σ² = 10^(−snr_db/10), and emits
    LLR = 2y/σ² clipped to ±``clip``.
    """
    if not math.isfinite(snr_db):
        raise ValueError("snr_db must be finite")
    bits = np.asarray(bits)
    sigma2 = sigma2_of(snr_db)
    x = 1.0 - 2.0 * bits.astype(np.float64)
    y = x + math.sqrt(sigma2) * rng.standard_normal(bits.shape)
    llr = np.clip(2.0 * y / sigma2, -clip, clip)
    return LlrVector(values=llr)


def frame_rng(seed: int, *indices: int) -> np.random.Generator:
    """Independent per-frame stream: a counter-keyed child of ``seed``.

    Streams depend only on the key tuple, not on how many frames ran
    before, so sweeps parallelize and replay exactly.
    """
    return np.random.default_rng((int(seed),) + tuple(int(i) for i in indices))
