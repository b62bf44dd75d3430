"""Half-duplex decode-and-forward relay sessions over nested code families.

Scheduling is exact rational arithmetic: slot lengths, parity counts and
throughput all come out of parity-bit accounting, and a schedule that
needs a forwarding rate above the registry ladder is rejected.  The
Monte Carlo protocols share one accounting scheme: each link contributes
an error event, the final decode is counted conditionally on clean
inputs (the bound's terms are conditionals), and a separate unconditional
end-to-end counter is kept on the same frames for bound validation.
Frames where the relay fails are still completed with the wrong parities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import codec
from .channel import SnrSlice, slice_point, transmit, frame_rng
from .families import builtin_registry
from .gf2 import syndrome_of
from .lifting import FamilyLift, LiftedCode, lift_code, lift_family

__all__ = [
    "RelaySchedule",
    "TrialLedger",
    "plan_schedule",
    "end_to_end_bound",
    "wilson_interval",
    "simulate_be",
    "simulate_bl",
    "simulate_two_relay",
    "desk_be",
    "desk_bl",
    "desk_two_relay",
    "DESK_FACTOR",
]

#: default desk-scale lift factor; divisible by 12 so every derived code
#: (overlay, forwarding, two-relay layers) lifts at an integer factor.
DESK_FACTOR = 420

_Z95 = 1.959963984540054


def wilson_interval(k: int, n: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for ``k`` successes in ``n`` trials."""
    if n <= 0:
        raise ValueError("need at least one trial")
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        # decimal reading of the literal, so 0.6 means 3/5
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class RelaySchedule:
    """Exact slot/rate accounting of one relay session.

    All entries are rational and internally consistent; ``slot3``/``k_3``
    and the extra rates are populated in two-relay mode only.
    """

    info_len: int
    t: tuple[Fraction, ...]
    r_sr1: Fraction
    r_sd1: Fraction
    r_rd2: Fraction
    slot1_tx: int
    slot2: int
    k_1: int
    k_2: int
    throughput: Fraction
    r_sr2: Fraction | None = None
    r_c1: Fraction | None = None
    r_c2: Fraction | None = None
    slot3: int | None = None
    k_3: int | None = None

    @property
    def mode(self) -> str:
        return "two-relay" if self.k_3 is not None else "single-relay"

    @property
    def total_uses(self) -> int:
        return self.slot1_tx + self.slot2 + (self.slot3 or 0)


_MAX_FORWARD_RATE = max(m.rate for m in builtin_registry().members())


def _exact_div(num, name: str) -> int:
    if num.denominator != 1:
        raise ValueError(f"infeasible schedule: {name} = {num} is not an integer")
    return int(num)


def plan_schedule(info_len: int, *args, t=None) -> RelaySchedule:
    """Derive a relay schedule from rates and the time division.

    Single relay: ``plan_schedule(info, R_SR1, R_SD1, t)``.  Two relays:
    ``plan_schedule(info, R_SR1, R_SR2, R_SD1, t=(t1, t2, t3))``.  Rates
    and fractions are taken as exact rationals (float literals are read
    as decimals).  Raises on non-integer lengths or when a forwarding
    code would need a rate above the registry ladder.
    """
    if t is None:
        if not args:
            raise TypeError("missing time division t")
        *args, t = args
    rates = [_as_fraction(r) for r in args]
    info = Fraction(int(info_len))
    if info <= 0:
        raise ValueError("info_len must be positive")

    if len(rates) == 2:
        r_sr1, r_sd1 = rates
        tt = _as_fraction(t)
        if not 0 < tt < 1:
            raise ValueError("t must lie in (0, 1)")
        if not 0 < r_sd1 <= r_sr1 < 1:
            raise ValueError("need 0 < R_SD1 <= R_SR1 < 1")
        slot1 = _exact_div(info / r_sr1, "slot-1 uses")
        k_1 = slot1 - int(info)
        k_2 = _exact_div(slot1 * (r_sr1 - r_sd1), "k_2")
        if k_2 == 0:
            return RelaySchedule(
                info_len=int(info), t=(tt,), r_sr1=r_sr1, r_sd1=r_sd1,
                r_rd2=Fraction(0), slot1_tx=slot1, slot2=0, k_1=k_1, k_2=0,
                throughput=info / slot1,
            )
        slot2 = _exact_div(slot1 * (1 - tt) / tt, "slot-2 uses")
        r_rd2 = Fraction(k_2, slot2)
        if r_rd2 > _MAX_FORWARD_RATE:
            raise ValueError(
                f"infeasible schedule: forwarding rate {r_rd2} exceeds "
                f"the registry maximum {_MAX_FORWARD_RATE}"
            )
        return RelaySchedule(
            info_len=int(info), t=(tt,), r_sr1=r_sr1, r_sd1=r_sd1,
            r_rd2=r_rd2, slot1_tx=slot1, slot2=slot2, k_1=k_1, k_2=k_2,
            throughput=info / (slot1 + slot2),
        )

    if len(rates) == 3:
        r_sr1, r_sr2, r_sd1 = rates
        ts = tuple(_as_fraction(x) for x in t)
        if len(ts) != 3 or any(x <= 0 for x in ts) or sum(ts) != 1:
            raise ValueError("two-relay t must be three positive fractions summing to 1")
        if not 0 < r_sd1 <= r_sr2 <= r_sr1 < 1:
            raise ValueError("need 0 < R_SD <= R_SR2 <= R_SR1 < 1")
        slot1 = _exact_div(info / r_sr1, "slot-1 uses")
        k_1 = slot1 - int(info)
        k_2 = _exact_div(slot1 * (r_sr1 - r_sr2), "k_2")
        k_3 = _exact_div(slot1 * (r_sr2 - r_sd1), "k_3")
        slot2 = _exact_div(slot1 * ts[1] / ts[0], "slot-2 uses")
        slot3 = _exact_div(slot1 * ts[2] / ts[0], "slot-3 uses")
        r_c1 = Fraction(k_2, slot2) if slot2 else Fraction(0)
        r_c2 = Fraction(k_3, slot3) if slot3 else Fraction(0)
        for nm, r in (("relay-1 forwarding", r_c1), ("relay-2 forwarding", r_c2)):
            if r > _MAX_FORWARD_RATE:
                raise ValueError(
                    f"infeasible schedule: {nm} rate {r} exceeds "
                    f"the registry maximum {_MAX_FORWARD_RATE}"
                )
        return RelaySchedule(
            info_len=int(info), t=ts, r_sr1=r_sr1, r_sd1=r_sd1,
            r_rd2=r_c1, slot1_tx=slot1, slot2=slot2, k_1=k_1, k_2=k_2,
            throughput=info / (slot1 + slot2 + slot3),
            r_sr2=r_sr2, r_c1=r_c1, r_c2=r_c2, slot3=slot3, k_3=k_3,
        )

    raise TypeError("expected 2 rates (single relay) or 3 rates (two relays)")


@dataclass
class TrialLedger:
    """Error-event counters of one simulated operating point.

    ``names`` lists the link components in bound order; the final decode
    event ``e_d_cond`` is counted over ``clean_frames`` (frames where no
    link component fired), matching the conditional term of the union
    bound.  ``end_to_end`` counts message errors unconditionally on the
    same frames.
    """

    scheme: str
    names: tuple[str, ...]
    events: dict[str, int] = field(default_factory=dict)
    frames: int = 0
    clean_frames: int = 0
    e_d_cond: int = 0
    end_to_end: int = 0

    def __post_init__(self) -> None:
        for n in self.names:
            self.events.setdefault(n, 0)

    def count(self, flags: dict[str, bool], final_error: bool | None,
              e2e_error: bool) -> None:
        """Fold one frame in; ``final_error`` is None on dirty frames."""
        self.frames += 1
        for n in self.names:
            self.events[n] += bool(flags[n])
        if not any(flags[n] for n in self.names):
            self.clean_frames += 1
            self.e_d_cond += bool(final_error)
        self.end_to_end += bool(e2e_error)

    def merge(self, other: "TrialLedger") -> "TrialLedger":
        if (self.scheme, self.names) != (other.scheme, other.names):
            raise ValueError("cannot merge ledgers of different schemes")
        return TrialLedger(
            scheme=self.scheme,
            names=self.names,
            events={n: self.events[n] + other.events[n] for n in self.names},
            frames=self.frames + other.frames,
            clean_frames=self.clean_frames + other.clean_frames,
            e_d_cond=self.e_d_cond + other.e_d_cond,
            end_to_end=self.end_to_end + other.end_to_end,
        )

    def rate(self, name: str) -> float:
        if name == "e_d_cond":
            if self.clean_frames == 0:
                raise ValueError("no clean frames: conditional rate undefined")
            return self.e_d_cond / self.clean_frames
        if self.frames == 0:
            raise ValueError("empty ledger")
        return self.events[name] / self.frames

    def interval(self, name: str) -> tuple[float, float]:
        if name == "e_d_cond":
            return wilson_interval(self.e_d_cond, self.clean_frames)
        return wilson_interval(self.events[name], self.frames)

    @property
    def measured_wer(self) -> float:
        if self.frames == 0:
            raise ValueError("empty ledger")
        return self.end_to_end / self.frames

    @property
    def measured_ci(self) -> tuple[float, float]:
        return wilson_interval(self.end_to_end, self.frames)

    def term_names(self) -> tuple[str, ...]:
        return self.names + ("e_d_cond",)


def end_to_end_bound(ledger: TrialLedger) -> tuple[float, tuple[float, float]]:
    """Union bound: sum of link-event rates plus the clean-prior final term.

    Confidence interval by independent-term combination (sum of the
    per-term Wilson bounds).  Raises when any term has an empty
    denominator.
    """
    if ledger.frames == 0:
        raise ValueError("empty ledger")
    if ledger.clean_frames == 0:
        raise ValueError("no clean frames: bound term undefined")
    total = lo = hi = 0.0
    for name in ledger.term_names():
        total += ledger.rate(name)
        l, h = ledger.interval(name)
        lo += l
        hi += h
    return total, (lo, hi)


# -- protocol simulations ----------------------------------------------------


def _check_lengths(schedule: RelaySchedule, source: LiftedCode,
                   forward: LiftedCode, k_2_have: int) -> None:
    if schedule.info_len != source.design_info_len:
        raise ValueError(
            f"schedule/code mismatch: info {schedule.info_len} != "
            f"{source.design_info_len}"
        )
    if schedule.slot1_tx != source.n_transmitted:
        raise ValueError(
            f"schedule/code mismatch: slot-1 uses {schedule.slot1_tx} != "
            f"{source.n_transmitted} transmitted columns"
        )
    if schedule.k_2 != k_2_have:
        raise ValueError(
            f"schedule/code mismatch: k_2 {schedule.k_2} != {k_2_have}"
        )
    if schedule.slot2 != forward.n_transmitted:
        raise ValueError(
            f"schedule/code mismatch: slot-2 uses {schedule.slot2} != "
            f"{forward.n_transmitted}"
        )


def _forward_payload(code: LiftedCode, payload: np.ndarray) -> codec.Codeword:
    """Encode a parity payload, zero-padding into the actual dimension."""
    enc = codec.encoder_of(code)
    info = np.zeros(enc.k, dtype=np.uint8)
    info[: payload.size] = payload
    return codec.encode(code, info)


def _recover_payload(code: LiftedCode, bits: np.ndarray, size: int) -> np.ndarray:
    enc = codec.encoder_of(code)
    return bits[enc.info_cols[:size]]


def simulate_be(
    schedule: RelaySchedule,
    codes: dict,
    snr_slice: SnrSlice,
    snr_sd_db: float,
    frames: int,
    seed: int,
    *,
    genie: frozenset[str] | set[str] = frozenset(),
    max_errors: int | None = None,
    point_index: int = 0,
) -> TrialLedger:
    """Bilayer-expurgated session: relay forwards extra check values.

    ``codes`` carries ``family`` (expurgated chain; the source code is the
    root member, the destination code the extreme member) and ``c_rd2``
    (forwarding code with design info k_2).  The sweep axis and the slice
    offsets are per-link Eb/N0 in dB.  Stops early once the end-to-end
    counter reaches ``max_errors``.
    """
    family: FamilyLift = codes["family"]
    c_rd2: LiftedCode = codes["c_rd2"]
    names = family.names()
    source = family[names[0]]
    final = family.extreme
    f = family.factor
    n_src_rows = source.n_rows
    k_2 = final.n_rows - n_src_rows
    _check_lengths(schedule, source, c_rd2, k_2)
    h_e = final.h[n_src_rows:, :].tocsr()

    ebno_sd, ebno_sr, ebno_rd = slice_point(snr_slice, snr_sd_db)
    snr_sd = float(ebno_sd) + 10 * math.log10(2 * float(source.proto.rate))
    snr_sr = float(ebno_sr) + 10 * math.log10(2 * float(source.proto.rate))
    snr_rd = float(ebno_rd) + 10 * math.log10(2 * float(c_rd2.proto.rate))

    enc_src = codec.encoder_of(source)
    led = TrialLedger(scheme="be", names=("e_r", "e_rd"))
    for fr in range(int(frames)):
        if max_errors is not None and led.end_to_end >= max_errors:
            break
        rng = frame_rng(seed, point_index, fr)
        cw = codec.random_codeword(source, rng)
        tx = cw.bits[source.transmitted]

        if "relay" in genie:
            e_r = False
            x_relay = cw.bits
        else:
            llr_sr = transmit(tx, snr_sr, rng)
            x_relay, _, _ = codec.decode_nested(family, names[0], llr_sr)
            e_r = not np.array_equal(x_relay, cw.bits)
        parities = syndrome_of(h_e, x_relay)

        if "rd" in genie:
            e_rd = False
            p_hat = parities
        else:
            cw_rd = _forward_payload(c_rd2, parities)
            llr_rd = transmit(cw_rd.bits[c_rd2.transmitted], snr_rd, rng)
            bits_rd, _, _ = codec.bp_decode(c_rd2, llr_rd)
            p_hat = _recover_payload(c_rd2, bits_rd, k_2)
            e_rd = not np.array_equal(p_hat, parities)

        llr_sd = transmit(tx, snr_sd, rng)
        syn = np.zeros(final.n_rows, dtype=np.uint8)
        syn[n_src_rows:] = p_hat
        x_hat, _, _ = codec.decode_nested(
            family, family.extreme_name, llr_sd, known_syndrome=syn
        )
        e_d = not np.array_equal(x_hat, cw.bits)
        e2e = not np.array_equal(x_hat[enc_src.info_cols], cw.info)
        led.count({"e_r": e_r, "e_rd": e_rd}, e_d, e2e)
    return led


def simulate_bl(
    schedule: RelaySchedule,
    codes: dict,
    snr_slice: SnrSlice,
    snr_sd_db: float,
    frames: int,
    seed: int,
    *,
    genie: frozenset[str] | set[str] = frozenset(),
    max_errors: int | None = None,
    point_index: int = 0,
) -> TrialLedger:
    """Bilayer-lengthened session: relay forwards an overlay syndrome.

    ``codes`` carries ``family`` (lengthened chain; source = extreme
    member, sub-code = root member), ``c_1`` (overlay code whose
    transmitted length equals the extension length; defaults to the
    family's root member matrix) and ``c_rd2``.  The e_rd event compounds
    the forwarding decode and the destination's overlay decode.
    """
    family: FamilyLift = codes["family"]
    c_rd2: LiftedCode = codes["c_rd2"]
    source = family.extreme
    sub = family[family.names()[0]]
    c_1: LiftedCode = codes.get("c_1") or sub
    n_sub_cols = sub.n_cols
    n_ext = source.n_cols - n_sub_cols
    if c_1.n_transmitted != n_ext:
        raise ValueError(
            f"schedule/code mismatch: overlay transmits {c_1.n_transmitted}, "
            f"extension is {n_ext} bits"
        )
    r0, r1, _, _ = codec.gauge_rows(c_1)
    k_2 = c_1.n_rows - (r1 - r0)
    _check_lengths(schedule, source, c_rd2, k_2)
    h_e = source.h[:, n_sub_cols:].tocsr()
    n_sub_tx = int((source.transmitted < n_sub_cols).sum())

    ebno_sd, ebno_sr, ebno_rd = slice_point(snr_slice, snr_sd_db)
    snr_sd = float(ebno_sd) + 10 * math.log10(2 * float(source.proto.rate))
    snr_sr = float(ebno_sr) + 10 * math.log10(2 * float(source.proto.rate))
    snr_rd = float(ebno_rd) + 10 * math.log10(2 * float(c_rd2.proto.rate))

    enc_src = codec.encoder_of(source)
    led = TrialLedger(scheme="bl", names=("e_r", "e_rd"))
    for fr in range(int(frames)):
        if max_errors is not None and led.end_to_end >= max_errors:
            break
        rng = frame_rng(seed, point_index, fr)
        cw = codec.random_codeword(source, rng)
        tx = cw.bits[source.transmitted]

        if "relay" in genie:
            e_r = False
            x2_relay = cw.bits[n_sub_cols:]
        else:
            llr_sr = transmit(tx, snr_sr, rng)
            x_relay, _, _ = codec.bp_decode(source, llr_sr)
            e_r = not np.array_equal(x_relay, cw.bits)
            x2_relay = x_relay[n_sub_cols:]
        parities = codec.relay_parities(c_1, x2_relay)

        llr_sd = transmit(tx, snr_sd, rng)
        if "rd" in genie:
            e_rd = False
            x2_dest = x2_relay
        else:
            cw_rd = _forward_payload(c_rd2, parities)
            llr_rd = transmit(cw_rd.bits[c_rd2.transmitted], snr_rd, rng)
            bits_rd, _, _ = codec.bp_decode(c_rd2, llr_rd)
            p_hat = _recover_payload(c_rd2, bits_rd, k_2)
            syn_c1 = codec.expand_gauge_syndrome(c_1, p_hat)
            ext_llr = llr_sd.values[n_sub_tx:]
            b_c1, _, _ = codec.bp_decode(c_1, ext_llr, known_syndrome=syn_c1)
            x2_dest = b_c1[c_1.transmitted]
            e_rd = (not np.array_equal(p_hat, parities)) or (
                not np.array_equal(x2_dest, x2_relay)
            )

        syn_sub = syndrome_of(h_e, x2_dest)
        x1_hat, _, _ = codec.decode_nested(
            family, family.names()[0], llr_sd.values[:n_sub_tx],
            known_syndrome=syn_sub,
        )
        x_hat = np.concatenate([x1_hat, x2_dest])
        e_d = not np.array_equal(x_hat, cw.bits)
        e2e = not np.array_equal(x_hat[enc_src.info_cols], cw.info)
        led.count({"e_r": e_r, "e_rd": e_rd}, e_d, e2e)
    return led


def simulate_two_relay(
    schedule: RelaySchedule,
    codes: dict,
    snrs: dict,
    frames: int,
    seed: int,
    *,
    genie: frozenset[str] | set[str] = frozenset(),
    max_errors: int | None = None,
    point_index: int = 0,
) -> TrialLedger:
    """Two-relay line network over a three-layer expurgated family.

    ``codes``: ``family`` (three expurgated members: source root, middle,
    extreme), ``c_1`` (relay-1 forwarding), ``c_2`` (relay-2 forwarding).
    ``snrs``: per-link Eb/N0 in dB under keys ``sd, sr1, sr2, r1r2, r1d,
    r2d``.  Events: relay-1 decode, relay-2 state recovery, destination's
    two forwarding decodes, and the clean-prior final decode.
    """
    family: FamilyLift = codes["family"]
    c_1: LiftedCode = codes["c_1"]
    c_2: LiftedCode = codes["c_2"]
    names = family.names()
    if len(names) != 3:
        raise ValueError("two-relay session needs a three-member family")
    source, middle, bottom = (family[n] for n in names)
    f = family.factor
    k_2 = middle.n_rows - source.n_rows
    k_3 = bottom.n_rows - middle.n_rows
    if schedule.k_3 is None:
        raise ValueError("schedule/code mismatch: need a two-relay schedule")
    if (schedule.info_len, schedule.k_2, schedule.k_3) != (
        source.design_info_len, k_2, k_3
    ):
        raise ValueError("schedule/code mismatch: layer sizes disagree")
    if schedule.slot1_tx != source.n_transmitted:
        raise ValueError("schedule/code mismatch: slot-1 uses")
    if schedule.slot2 != c_1.n_transmitted or schedule.slot3 != c_2.n_transmitted:
        raise ValueError("schedule/code mismatch: forwarding uses")
    h_l2 = bottom.h[source.n_rows : middle.n_rows, :].tocsr()
    h_l3 = bottom.h[middle.n_rows :, :].tocsr()

    def _snr(key: str, code: LiftedCode) -> float:
        return float(snrs[key]) + 10 * math.log10(2 * float(code.proto.rate))

    snr_sd = _snr("sd", source)
    snr_sr1 = _snr("sr1", source)
    snr_sr2 = _snr("sr2", source)
    snr_r1r2 = _snr("r1r2", c_1)
    snr_r1d = _snr("r1d", c_1)
    snr_r2d = _snr("r2d", c_2)

    enc_src = codec.encoder_of(source)
    led = TrialLedger(scheme="two", names=("e_r1", "e_r2", "e_c1d", "e_c2d"))
    for fr in range(int(frames)):
        if max_errors is not None and led.end_to_end >= max_errors:
            break
        rng = frame_rng(seed, point_index, fr)
        cw = codec.random_codeword(source, rng)
        tx = cw.bits[source.transmitted]

        # slot 1: broadcast; relay 1 decodes the top layer
        if "relay1" in genie:
            e_r1 = False
            x_r1 = cw.bits
        else:
            llr_sr1 = transmit(tx, snr_sr1, rng)
            x_r1, _, _ = codec.decode_nested(family, names[0], llr_sr1)
            e_r1 = not np.array_equal(x_r1, cw.bits)
        k2_sent = syndrome_of(h_l2, x_r1)

        # slot 2: relay 1 forwards k_2; relay 2 and destination listen
        cw_c1 = _forward_payload(c_1, k2_sent)
        tx_c1 = cw_c1.bits[c_1.transmitted]

        if "relay2" in genie:
            e_r2 = False
            x_r2 = cw.bits
        else:
            llr_r1r2 = transmit(tx_c1, snr_r1r2, rng)
            b_c1_r2, _, _ = codec.bp_decode(c_1, llr_r1r2)
            k2_at_r2 = _recover_payload(c_1, b_c1_r2, k_2)
            llr_sr2 = transmit(tx, snr_sr2, rng)
            syn_mid = np.zeros(middle.n_rows, dtype=np.uint8)
            syn_mid[source.n_rows :] = k2_at_r2
            x_r2, _, _ = codec.decode_nested(
                family, names[1], llr_sr2, known_syndrome=syn_mid
            )
            e_r2 = not np.array_equal(x_r2, cw.bits)
        k3_sent = syndrome_of(h_l3, x_r2)

        # slot 3: relay 2 forwards k_3; destination decodes everything
        if "c1d" in genie:
            e_c1d = False
            k2_at_d = k2_sent
        else:
            llr_r1d = transmit(tx_c1, snr_r1d, rng)
            b_c1_d, _, _ = codec.bp_decode(c_1, llr_r1d)
            k2_at_d = _recover_payload(c_1, b_c1_d, k_2)
            e_c1d = not np.array_equal(k2_at_d, k2_sent)

        if "c2d" in genie:
            e_c2d = False
            k3_at_d = k3_sent
        else:
            cw_c2 = _forward_payload(c_2, k3_sent)
            llr_r2d = transmit(cw_c2.bits[c_2.transmitted], snr_r2d, rng)
            b_c2_d, _, _ = codec.bp_decode(c_2, llr_r2d)
            k3_at_d = _recover_payload(c_2, b_c2_d, k_3)
            e_c2d = not np.array_equal(k3_at_d, k3_sent)

        llr_sd = transmit(tx, snr_sd, rng)
        syn = np.zeros(bottom.n_rows, dtype=np.uint8)
        syn[source.n_rows : middle.n_rows] = k2_at_d
        syn[middle.n_rows :] = k3_at_d
        x_hat, _, _ = codec.decode_nested(
            family, names[2], llr_sd, known_syndrome=syn
        )
        e_d = not np.array_equal(x_hat, cw.bits)
        e2e = not np.array_equal(x_hat[enc_src.info_cols], cw.info)
        led.count(
            {"e_r1": e_r1, "e_r2": e_r2, "e_c1d": e_c1d, "e_c2d": e_c2d},
            e_d, e2e,
        )
    return led


# -- desk-scale configurations -----------------------------------------------


def desk_be(f: int = DESK_FACTOR, seed: int = 0) -> tuple[RelaySchedule, dict]:
    """Desk-scale bilayer-expurgated session (3/4 source, 1/2 destination)."""
    if f % 12:
        raise ValueError("desk factor must be divisible by 12")
    reg = builtin_registry()
    chain = [reg[n] for n in ("BE-3/4", "BE-2/3", "BE-7/12", "BE-1/2")]
    family = lift_family(chain, info_len=9 * f, seed=seed)
    c_rd2 = lift_code(reg["BL-3/4"], (f // 3) // 4, seed, name="C_RD2")
    sched = plan_schedule(9 * f, Fraction(3, 4), Fraction(1, 2), Fraction(3, 4))
    return sched, {"family": family, "c_rd2": c_rd2}


def desk_bl(f: int = DESK_FACTOR, seed: int = 0) -> tuple[RelaySchedule, dict]:
    """Desk-scale bilayer-lengthened session (3/4 source, 1/2 sub-code)."""
    if f % 12:
        raise ValueError("desk factor must be divisible by 12")
    reg = builtin_registry()
    family = lift_family(
        [reg["BL-1/2"], reg["BL-3/4"]], info_len=9 * f, seed=seed
    )
    c_rd2 = lift_code(reg["BL-3/4"], (f // 3) // 4, seed, name="C_RD2")
    sched = plan_schedule(9 * f, Fraction(3, 4), Fraction(1, 2), Fraction(3, 4))
    return sched, {"family": family, "c_rd2": c_rd2, "c_1": None}


def desk_two_relay(f: int = DESK_FACTOR, seed: int = 0) -> tuple[RelaySchedule, dict]:
    """Desk-scale two-relay session (3/4 → 7/12 → 1/3 layers)."""
    if f % 12:
        raise ValueError("desk factor must be divisible by 12")
    reg = builtin_registry()
    chain = [reg[n] for n in ("BE-3/4", "BE-7/12", "BE-1/3")]
    family = lift_family(chain, info_len=9 * f, seed=seed)
    c_1 = lift_code(reg["BL-1/2"], (2 * f // 3) // 4, seed, name="C_1")
    c_2 = lift_code(reg["BL-3/4"], (f // 3) // 4, seed, name="C_2")
    sched = plan_schedule(
        9 * f, Fraction(3, 4), Fraction(7, 12), Fraction(1, 3),
        t=(Fraction(3, 5), Fraction(1, 5), Fraction(1, 5)),
    )
    return sched, {"family": family, "c_1": c_1, "c_2": c_2}
