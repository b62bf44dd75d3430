"""Compare the compiled and NumPy kernel backends on the two hot loops.

Times the flooding sum-product decoder on a desk-scale rate-1/2 lift in
mid-waterfall noise, and the PEXIT probe on the largest registry
protograph just above its threshold (where probes run long).  Both
backends see identical inputs; the decoder outcomes are cross-checked
bit for bit while timing.

Usage: python3 benchmarks/bench_kernels.py [--frames N] [--probes K]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from protorelay import kernels
from protorelay.channel import ebno_to_snr, frame_rng, transmit
from protorelay.codec import bp_decode, random_codeword
from protorelay.families import builtin_registry
from protorelay.lifting import lift_code
from protorelay.pexit import (
    MAX_PEXIT_ITERS,
    STALL_EPS,
    TARGET_APP_MI,
    _tables,
    llr_channel_variance,
    threshold,
)
from protorelay.protograph import design_rate


def bench_bp(frames: int, backends: tuple[str, ...]) -> None:
    reg = builtin_registry()
    thr = threshold(reg["BL-1/2"]).threshold_db
    for q in (24, 105, 341):
        code = lift_code(reg["BL-1/2"], q, name="BL-1/2")
        snr = ebno_to_snr(thr + 0.7, code.design_info_len / code.n_transmitted)
        trials = []
        for f in range(frames):
            rng = frame_rng(11, f)
            cw = random_codeword(code, rng)
            trials.append(transmit(cw.bits[code.transmitted], snr, rng))

        print(f"BP decode: Q={q} (n={code.n_cols}), "
              f"{frames} frames at threshold+0.7 dB")
        results, times = {}, {}
        for backend in backends:
            start = time.perf_counter()
            outs = [bp_decode(code, llr, backend=backend) for llr in trials]
            times[backend] = time.perf_counter() - start
            results[backend] = outs
            iters = np.mean([o[2] for o in outs])
            print(f"  {backend:>8}: {1e3 * times[backend] / frames:8.2f} "
                  f"ms/frame (avg {iters:.1f} iterations)")
        if len(backends) == 2:
            same = all(
                np.array_equal(a[0], b[0]) and a[1:] == b[1:]
                for a, b in zip(results["numpy"], results["compiled"])
            )
            print(f"  outcomes identical: {same}, "
                  f"speedup {times['numpy'] / times['compiled']:.1f}x")


def bench_pexit(probes: int, backends: tuple[str, ...]) -> None:
    reg = builtin_registry()
    p = reg["BE-1/3"]
    thr = threshold(p).threshold_db
    b = p.entries.astype(np.float64)
    punctured = np.asarray(
        [j in p.punctured for j in range(p.n_vars)], dtype=np.uint8)
    var = llr_channel_variance(design_rate(p), thr + 0.005)
    tables = _tables()

    print(f"PEXIT probe: {p.name} ({p.n_checks}x{p.n_vars}) "
          f"at threshold+0.005 dB, {probes} probes")
    for backend in backends:
        start = time.perf_counter()
        for _ in range(probes):
            conv, iters = kernels.pexit_probe(
                b, punctured, var, MAX_PEXIT_ITERS, TARGET_APP_MI,
                STALL_EPS, *tables, backend=backend)
        elapsed = time.perf_counter() - start
        print(f"  {backend:>8}: {1e3 * elapsed / probes:8.2f} ms/probe "
              f"({iters} iterations, converged={bool(conv)})")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--frames", type=int, default=40)
    ap.add_argument("--probes", type=int, default=50)
    args = ap.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (default {kernels.backend_name()})")
    if "compiled" not in backends:
        print("compiled extension not built; timing the NumPy backend only")
    bench_bp(args.frames, backends)
    bench_pexit(args.probes, backends)


if __name__ == "__main__":
    main()
