"""Batch experiment runner tying the library together.

Subcommands: ``threshold`` (registry threshold table), ``search``
(extension search), ``lift`` (build and save a lifted code), ``p2p``
(point-to-point BER/WER sweep), ``relay`` (end-to-end relay sweep), and
``report`` (summarize previously emitted CSVs).

Output is CSV with ``#``-prefixed provenance lines (tool version and the
exact command) and self-describing columns, so any row can be regenerated
from its own metadata.  Headers carry no timestamps: re-running an
identical command reproduces the output byte for byte.  Floats are
written with shortest round-trip ``repr``.

Sweeps parallelize across grid points (``--jobs``); per-frame RNG streams
are keyed ``(seed, point_index, frame_index)``, so row contents do not
depend on scheduling and the CSV body is identical for any job count.
Stochastic commands (``p2p``, ``relay``) require an explicit ``--seed``.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import shlex
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .channel import SnrSlice, frame_rng, snr_to_ebno, ebno_to_snr, transmit
from .codec import MAX_BP_ITERS, bp_decode, encoder_of, random_codeword
from .families import BE_NAMES, BL_NAMES, builtin_registry
from .lifting import lift_code, save_code
from .pexit import biawgn_capacity_db, threshold
from .protograph import design_rate, from_text
from .relay import (
    DESK_FACTOR,
    desk_be,
    desk_bl,
    desk_two_relay,
    end_to_end_bound,
    simulate_be,
    simulate_bl,
    simulate_two_relay,
    wilson_interval,
)
from .search import SearchSpec, search_best

DEFAULT_STOP_ERRORS = 100


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved parameters of one runner invocation.

    ``params`` holds the command-specific knobs; the config is echoed
    into the CSV provenance header, which is what makes rows
    regenerable.  Sweep grids must be strictly increasing and stochastic
    commands must carry a seed (argparse enforces the latter).
    """

    command: str
    argv: tuple[str, ...]
    seed: int | None = None
    out: Path | None = None
    jobs: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise ValueError("--jobs must be >= 1")
        grid = self.params.get("grid")
        if grid is not None:
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError("sweep grid must be strictly increasing")

    def header_lines(self) -> list[str]:
        lines = [
            f"# protorelay {__version__}",
            f"# cmd: protorelay {shlex.join(self.argv)}",
        ]
        for key, value in sorted(self.params.items()):
            if value is not None:
                lines.append(f"# {key}: {value}")
        if self.seed is not None:
            lines.append(f"# seed: {self.seed}")
        return lines


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_csv(config: ExperimentConfig, columns: list[str], rows: list[dict]) -> str:
    """Render rows to CSV text and write it to ``--out`` or stdout."""
    lines = config.header_lines()
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row.get(c, "")) for c in columns))
    text = "\n".join(lines) + "\n"
    if config.out is not None:
        config.out.write_text(text)
    else:
        sys.stdout.write(text)
    return text


def _float_grid(spec: str) -> list[float]:
    if spec.strip() == "":
        return []
    return [float(tok) for tok in spec.split(",")]


# ---------------------------------------------------------------------------
# threshold


def _resolve_selection(selection: str | None):
    """Registry members (all by default), a comma list of names, or a file."""
    reg = builtin_registry()
    if selection is None:
        return list(reg.members())
    if selection.strip() == "":
        return []
    path = Path(selection)
    if path.is_file():
        return [from_text(path.read_text(), name=path.stem)]
    return [reg[name.strip()] for name in selection.split(",")]


def run_threshold_table(config: ExperimentConfig) -> list[dict]:
    """Threshold/capacity/gap rows for the selected protographs.

    A protograph whose threshold bracket fails contributes a row with an
    error status instead of aborting the table.
    """
    rows = []
    for p in _resolve_selection(config.params.get("selection")):
        family = "BL" if p.name in BL_NAMES else "BE" if p.name in BE_NAMES else "file"
        row = {
            "name": p.name,
            "rate": design_rate(p),
            "capacity_db": biawgn_capacity_db(design_rate(p)),
            "family": family,
            "n_checks": p.n_checks,
            "n_vars": p.n_vars,
            "status": "ok",
        }
        try:
            res = threshold(p)
            row["threshold_db"] = res.threshold_db
            row["gap_db"] = res.gap_db
        except ValueError as exc:
            row["status"] = f"error: {exc}".replace(",", ";")
        rows.append(row)
    return rows


THRESHOLD_COLUMNS = [
    "name", "rate", "threshold_db", "capacity_db", "gap_db",
    "family", "n_checks", "n_vars", "status",
]


# ---------------------------------------------------------------------------
# search


def run_search(config: ExperimentConfig) -> list[dict]:
    reg = builtin_registry()
    parent = reg[config.params["parent"]]
    kind = config.params["kind"]
    pin = config.params.get("pin")
    bounds = None
    if pin is not None:
        bounds = tuple((v,) for v in pin)
    spec = SearchSpec(parent, kind, entry_bounds=bounds, beam=config.params.get("beam"))
    ranked = search_best(spec, prefilter_offset_db=config.params.get("prefilter_db"))
    rows = []
    for rank, (ext, thr_db) in enumerate(ranked[: config.params["top"]], start=1):
        child = spec.apply(ext)
        cap = biawgn_capacity_db(design_rate(child))
        rows.append({
            "rank": rank,
            "threshold_db": thr_db,
            "extension": " ".join(str(v) for v in ext.ravel()),
            "parent": parent.name,
            "kind": kind,
            "child_rate": design_rate(child),
            "capacity_db": cap,
            "gap_db": thr_db - cap,
        })
    return rows


SEARCH_COLUMNS = [
    "rank", "threshold_db", "extension",
    "parent", "kind", "child_rate", "capacity_db", "gap_db",
]


# ---------------------------------------------------------------------------
# lift


def run_lift(config: ExperimentConfig) -> list[dict]:
    reg = builtin_registry()
    p = reg[config.params["proto"]]
    code = lift_code(p, config.params["q"], seed=config.seed or 0, name=p.name)
    if config.params.get("save") is not None:
        save_code(code, config.params["save"])
    return [{
        "name": code.name,
        "n_rows": code.n_rows,
        "n_cols": code.n_cols,
        "n_transmitted": code.n_transmitted,
        "info_len": code.design_info_len,
        "q": code.q,
        "factor": code.factor,
        "girth": code.girth,
        "lift_seed": code.seed,
    }]


LIFT_COLUMNS = [
    "name", "n_rows", "n_cols", "n_transmitted", "info_len",
    "q", "factor", "girth", "lift_seed",
]


# ---------------------------------------------------------------------------
# p2p


def p2p_point(
    code,
    snr_db: float,
    frames: int,
    seed: int,
    point_index: int = 0,
    stop_errors: int = DEFAULT_STOP_ERRORS,
    max_iter: int = MAX_BP_ITERS,
) -> dict:
    """Monte Carlo BER/WER at one received-SNR point.

    Stops after ``stop_errors`` word errors or the frame budget.  BER
    counts message-bit errors (the encoder's information positions);
    WER counts whole-codeword mismatches with a Wilson 95% interval.
    """
    enc = encoder_of(code)
    info = enc.info_cols[: enc.k]
    word_errors = 0
    bit_errors = 0
    iters_total = 0
    run = 0
    for f in range(frames):
        rng = frame_rng(seed, point_index, f)
        cw = random_codeword(code, rng)
        llrs = transmit(cw.bits[code.transmitted], snr_db, rng)
        bits, _, iters = bp_decode(code, llrs, max_iter=max_iter)
        run += 1
        iters_total += iters
        if not np.array_equal(bits, cw.bits):
            word_errors += 1
            bit_errors += int(np.count_nonzero(bits[info] != cw.bits[info]))
        if word_errors >= stop_errors:
            break
    lo, hi = wilson_interval(word_errors, run) if run else (0.0, 1.0)
    r_tx = code.design_info_len / code.n_transmitted
    return {
        "snr_db": snr_db,
        "ber": bit_errors / (run * enc.k) if run else 0.0,
        "wer": word_errors / run if run else 0.0,
        "avg_iters": iters_total / run if run else 0.0,
        "ci_lo": lo,
        "ci_hi": hi,
        "ebno_db": snr_to_ebno(snr_db, r_tx),
        "frames_run": run,
        "word_errors": word_errors,
        "bit_errors": bit_errors,
        "seed": seed,
        "point_index": point_index,
    }


def _p2p_worker(task):
    code, snr_db, frames, seed, point_index, stop_errors, max_iter = task
    return p2p_point(code, snr_db, frames, seed, point_index, stop_errors, max_iter)


def run_p2p_sweep(config: ExperimentConfig) -> list[dict]:
    p = config.params
    reg = builtin_registry()
    code = lift_code(reg[p["code"]], p["q"], seed=p["lift_seed"], name=p["code"])
    if p["ebno_grid"]:
        r_tx = code.design_info_len / code.n_transmitted
        grid = [ebno_to_snr(x, r_tx) for x in p["ebno_grid"]]
    else:
        grid = p["grid"]
    if p["frames"] == 0 or not grid:
        print("warning: empty sweep (zero frames or empty grid)", file=sys.stderr)
        return []
    encoder_of(code)  # build once, share with workers
    tasks = [
        (code, snr, p["frames"], config.seed, i, p["stop_errors"], p["max_iter"])
        for i, snr in enumerate(grid)
    ]
    rows = list(_map_tasks(_p2p_worker, tasks, config.jobs))
    meta = {
        "code": code.name, "q": code.q, "factor": code.factor,
        "n_cols": code.n_cols, "n_transmitted": code.n_transmitted,
        "info_len": code.design_info_len, "lift_seed": code.seed,
        "stop_errors": p["stop_errors"], "max_iter": p["max_iter"],
        "frame_budget": p["frames"],
    }
    for row in rows:
        row.update(meta)
    return rows


P2P_COLUMNS = [
    "snr_db", "ber", "wer", "avg_iters", "ci_lo", "ci_hi",
    "ebno_db", "frames_run", "word_errors", "bit_errors",
    "code", "q", "factor", "n_cols", "n_transmitted", "info_len",
    "lift_seed", "seed", "stop_errors", "max_iter", "frame_budget",
    "point_index",
]


# ---------------------------------------------------------------------------
# relay


def _relay_worker(task):
    scheme, schedule, codes, slice_, snr_sd, frames, seed, index, stop = task
    if scheme == "be":
        led = simulate_be(schedule, codes, slice_, snr_sd, frames, seed,
                          max_errors=stop, point_index=index)
    elif scheme == "bl":
        led = simulate_bl(schedule, codes, slice_, snr_sd, frames, seed,
                          max_errors=stop, point_index=index)
    else:
        snrs = {
            "sd": snr_sd,
            "sr1": snr_sd + slice_.alpha_db,
            "sr2": snr_sd + slice_.alpha_db,
            "r1r2": snr_sd + slice_.alpha_db,
            "r1d": snr_sd + slice_.beta_db,
            "r2d": snr_sd + slice_.beta_db,
        }
        led = simulate_two_relay(schedule, codes, snrs, frames, seed,
                                 max_errors=stop, point_index=index)
    return snr_sd, led


def _ledger_row(scheme: str, snr_sd: float, led) -> dict:
    """Pinned relay CSV columns from a finished ledger.

    For the two-relay scheme ``p_er`` sums both relay-decode components
    and ``p_erd`` both forwarded-link components, so
    ``bound == p_er + p_erd + p_ed_cond`` holds for every scheme; the
    individual component rates ride along in the extra columns.
    """
    bound, (lo, hi) = end_to_end_bound(led)
    if scheme == "two":
        p_er = led.rate("e_r1") + led.rate("e_r2")
        p_erd = led.rate("e_c1d") + led.rate("e_c2d")
    else:
        p_er = led.rate("e_r")
        p_erd = led.rate("e_rd")
    mlo, mhi = led.measured_ci
    row = {
        "snr_sd_db": snr_sd,
        "p_er": p_er,
        "p_erd": p_erd,
        "p_ed_cond": led.rate("e_d_cond"),
        "bound": bound,
        "measured_wer": led.measured_wer,
        "ci_lo": mlo,
        "ci_hi": mhi,
        "frames_run": led.frames,
        "clean_frames": led.clean_frames,
        "bound_ci_lo": lo,
        "bound_ci_hi": hi,
        "scheme": led.scheme,
        "components": " ".join(led.names),
    }
    for name in led.names:
        row[f"n_{name}"] = led.events[name]
    row["n_e_d_cond"] = led.e_d_cond
    return row


def run_relay_sweep(config: ExperimentConfig) -> list[dict]:
    p = config.params
    factor, seed0 = p["factor"], p["lift_seed"]
    if p["scheme"] == "be":
        schedule, codes = desk_be(factor, seed0)
    elif p["scheme"] == "bl":
        schedule, codes = desk_bl(factor, seed0)
    else:
        schedule, codes = desk_two_relay(factor, seed0)
    slice_ = SnrSlice(p["alpha"], p["beta"])
    if p["frames"] == 0 or not p["grid"]:
        print("warning: empty sweep (zero frames or empty grid)", file=sys.stderr)
        return []
    tasks = [
        (p["scheme"], schedule, codes, slice_, snr_sd, p["frames"],
         config.seed, i, p["stop_errors"])
        for i, snr_sd in enumerate(p["grid"])
    ]
    rows = []
    for snr_sd, led in _map_tasks(_relay_worker, tasks, config.jobs):
        row = _ledger_row(p["scheme"], snr_sd, led)
        row.update({
            "alpha_db": p["alpha"], "beta_db": p["beta"],
            "info_len": schedule.info_len, "k_2": schedule.k_2,
            "throughput": float(schedule.throughput),
            "factor": factor, "lift_seed": seed0, "seed": config.seed,
            "stop_errors": p["stop_errors"], "frame_budget": p["frames"],
        })
        rows.append(row)
    return rows


RELAY_COLUMNS_PINNED = ["snr_sd_db", "p_er", "p_erd", "p_ed_cond",
                        "bound", "measured_wer", "ci_lo", "ci_hi"]


def _relay_columns(rows: list[dict]) -> list[str]:
    pinned = RELAY_COLUMNS_PINNED
    extras = [c for c in rows[0] if c not in pinned] if rows else [
        "scheme", "codes", "frames_run"]
    return pinned + extras


def _map_tasks(worker, tasks, jobs: int):
    if jobs == 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


# ---------------------------------------------------------------------------
# report


def _read_artifact(path: Path) -> tuple[list[str], list[str], list[dict]]:
    header, columns, rows = [], [], []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            header.append(line)
        elif not columns:
            columns = line.split(",")
        elif line:
            rows.append(dict(zip(columns, line.split(","))))
    return header, columns, rows


def run_report(config: ExperimentConfig) -> list[str]:
    """Human-readable digest of previously emitted CSV artifacts."""
    lines = []
    for name in config.params["files"]:
        path = Path(name)
        header, columns, rows = _read_artifact(path)
        cmd = next((h[2:] for h in header if h.startswith("# cmd:")), "cmd: ?")
        lines.append(f"{path.name}: {len(rows)} rows ({cmd})")
        if "gap_db" in columns and "threshold_db" in columns:
            gaps = [float(r["gap_db"]) for r in rows if r.get("status") == "ok"]
            bad = [r["name"] for r in rows if r.get("status", "ok") != "ok"]
            if gaps:
                lines.append(f"  max gap to capacity: {max(gaps):.3f} dB")
            if bad:
                lines.append(f"  rows with errors: {', '.join(bad)}")
        if "bound" in columns:
            ok = all(float(r["measured_wer"]) <= float(r["bound"]) for r in rows)
            lines.append(f"  measured <= bound on every row: {ok}")
        if "wer" in columns and rows:
            last = rows[-1]
            lines.append(f"  final point: snr {last['snr_db']} dB, wer {last['wer']}")
    return lines


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="protorelay",
        description="Protograph LDPC threshold tables, searches, lifts and "
                    "Monte Carlo sweeps; CSV out, deterministic per seed.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    t = sub.add_parser("threshold", help="registry threshold table")
    t.add_argument("selection", nargs="?", default=None,
                   help="comma-separated registry names or a proto-matrix "
                        "file; default: full registry; '' for empty table")
    t.add_argument("--out", type=Path)

    s = sub.add_parser("search", help="extension search ranked by threshold")
    s.add_argument("--parent", required=True)
    s.add_argument("--kind", required=True, choices=["lengthened", "expurgated"])
    s.add_argument("--pin", help="comma-separated entries pinning the "
                                 "extension to a single candidate")
    s.add_argument("--top", type=int, default=10)
    s.add_argument("--beam", type=int)
    s.add_argument("--prefilter-db", type=float, default=0.25,
                   help="probe pre-filter offset above child capacity")
    s.add_argument("--out", type=Path)

    l = sub.add_parser("lift", help="build a lifted code, optionally save alist")
    l.add_argument("--proto", required=True)
    l.add_argument("--q", type=int, required=True)
    l.add_argument("--seed", type=int, default=0)
    l.add_argument("--save", type=Path, help="write <save>.alist + sidecar")
    l.add_argument("--out", type=Path)

    p = sub.add_parser("p2p", help="point-to-point BER/WER sweep")
    p.add_argument("--code", required=True)
    p.add_argument("--q", type=int, required=True)
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--snr", help="comma-separated received-SNR grid (dB)")
    grid.add_argument("--ebno", help="comma-separated Eb/N0 grid (dB)")
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lift-seed", type=int, default=0)
    p.add_argument("--stop-errors", type=int, default=DEFAULT_STOP_ERRORS)
    p.add_argument("--max-iter", type=int, default=MAX_BP_ITERS)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path)

    r = sub.add_parser("relay", help="end-to-end relay sweep")
    r.add_argument("--scheme", required=True, choices=["be", "bl", "two"])
    r.add_argument("--snr-sd", required=True,
                   help="comma-separated S-D Eb/N0 grid (dB)")
    r.add_argument("--alpha", type=float, default=1.4,
                   help="S-R offset above the S-D point (dB)")
    r.add_argument("--beta", type=float, default=1.6,
                   help="R-D offset above the S-D point (dB)")
    r.add_argument("--frames", type=int, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--factor", type=int, default=DESK_FACTOR)
    r.add_argument("--lift-seed", type=int, default=0)
    r.add_argument("--stop-errors", type=int, default=DEFAULT_STOP_ERRORS)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--out", type=Path)

    rep = sub.add_parser("report", help="summarize emitted CSV artifacts")
    rep.add_argument("files", nargs="+")

    return top


def _config_of(argv: list[str], ns: argparse.Namespace) -> ExperimentConfig:
    params: dict = {}
    if ns.command == "threshold":
        params["selection"] = ns.selection
    elif ns.command == "search":
        pin = None
        if ns.pin is not None:
            pin = tuple(int(v) for v in ns.pin.split(","))
        params.update(parent=ns.parent, kind=ns.kind, pin=pin, top=ns.top,
                      beam=ns.beam, prefilter_db=ns.prefilter_db)
    elif ns.command == "lift":
        params.update(proto=ns.proto, q=ns.q, save=ns.save)
    elif ns.command == "p2p":
        params.update(
            code=ns.code, q=ns.q, lift_seed=ns.lift_seed,
            grid=_float_grid(ns.snr) if ns.snr else None,
            ebno_grid=_float_grid(ns.ebno) if ns.ebno else None,
            frames=ns.frames, stop_errors=ns.stop_errors, max_iter=ns.max_iter,
        )
        if params["ebno_grid"] and any(
            b <= a for a, b in zip(params["ebno_grid"], params["ebno_grid"][1:])
        ):
            raise ValueError("sweep grid must be strictly increasing")
    elif ns.command == "relay":
        params.update(
            scheme=ns.scheme, grid=_float_grid(ns.snr_sd),
            alpha=ns.alpha, beta=ns.beta, frames=ns.frames,
            factor=ns.factor, lift_seed=ns.lift_seed,
            stop_errors=ns.stop_errors,
        )
    elif ns.command == "report":
        params["files"] = ns.files
    return ExperimentConfig(
        command=ns.command,
        argv=tuple(argv),
        seed=getattr(ns, "seed", None),
        out=getattr(ns, "out", None),
        jobs=getattr(ns, "jobs", 1),
        params=params,
    )


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ns = _build_parser().parse_args(argv)
    try:
        config = _config_of(argv, ns)
        if ns.command == "threshold":
            emit_csv(config, THRESHOLD_COLUMNS, run_threshold_table(config))
        elif ns.command == "search":
            emit_csv(config, SEARCH_COLUMNS, run_search(config))
        elif ns.command == "lift":
            emit_csv(config, LIFT_COLUMNS, run_lift(config))
        elif ns.command == "p2p":
            emit_csv(config, P2P_COLUMNS, run_p2p_sweep(config))
        elif ns.command == "relay":
            rows = run_relay_sweep(config)
            emit_csv(config, _relay_columns(rows), rows)
        elif ns.command == "report":
            sys.stdout.write("\n".join(run_report(config)) + "\n")
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
