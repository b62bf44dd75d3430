"""Two-stage lifting of proto-matrices into quasi-cyclic parity matrices.

Stage 1 lifts by a fixed factor 4 with general per-edge-type permutation
blocks, eliminating parallel edges; blocks are picked greedily to maximize
the local girth of the growing binary graph (progressive edge growth over
edge types).  Stage 2 replaces every edge of the binary proto with a QxQ
circulant whose shift is chosen, again progressively, to avoid 4-cycles
outright and 6-cycles where possible.  Both stages process positions in
column-major order and break ties toward the smallest candidate, so a
lift is a pure function of (proto, factors); the seed argument is
recorded as metadata.

The block layout keeps lifted row ``proto_row * F + offset`` and column
``proto_col * F + offset`` (F = 4Q), so sub-family matrices are literal
row/column slices of the extreme member's matrix.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .protograph import ProtoMatrix, from_text

__all__ = [
    "LiftedCode",
    "FamilyLift",
    "peg_lift",
    "circulant_lift",
    "lift_family",
    "write_alist",
    "read_alist",
    "save_code",
    "load_code",
]

STAGE1_FACTOR = 4


@dataclass(eq=False)
class LiftedCode:
    """Sparse parity-check matrix lifted from a protograph.

    ``lineage`` maps every nonzero of ``h`` (in CSR order) to its proto
    edge type as an (E, 2) array of (proto_row, proto_col).  ``transmitted``
    lists the lifted columns actually sent, ascending; copies of punctured
    proto columns are excluded.  ``girth`` is exact up to 8 (8 means no
    4- or 6-cycle exists).
    """

    h: sp.csr_matrix
    proto: ProtoMatrix
    lineage: np.ndarray
    transmitted: np.ndarray
    seed: int
    factor: int
    q: int
    girth: int
    name: str = ""

    @property
    def n_cols(self) -> int:
        return int(self.h.shape[1])

    @property
    def n_rows(self) -> int:
        return int(self.h.shape[0])

    @property
    def n_transmitted(self) -> int:
        return int(self.transmitted.size)

    @property
    def design_info_len(self) -> int:
        return (self.proto.n_vars - self.proto.n_checks) * self.factor

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return (
            f"<LiftedCode{tag} {self.n_rows}x{self.n_cols} F={self.factor} "
            f"girth={self.girth}>"
        )


@lru_cache(maxsize=8)
def _regular_blocks(m: int, size: int = STAGE1_FACTOR) -> tuple[np.ndarray, ...]:
    """All size x size 0/1 blocks with every row and column sum equal m."""
    out = []
    for bits in itertools.product((0, 1), repeat=size * size):
        b = np.array(bits, dtype=np.uint8).reshape(size, size)
        if (b.sum(axis=0) == m).all() and (b.sum(axis=1) == m).all():
            out.append(b)
    return tuple(out)


def _cycle_score(b: np.ndarray) -> tuple[int, int]:
    """(number of 4-cycles, 6-cycle walk proxy) of a binary bipartite graph."""
    s = (b.astype(np.int64) @ b.T.astype(np.int64))
    off = s - np.diag(np.diag(s))
    four = int((off * (off - 1) // 2).sum() // 2)
    six = int(np.trace(off @ off @ off))
    return four, six


def peg_lift(p: ProtoMatrix, factor: int = STAGE1_FACTOR, seed: int = 0) -> ProtoMatrix:
    """Stage-1 lift: binary proto of shape (C*factor, V*factor).

    Each proto entry ``m`` becomes a ``factor x factor`` 0/1 block with all
    row/column sums equal to ``m`` (degrees preserved, parallel edges
    removed).  Raises ``ValueError`` when ``factor`` is smaller than the
    largest entry (parallel edges could not be separated).
    """
    max_entry = int(p.entries.max())
    if factor < max_entry:
        raise ValueError(
            f"lift factor {factor} cannot separate {max_entry} parallel edges"
        )
    n_chk, n_var = p.n_checks, p.n_vars
    b = np.zeros((n_chk * factor, n_var * factor), dtype=np.uint8)
    for j in range(n_var):
        for i in range(n_chk):
            m = int(p.entries[i, j])
            if m == 0:
                continue
            best_score = None
            best_cands: list[np.ndarray] = []
            for cand in _regular_blocks(m, factor):
                b[i * factor : (i + 1) * factor, j * factor : (j + 1) * factor] = cand
                score = _cycle_score(b)
                if best_score is None or score < best_score:
                    best_score = score
                    best_cands = [cand]
                elif score == best_score:
                    best_cands.append(cand)
            pick = np.random.default_rng((seed, 1, i, j))
            chosen = best_cands[pick.integers(len(best_cands))]
            b[i * factor : (i + 1) * factor, j * factor : (j + 1) * factor] = chosen
    punct = tuple(
        pc * factor + a for pc in p.punctured for a in range(factor)
    )
    return ProtoMatrix(b, punct)


def _stage2_shifts(b: np.ndarray, q: int, seed: int) -> tuple[np.ndarray, bool]:
    """Circulant shift per edge of binary proto ``b``, column-major PEG.

    The best candidate class avoids both 4- and 6-cycles through the new
    edge; within a class the shift is drawn from a stream keyed by
    ``(seed, edge)``, which keeps the construction reproducible without
    biasing shifts toward zero (near-identity circulants mix poorly and
    cost real waterfall performance).  Returns (shift matrix with -1 on
    non-edges, whether any 6-cycle had to be accepted); raises if some
    edge admits no 4-cycle-free shift.
    """
    n_chk, n_var = b.shape
    shifts = -np.ones((n_chk, n_var), dtype=np.int64)
    # diff[a, b_] marks realized (shift_a - shift_b) mod q over shared columns
    diff = np.zeros((n_chk, n_chk, q), dtype=bool)
    took_six = False
    for j in range(n_var):
        placed_rows: list[int] = []
        for i in range(n_chk):
            if not b[i, j]:
                continue
            forbidden4 = np.zeros(q, dtype=bool)
            forbidden6 = np.zeros(q, dtype=bool)
            for r in placed_rows:
                base = int(shifts[r, j])
                d_ir = diff[i, r]
                if d_ir.any():
                    forbidden4 |= np.roll(d_ir, base)
                for e in range(n_chk):
                    if e == i or e == r:
                        continue
                    d1 = np.flatnonzero(diff[i, e])
                    d2 = np.flatnonzero(diff[e, r])
                    if d1.size and d2.size:
                        hits = (d1[:, None] + d2[None, :] + base).ravel() % q
                        forbidden6[hits] = True
            open4 = ~forbidden4
            if not open4.any():
                raise ValueError(
                    f"no 4-cycle-free circulant shift at edge ({i}, {j}) with Q={q}"
                )
            open46 = open4 & ~forbidden6
            if open46.any():
                pool = np.flatnonzero(open46)
            else:
                pool = np.flatnonzero(open4)
                took_six = True
            pick = np.random.default_rng((seed, 2, i, j))
            s = int(pool[pick.integers(pool.size)])
            shifts[i, j] = s
            for r in placed_rows:
                d = (s - int(shifts[r, j])) % q
                diff[i, r, d] = True
                diff[r, i, (-d) % q] = True
            placed_rows.append(i)
    return shifts, took_six


def _assemble(b: np.ndarray, shifts: np.ndarray, q: int) -> sp.csr_matrix:
    rows_b, cols_b = np.nonzero(b)
    offs = np.arange(q)
    r = (rows_b[:, None] * q + (offs[None, :] + shifts[rows_b, cols_b][:, None]) % q)
    c = cols_b[:, None] * q + offs[None, :]
    h = sp.coo_matrix(
        (np.ones(r.size, dtype=np.uint8), (r.ravel(), c.ravel())),
        shape=(b.shape[0] * q, b.shape[1] * q),
    )
    return h.tocsr()


def _exact_girth_to8(h: sp.csr_matrix) -> int:
    """4 if a 4-cycle exists, else 6 if a 6-cycle exists, else 8."""
    a = (h.astype(np.int64) @ h.T.astype(np.int64)).tocsr()
    off = a - sp.diags(a.diagonal())
    if off.nnz and off.max() > 1:
        return 4
    tri = (off @ off @ off).diagonal().sum() // 6
    col_deg = np.asarray(h.sum(axis=0)).ravel()
    stars = (col_deg * (col_deg - 1) * (col_deg - 2) // 6).sum()
    return 6 if tri - stars > 0 else 8


def _lineage_of(h: sp.csr_matrix, factor: int) -> np.ndarray:
    coo = h.tocoo()
    order = np.lexsort((coo.col, coo.row))
    return np.stack(
        [coo.row[order] // factor, coo.col[order] // factor], axis=1
    ).astype(np.int64)


def _transmitted_of(p: ProtoMatrix, factor: int) -> np.ndarray:
    keep = np.ones(p.n_vars * factor, dtype=bool)
    for pc in p.punctured:
        keep[pc * factor : (pc + 1) * factor] = False
    return np.flatnonzero(keep).astype(np.int64)


def circulant_lift(
    binary_proto: ProtoMatrix,
    q: int,
    *,
    origin: ProtoMatrix | None = None,
    seed: int = 0,
    name: str = "",
) -> LiftedCode:
    """Stage-2 circulant lift of a (parallel-edge-free) binary proto.

    ``origin`` names the pre-stage-1 protograph recorded on the result
    (defaults to ``binary_proto`` itself for a direct circulant lift).
    The final graph is verified 4-cycle-free; construction raises if that
    is unreachable at this ``q``.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if int(binary_proto.entries.max()) > 1:
        raise ValueError("circulant lift needs a parallel-edge-free proto")
    b = np.asarray(binary_proto.entries, dtype=np.uint8)
    if q == 1:
        h = sp.csr_matrix(b)
    else:
        shifts, _ = _stage2_shifts(b, q, seed)
        h = _assemble(b, shifts, q)

    proto = origin if origin is not None else binary_proto
    factor = (h.shape[1]) // proto.n_vars
    girth = _exact_girth_to8(h)
    code = LiftedCode(
        h=h,
        proto=proto,
        lineage=_lineage_of(h, factor),
        transmitted=_transmitted_of(proto, factor),
        seed=seed,
        factor=factor,
        q=q,
        girth=girth,
        name=name,
    )
    return code


def lift_code(
    p: ProtoMatrix, q: int, seed: int = 0, name: str = ""
) -> LiftedCode:
    """Both lifting stages: factor-4 PEG then circulant Q."""
    return circulant_lift(
        peg_lift(p, STAGE1_FACTOR, seed), q, origin=p, seed=seed, name=name
    )


@dataclass(eq=False)
class FamilyLift:
    """Nested lifts of one family chain, sharing the extreme member's graph.

    ``kind`` is "lengthened" (members differ in trailing columns; the
    extreme member has the most) or "expurgated" (trailing rows).  Every
    member's matrix is a literal slice of the extreme matrix, so the
    extreme decoder serves all members by deactivating columns or rows.
    """

    kind: str
    codes: dict[str, LiftedCode]
    extreme_name: str
    factor: int

    def __getitem__(self, name: str) -> LiftedCode:
        try:
            return self.codes[name]
        except KeyError:
            raise KeyError(f"no family member named {name!r}") from None

    def names(self) -> tuple[str, ...]:
        return tuple(self.codes)

    def member_by_rate(self, rate) -> LiftedCode:
        for code in self.codes.values():
            if code.proto.rate == rate:
                return code
        raise KeyError(f"no family member with rate {rate}")

    @property
    def extreme(self) -> LiftedCode:
        return self.codes[self.extreme_name]


def lift_family(
    members: list[ProtoMatrix] | tuple[ProtoMatrix, ...],
    info_len: int,
    seed: int = 0,
) -> FamilyLift:
    """Lift a nested chain once via its extreme member.

    ``members`` must form a nesting chain in either direction; the chain
    kind (lengthened/expurgated) is inferred.  ``info_len`` is the design
    information length of the highest-rate member (the source code in
    every protocol use); it must be divisible by ``4 * (V - C)`` of that
    member.  Sub-members are sliced out of the extreme matrix, so nesting
    is bit-exact by construction.
    """
    if not members:
        raise ValueError("empty family")
    chain = sorted(members, key=lambda m: (m.n_vars, m.n_checks))
    kinds = set()
    for a, b in zip(chain, chain[1:]):
        if b.n_vars > a.n_vars and b.n_checks == a.n_checks:
            if not np.array_equal(b.entries[:, : a.n_vars], a.entries):
                raise ValueError("members do not nest by columns")
            kinds.add("lengthened")
        elif b.n_checks > a.n_checks and b.n_vars == a.n_vars:
            if not np.array_equal(b.entries[: a.n_checks, :], a.entries):
                raise ValueError("members do not nest by rows")
            kinds.add("expurgated")
        else:
            raise ValueError("members do not form a single nesting chain")
        if a.punctured != tuple(j for j in b.punctured if j < a.n_vars):
            raise ValueError("punctured columns inconsistent across members")
    if len(kinds) > 1:
        raise ValueError("mixed lengthened/expurgated chain")
    kind = kinds.pop() if kinds else "lengthened"

    # highest rate: last of a lengthened chain, first of an expurgated one
    top = chain[-1] if kind == "lengthened" else chain[0]
    per_f = top.n_vars - top.n_checks
    if info_len % (per_f * STAGE1_FACTOR) != 0:
        raise ValueError(
            f"info_len {info_len} not divisible by {per_f * STAGE1_FACTOR}"
        )
    factor = info_len // per_f
    q = factor // STAGE1_FACTOR

    extreme = chain[-1]
    ext_code = lift_code(extreme, q, seed, extreme.name)
    codes: dict[str, LiftedCode] = {}
    for m in chain:
        if m is extreme:
            codes[m.name] = ext_code
            continue
        if kind == "lengthened":
            h = ext_code.h[:, : m.n_vars * factor].tocsr()
        else:
            h = ext_code.h[: m.n_checks * factor, :].tocsr()
        codes[m.name] = LiftedCode(
            h=h,
            proto=m,
            lineage=_lineage_of(h, factor),
            transmitted=_transmitted_of(m, factor),
            seed=seed,
            factor=factor,
            q=q,
            girth=_exact_girth_to8(h),
            name=m.name,
        )
    return FamilyLift(
        kind=kind, codes=codes, extreme_name=extreme.name, factor=factor
    )


# -- serialization ---------------------------------------------------------


def write_alist(h: sp.spmatrix, path: str | Path) -> None:
    """Write a binary sparse matrix in the alist text format (0-padded)."""
    csc = sp.csc_matrix(h, dtype=np.uint8)
    csr = sp.csr_matrix(h, dtype=np.uint8)
    n_rows, n_cols = h.shape
    col_deg = np.diff(csc.indptr)
    row_deg = np.diff(csr.indptr)
    lines = [
        f"{n_cols} {n_rows}",
        f"{col_deg.max()} {row_deg.max()}",
        " ".join(map(str, col_deg)),
        " ".join(map(str, row_deg)),
    ]
    for j in range(n_cols):
        idx = csc.indices[csc.indptr[j] : csc.indptr[j + 1]] + 1
        pad = [0] * (int(col_deg.max()) - idx.size)
        lines.append(" ".join(map(str, list(idx) + pad)))
    for i in range(n_rows):
        idx = csr.indices[csr.indptr[i] : csr.indptr[i + 1]] + 1
        pad = [0] * (int(row_deg.max()) - idx.size)
        lines.append(" ".join(map(str, list(idx) + pad)))
    Path(path).write_text("\n".join(lines) + "\n")


def read_alist(path: str | Path) -> sp.csr_matrix:
    toks = Path(path).read_text().split("\n")
    n_cols, n_rows = map(int, toks[0].split())
    col_deg = list(map(int, toks[2].split()))
    rows: list[int] = []
    cols: list[int] = []
    for j in range(n_cols):
        entries = [int(t) for t in toks[4 + j].split() if int(t) > 0]
        if len(entries) != col_deg[j]:
            raise ValueError(f"alist column {j}: degree mismatch")
        for r in entries:
            rows.append(r - 1)
            cols.append(j)
    return sp.coo_matrix(
        (np.ones(len(rows), dtype=np.uint8), (rows, cols)), shape=(n_rows, n_cols)
    ).tocsr()


def save_code(code: LiftedCode, path: str | Path) -> None:
    """Write ``<path>`` as alist plus a ``<path>.meta.json`` sidecar."""
    path = Path(path)
    write_alist(code.h, path)
    meta = {
        "name": code.name,
        "proto": code.proto.to_text(),
        "stage1_factor": STAGE1_FACTOR,
        "q": code.q,
        "factor": code.factor,
        "seed": code.seed,
        "girth": code.girth,
        "transmitted": code.transmitted.tolist(),
    }
    path.with_suffix(path.suffix + ".meta.json").write_text(
        json.dumps(meta, indent=1) + "\n"
    )


def load_code(path: str | Path) -> LiftedCode:
    path = Path(path)
    h = read_alist(path)
    meta = json.loads(path.with_suffix(path.suffix + ".meta.json").read_text())
    proto = from_text(meta["proto"], meta.get("name", ""))
    return LiftedCode(
        h=h,
        proto=proto,
        lineage=_lineage_of(h, meta["factor"]),
        transmitted=np.asarray(meta["transmitted"], dtype=np.int64),
        seed=meta["seed"],
        factor=meta["factor"],
        q=meta["q"],
        girth=meta["girth"],
        name=meta.get("name", ""),
    )
