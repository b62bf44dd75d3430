"""Proto-matrix type and the bilayer family-construction operations.

A protograph is a small Tanner-graph template: rows are check-node types,
columns are variable-node types, and each entry counts the parallel edges
between the pair.  Punctured columns take part in encoding and decoding but
are never transmitted.  Two construction moves generate the built-in code
families:

* ``lengthen`` appends three variable columns to raise the design rate
  (bilayer lengthened chain, rates 1/2 up to 9/10);
* ``expurgate`` appends one check row to lower it (bilayer expurgated
  chain, rates 3/4 down to 1/3).

Column conventions for the built-in family: column ``DEGREE_ONE_COL`` is
the lone degree-1 variable, wired to check row ``DEGREE_ONE_ROW``, and
column ``PUNCTURED_COL`` is the punctured variable.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

__all__ = [
    "DEGREE_ONE_COL",
    "DEGREE_ONE_ROW",
    "PUNCTURED_COL",
    "ProtoMatrix",
    "CodeFamilyRegistry",
    "design_rate",
    "lengthen",
    "expurgate",
    "split_bilayer",
    "from_text",
]

DEGREE_ONE_COL = 0
PUNCTURED_COL = 1
DEGREE_ONE_ROW = 0

# Column sums of an appended lengthening block, taken over the non-degree-1
# check rows, must reach this floor to keep minimum distance growing
# linearly with block length.
MIN_EXTENSION_COLUMN_SUM = 3


@dataclass(frozen=True, eq=False)
class ProtoMatrix:
    """Immutable protograph with parallel-edge counts and punctured columns.

    Parameters
    ----------
    entries:
        Integer array of shape ``(n_checks, n_vars)``; entry ``(i, j)``
        is the number of parallel edges between check type ``i`` and
        variable type ``j``.
    punctured:
        Column indices that are never transmitted.
    name:
        Optional registry label; ignored by equality.
    """

    entries: np.ndarray
    punctured: tuple[int, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        ent = np.array(self.entries, dtype=np.int64, copy=True)
        if ent.ndim != 2:
            raise ValueError(f"entries must be 2-D, got shape {ent.shape}")
        if not np.issubdtype(np.asarray(self.entries).dtype, np.number):
            raise ValueError("entries must be numeric")
        if np.any(ent < 0):
            raise ValueError("entries must be non-negative edge counts")
        if np.any(ent != np.asarray(self.entries)):
            raise ValueError("entries must be integers")
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

        c, v = ent.shape
        if np.any(ent.sum(axis=1) == 0):
            raise ValueError("proto-matrix has an all-zero check row")
        if np.any(ent.sum(axis=0) == 0):
            raise ValueError("proto-matrix has an all-zero variable column")

        punct = tuple(sorted(int(j) for j in self.punctured))
        if len(set(punct)) != len(punct):
            raise ValueError(f"duplicate punctured column in {punct}")
        if punct and not (0 <= punct[0] and punct[-1] < v):
            raise ValueError(f"punctured column out of range for {v} columns")
        object.__setattr__(self, "punctured", punct)

        r = design_rate(self)  # raises on degenerate shapes
        if not (0 < r < 1):
            raise ValueError(f"design rate {r} outside (0, 1)")

    # -- basic geometry -------------------------------------------------

    @property
    def n_checks(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n_vars(self) -> int:
        return int(self.entries.shape[1])

    @property
    def n_edges(self) -> int:
        return int(self.entries.sum())

    @property
    def transmitted(self) -> tuple[int, ...]:
        """Column indices that are actually sent over the channel."""
        punct = set(self.punctured)
        return tuple(j for j in range(self.n_vars) if j not in punct)

    @property
    def rate(self) -> Fraction:
        return design_rate(self)

    # -- identity --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProtoMatrix):
            return NotImplemented
        return (
            self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
            and self.punctured == other.punctured
        )

    def __hash__(self) -> int:
        return hash((self.entries.shape, self.entries.tobytes(), self.punctured))

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return (
            f"<ProtoMatrix{tag} {self.n_checks}x{self.n_vars} "
            f"rate={self.rate} punctured={list(self.punctured)}>"
        )

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        """Render as the plain-text interchange format.

        Line 1 is ``<checks> <vars> <rate> punctured=<comma list>``;
        each following line is one check row of edge counts.
        """
        head = (
            f"{self.n_checks} {self.n_vars} {self.rate} "
            f"punctured={','.join(str(j) for j in self.punctured)}"
        )
        rows = [" ".join(str(int(x)) for x in row) for row in self.entries]
        return "\n".join([head, *rows]) + "\n"


def from_text(text: str, name: str = "") -> ProtoMatrix:
    """Parse the format produced by :meth:`ProtoMatrix.to_text`.

    The rate recorded on the header line is cross-checked against the
    parsed matrix; a mismatch raises ``ValueError``.
    """
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty proto-matrix text")
    m = re.fullmatch(r"(\d+)\s+(\d+)\s+(\d+)/(\d+)\s+punctured=([\d,]*)", lines[0])
    if m is None:
        raise ValueError(f"bad proto-matrix header: {lines[0]!r}")
    n_checks, n_vars = int(m.group(1)), int(m.group(2))
    rate = Fraction(int(m.group(3)), int(m.group(4)))
    punct = tuple(int(t) for t in m.group(5).split(",") if t)
    if len(lines) - 1 != n_checks:
        raise ValueError(f"expected {n_checks} rows, got {len(lines) - 1}")
    ent = np.array([[int(t) for t in ln.split()] for ln in lines[1:]], dtype=np.int64)
    if ent.shape != (n_checks, n_vars):
        raise ValueError(f"row width mismatch: got shape {ent.shape}")
    p = ProtoMatrix(ent, punct, name)
    if p.rate != rate:
        raise ValueError(f"header rate {rate} but matrix rate {p.rate}")
    return p


def design_rate(p: ProtoMatrix) -> Fraction:
    """Exact design rate ``(V - C) / (V - n_punctured)``.

    ``V`` counts variable columns, ``C`` check rows; the denominator counts
    only transmitted columns.  Raises ``ValueError`` for degenerate shapes
    (no information positions, or nothing transmitted).
    """
    c, v = p.entries.shape
    if v <= c:
        raise ValueError(f"degenerate protograph: {v} variables <= {c} checks")
    n_tx = v - len(p.punctured)
    if n_tx <= 0:
        raise ValueError("degenerate protograph: every column punctured")
    return Fraction(v - c, n_tx)


def lengthen(p: ProtoMatrix, block: np.ndarray) -> ProtoMatrix:
    """Append a three-column extension block, keeping punctured columns.

    ``block`` must have shape ``(p.n_checks, 3)`` with non-negative integer
    entries, and each of its columns must sum to at least
    ``MIN_EXTENSION_COLUMN_SUM`` over the rows other than
    ``DEGREE_ONE_ROW`` (the minimum-distance growth condition).  The new
    columns are transmitted.
    """
    blk = np.asarray(block)
    if blk.shape != (p.n_checks, 3):
        raise ValueError(f"extension block must be {p.n_checks}x3, got {blk.shape}")
    if np.any(blk < 0) or np.any(blk != blk.astype(np.int64)):
        raise ValueError("extension block entries must be non-negative integers")
    blk = blk.astype(np.int64)
    body = np.delete(blk, DEGREE_ONE_ROW, axis=0)
    short = body.sum(axis=0) < MIN_EXTENSION_COLUMN_SUM
    if np.any(short):
        bad = int(np.flatnonzero(short)[0])
        raise ValueError(
            f"extension column {bad} sums to {int(body[:, bad].sum())} outside "
            f"row {DEGREE_ONE_ROW}; needs >= {MIN_EXTENSION_COLUMN_SUM}"
        )
    ent = np.hstack([p.entries, blk])
    return ProtoMatrix(ent, p.punctured)


def expurgate(p: ProtoMatrix, row: np.ndarray) -> ProtoMatrix:
    """Append one check row, keeping punctured columns.

    ``row`` must have length ``p.n_vars``, non-negative integer entries,
    at least one nonzero entry, and a zero at ``DEGREE_ONE_COL`` so the
    degree-1 variable stays degree 1.
    """
    r = np.asarray(row).reshape(-1)
    if r.shape != (p.n_vars,):
        raise ValueError(f"expurgation row must have {p.n_vars} entries, got {r.shape}")
    if np.any(r < 0) or np.any(r != r.astype(np.int64)):
        raise ValueError("expurgation row entries must be non-negative integers")
    r = r.astype(np.int64)
    if not r.any():
        raise ValueError("expurgation row is all zero")
    if r[DEGREE_ONE_COL] != 0:
        raise ValueError(
            f"expurgation row touches the degree-1 column {DEGREE_ONE_COL}"
        )
    ent = np.vstack([p.entries, r[None, :]])
    return ProtoMatrix(ent, p.punctured)


def split_bilayer(
    p: ProtoMatrix, kind: str, boundary: int
) -> tuple[ProtoMatrix, np.ndarray]:
    """Split a bilayer protograph into its base part and extension block.

    ``kind="lengthened"`` keeps the first ``boundary`` columns as the base
    and returns the remaining columns as the extension block;
    ``kind="expurgated"`` keeps the first ``boundary`` rows and returns the
    remaining rows.  The base part is validated as a proto-matrix in its
    own right; the extension block is a plain integer array (possibly
    empty when ``boundary`` spans the whole matrix).
    """
    if kind == "lengthened":
        if not (0 < boundary <= p.n_vars):
            raise ValueError(f"column boundary {boundary} outside 1..{p.n_vars}")
        keep = ProtoMatrix(
            p.entries[:, :boundary],
            tuple(j for j in p.punctured if j < boundary),
        )
        return keep, np.array(p.entries[:, boundary:])
    if kind == "expurgated":
        if not (0 < boundary <= p.n_checks):
            raise ValueError(f"row boundary {boundary} outside 1..{p.n_checks}")
        keep = ProtoMatrix(p.entries[:boundary, :], p.punctured)
        return keep, np.array(p.entries[boundary:, :])
    raise ValueError(f"kind must be 'lengthened' or 'expurgated', got {kind!r}")


@dataclass(frozen=True)
class CodeFamilyRegistry:
    """Ordered collection of one bilayer code family.

    ``lengthened`` runs from the base rate upward (the base itself is the
    first member); ``expurgated`` runs from its root rate downward.  Every
    member carries a unique ``name`` used for lookup.
    """

    base: ProtoMatrix
    lengthened: tuple[ProtoMatrix, ...]
    expurgated: tuple[ProtoMatrix, ...]

    def __post_init__(self) -> None:
        names = [m.name for m in self.members()]
        if len(set(names)) != len(names) or "" in names:
            raise ValueError("registry members need unique non-empty names")

    def members(self) -> tuple[ProtoMatrix, ...]:
        return tuple(self.lengthened) + tuple(self.expurgated)

    def names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.members())

    def __getitem__(self, name: str) -> ProtoMatrix:
        for m in self.members():
            if m.name == name:
                return m
        raise KeyError(f"no registry member named {name!r}")

    def checksum(self) -> str:
        """SHA-256 over every member's name and text form, in order."""
        h = hashlib.sha256()
        for m in self.members():
            h.update(m.name.encode())
            h.update(b"\n")
            h.update(m.to_text().encode())
        return h.hexdigest()


def rename(p: ProtoMatrix, name: str) -> ProtoMatrix:
    """Copy of ``p`` carrying ``name`` (contents and equality unchanged)."""
    return replace(p, name=name)
