"""Constrained exhaustive search for family extensions, scored by threshold.

A search space is defined per position of the candidate extension (a 4x3
column block for lengthening, a single check row for expurgation) as a
finite set of allowed parallel-edge counts.  Candidates stream in a fixed
product order, get structurally filtered, and are scored by their PEXIT
threshold; the ranked output is fully deterministic.

Scoring every candidate is the default.  An optional pre-filter runs a
single PEXIT probe at a fixed Eb/N0 above the child rate's capacity limit
and discards candidates that do not converge there; any candidate whose
threshold is at or below the probe point survives, so the filter never
changes the top of the ranking when the probe point is chosen above the
optimum (it defaults to capacity + 0.25 dB, generous for this family).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .pexit import biawgn_capacity_db, pexit_converges, threshold
from .protograph import (
    DEGREE_ONE_COL,
    DEGREE_ONE_ROW,
    PUNCTURED_COL,
    ProtoMatrix,
    design_rate,
    expurgate,
    lengthen,
)

__all__ = ["SearchSpec", "enumerate_candidates", "search_best"]

LENGTHEN_COLS = 3
DEFAULT_PREFILTER_OFFSET_DB = 0.25


@dataclass(frozen=True)
class SearchSpec:
    """Search-space description for one family-extension step.

    ``entry_bounds`` lists the allowed values per extension position in
    row-major order (``n_checks * 3`` positions for ``kind="lengthened"``,
    ``n_vars`` positions for ``kind="expurgated"``); ``None`` selects the
    default bounds ({0,1,2} everywhere, except the expurgated row is
    pinned to 0 at the degree-1 column and to {1,2} at the punctured
    column).  ``column_sum_min`` is the minimum column sum outside the
    degree-1 check row (lengthened only).  ``beam`` optionally caps how
    many candidates are fully scored.
    """

    parent: ProtoMatrix
    kind: str
    entry_bounds: tuple[tuple[int, ...], ...] | None = None
    column_sum_min: int = 3
    beam: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("lengthened", "expurgated"):
            raise ValueError(f"kind must be lengthened|expurgated, got {self.kind!r}")
        if self.column_sum_min < 0:
            raise ValueError("column_sum_min must be >= 0")
        if self.beam is not None and self.beam < 1:
            raise ValueError("beam must be >= 1 when set")
        bounds = self.entry_bounds
        if bounds is None:
            bounds = self._default_bounds()
        bounds = tuple(tuple(sorted({int(v) for v in b})) for b in bounds)
        if len(bounds) != self.n_positions:
            raise ValueError(
                f"need {self.n_positions} entry bounds, got {len(bounds)}"
            )
        for b in bounds:
            if not b:
                raise ValueError("entry bounds must be nonempty")
            if b[0] < 0:
                raise ValueError("entry bounds must be non-negative")
        object.__setattr__(self, "entry_bounds", bounds)

    @property
    def n_positions(self) -> int:
        if self.kind == "lengthened":
            return self.parent.n_checks * LENGTHEN_COLS
        return self.parent.n_vars

    def _default_bounds(self) -> tuple[tuple[int, ...], ...]:
        full = (0, 1, 2)
        if self.kind == "lengthened":
            return (full,) * self.n_positions
        bounds = [full] * self.parent.n_vars
        bounds[DEGREE_ONE_COL] = (0,)
        bounds[PUNCTURED_COL] = (1, 2)
        return tuple(bounds)

    def apply(self, extension: np.ndarray) -> ProtoMatrix:
        """Parent extended by a candidate from this space."""
        if self.kind == "lengthened":
            return lengthen(self.parent, extension)
        return expurgate(self.parent, extension)


def _admissible(spec: SearchSpec, values: tuple[int, ...]) -> np.ndarray | None:
    if spec.kind == "lengthened":
        block = np.array(values, dtype=np.int64).reshape(
            spec.parent.n_checks, LENGTHEN_COLS
        )
        body = np.delete(block, DEGREE_ONE_ROW, axis=0)
        if np.any(body.sum(axis=0) < spec.column_sum_min):
            return None
        return block
    row = np.array(values, dtype=np.int64)
    if row[DEGREE_ONE_COL] != 0 or row[PUNCTURED_COL] not in (1, 2):
        return None
    if not row.any():
        return None
    return row


def enumerate_candidates(spec: SearchSpec) -> Iterator[np.ndarray]:
    """Stream every structurally admissible extension, in product order.

    The last position varies fastest; within a position values ascend.
    """
    for values in itertools.product(*spec.entry_bounds):
        ext = _admissible(spec, values)
        if ext is not None:
            yield ext


def _canonical_key(spec: SearchSpec, ext: np.ndarray) -> tuple:
    if spec.kind == "lengthened":
        # appended columns are exchangeable: score one column multiset once
        return tuple(sorted(map(tuple, ext.T)))
    return tuple(ext)


def search_best(
    spec: SearchSpec,
    *,
    prefilter_offset_db: float | None = None,
) -> list[tuple[np.ndarray, float]]:
    """Rank admissible extensions by PEXIT threshold, best first.

    Returns ``(extension, threshold_db)`` pairs sorted ascending by
    threshold, ties broken by enumeration order.  Column-permuted
    lengthened blocks are scored once (first occurrence represents the
    class).  Candidates whose threshold bracket fails are disqualified
    and dropped.  ``prefilter_offset_db`` enables the probe pre-filter at
    child capacity plus that offset.
    """
    seen: set[tuple] = set()
    survivors: list[np.ndarray] = []
    probe_db: float | None = None

    for ext in enumerate_candidates(spec):
        key = _canonical_key(spec, ext)
        if key in seen:
            continue
        seen.add(key)
        if prefilter_offset_db is not None:
            child = spec.apply(ext)
            if probe_db is None:
                probe_db = biawgn_capacity_db(design_rate(child)) + prefilter_offset_db
            converged, _ = pexit_converges(child, probe_db)
            if not converged:
                continue
        survivors.append(ext)
        if spec.beam is not None and len(survivors) >= spec.beam:
            break

    ranked: list[tuple[np.ndarray, float]] = []
    for ext in survivors:
        try:
            result = threshold(spec.apply(ext))
        except ValueError:
            continue
        ranked.append((ext, result.threshold_db))
    ranked.sort(key=lambda pair: pair[1])
    return ranked
