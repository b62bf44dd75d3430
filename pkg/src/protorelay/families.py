"""Built-in bilayer protograph family: generator constants and registry.

The family grows from a single rate-1/2 protograph (4 checks, 7 variables,
column 1 punctured).  Lengthening steps append three columns each and walk
the rate up through 2/3, 3/4, ... 9/10; expurgation steps start from the
rate-3/4 member and append one check row each, walking the rate down
through 2/3, 7/12, 1/2, 5/12, 1/3.  All matrices below are frozen: the
registry checksum is pinned by the test suite, so any edit here is a
deliberate family change.
"""
from __future__ import annotations

import numpy as np

from .protograph import (
    CodeFamilyRegistry,
    ProtoMatrix,
    PUNCTURED_COL,
    expurgate,
    lengthen,
    rename,
)

__all__ = [
    "BASE_HALF_RATE",
    "LENGTHEN_BLOCKS",
    "EXPURGATE_ROWS",
    "BL_NAMES",
    "BE_NAMES",
    "builtin_registry",
]

BASE_HALF_RATE = np.array(
    [
        [1, 2, 0, 0, 0, 1, 0],
        [0, 3, 1, 1, 1, 1, 0],
        [0, 1, 2, 2, 2, 1, 1],
        [0, 2, 0, 0, 0, 0, 2],
    ]
)

# Three-column extension blocks, applied cumulatively in rate order
# 2/3, 3/4, 4/5, 5/6, 6/7, 7/8, 8/9, 9/10.
LENGTHEN_BLOCKS: tuple[np.ndarray, ...] = tuple(
    np.array(b)
    for b in (
        [[0, 1, 1], [1, 1, 1], [2, 1, 2], [0, 1, 0]],
        [[0, 0, 2], [2, 2, 0], [1, 1, 2], [0, 0, 1]],
        [[0, 1, 2], [1, 2, 2], [2, 1, 1], [0, 0, 0]],
        [[0, 0, 1], [2, 2, 0], [1, 1, 2], [0, 0, 2]],
        [[0, 0, 1], [1, 2, 1], [2, 1, 2], [0, 1, 0]],
        [[0, 0, 2], [2, 2, 0], [1, 1, 2], [0, 0, 2]],
        [[0, 0, 0], [0, 1, 2], [2, 2, 1], [1, 1, 0]],
        [[0, 0, 2], [1, 2, 0], [2, 1, 2], [0, 0, 2]],
    )
)

# Single-row expurgations of the rate-3/4 member, applied cumulatively in
# rate order 2/3, 7/12, 1/2, 5/12, 1/3.
EXPURGATE_ROWS: tuple[np.ndarray, ...] = tuple(
    np.array(r)
    for r in (
        [0, 1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 2],
        [0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 2],
        [0, 2, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0],
        [0, 2, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0],
        [0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    )
)

BL_NAMES = (
    "BL-1/2",
    "BL-2/3",
    "BL-3/4",
    "BL-4/5",
    "BL-5/6",
    "BL-6/7",
    "BL-7/8",
    "BL-8/9",
    "BL-9/10",
)
BE_NAMES = ("BE-3/4", "BE-2/3", "BE-7/12", "BE-1/2", "BE-5/12", "BE-1/3")

# Index of the lengthened member that roots the expurgated chain.
EXPURGATE_ROOT = BL_NAMES.index("BL-3/4")


def builtin_registry() -> CodeFamilyRegistry:
    """Construct the 15-member registry from the frozen generators."""
    base = ProtoMatrix(BASE_HALF_RATE, (PUNCTURED_COL,), BL_NAMES[0])
    bl = [base]
    for name, block in zip(BL_NAMES[1:], LENGTHEN_BLOCKS):
        bl.append(rename(lengthen(bl[-1], block), name))
    be = [rename(bl[EXPURGATE_ROOT], BE_NAMES[0])]
    for name, row in zip(BE_NAMES[1:], EXPURGATE_ROWS):
        be.append(rename(expurgate(be[-1], row), name))
    return CodeFamilyRegistry(base=base, lengthened=tuple(bl), expurgated=tuple(be))
