"""Protograph LDPC code design and half-duplex relay-channel simulation.

The package covers the full pipeline: proto-matrix families built by
lengthening/expurgation, PEXIT decoding thresholds over the binary-input
AWGN channel, protograph search, two-stage quasi-cyclic lifting, encoding
and belief-propagation decoding, and Monte Carlo simulation of
decode-and-forward relay protocols.  Hot numeric kernels run through a
compiled extension when available (see :mod:`protorelay.kernels`).
"""
from __future__ import annotations

from .protograph import (
    CodeFamilyRegistry,
    ProtoMatrix,
    design_rate,
    expurgate,
    lengthen,
    split_bilayer,
)
from .families import builtin_registry

__version__ = "0.1.0"

__all__ = [
    "CodeFamilyRegistry",
    "ProtoMatrix",
    "builtin_registry",
    "design_rate",
    "expurgate",
    "lengthen",
    "split_bilayer",
    "__version__",
]
