import numpy as np
import pytest

from protorelay.protograph import (
    DEGREE_ONE_COL,
    PUNCTURED_COL,
    CodeFamilyRegistry,
    ProtoMatrix,
    design_rate,
    expurgate,
    from_text,
    lengthen,
    rename,
    split_bilayer,
)
from fractions import Fraction


def test_base_geometry(reg):
    base = reg["BL-1/2"]
    assert base.entries.shape == (4, 7)
    assert base.punctured == (PUNCTURED_COL,)
    # column 0 is the degree-1 variable: a single edge, on the first check
    col = base.entries[:, DEGREE_ONE_COL]
    assert col.sum() == 1 and col[0] == 1


def test_design_rate_counts_transmitted_columns_only(reg):
    assert design_rate(reg["BL-1/2"]) == Fraction(1, 2)
    assert design_rate(reg["BE-1/3"]) == Fraction(1, 3)
    assert design_rate(reg["BL-9/10"]) == Fraction(9, 10)


def test_entries_validation():
    with pytest.raises(ValueError, match="non-negative"):
        ProtoMatrix(np.array([[1, -1], [1, 1]]))
    with pytest.raises(ValueError, match="integers"):
        ProtoMatrix(np.array([[1.5, 1], [1, 1]]))
    with pytest.raises(ValueError, match="all-zero check row"):
        ProtoMatrix(np.array([[1, 1, 1], [0, 0, 0]]))
    with pytest.raises(ValueError, match="all-zero variable column"):
        ProtoMatrix(np.array([[1, 0, 1], [1, 0, 1]]))
    with pytest.raises(ValueError, match="punctured column out of range"):
        ProtoMatrix(np.array([[1, 1, 1]]), punctured=(5,))


def test_degenerate_rate_rejected():
    # square matrix: no information columns, rate 0
    with pytest.raises(ValueError, match="rate"):
        ProtoMatrix(np.array([[1, 1], [1, 1]]))


def test_entries_are_frozen(reg):
    base = reg["BL-1/2"]
    with pytest.raises(ValueError):
        base.entries[0, 0] = 9


def test_lengthen_appends_three_columns(reg):
    base = reg["BL-1/2"]
    block = np.array([[0, 1, 1], [1, 1, 1], [2, 1, 2], [0, 1, 0]])
    child = lengthen(base, block)
    assert child.n_vars == base.n_vars + 3
    assert np.array_equal(child.entries[:, : base.n_vars], base.entries)
    assert np.array_equal(child.entries[:, base.n_vars :], block)
    assert child.punctured == base.punctured
    assert design_rate(child) == Fraction(2, 3)


def test_lengthen_rejects_weak_columns(reg):
    base = reg["BL-1/2"]
    # all-zero appended column
    with pytest.raises(ValueError):
        lengthen(base, np.array([[0, 1, 1], [0, 1, 1], [0, 1, 2], [0, 1, 0]]))
    # column sum over the non-degree-1 check rows below 3
    weak = np.array([[2, 1, 1], [1, 1, 1], [1, 1, 2], [0, 1, 0]])
    assert weak[1:, 0].sum() == 2
    with pytest.raises(ValueError, match="sums to 2"):
        lengthen(base, weak)


def test_expurgate_appends_one_row(reg):
    root = reg["BE-3/4"]
    row = np.array([0, 1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 2])
    child = expurgate(root, row)
    assert child.n_checks == root.n_checks + 1
    assert np.array_equal(child.entries[: root.n_checks], root.entries)
    assert np.array_equal(child.entries[-1], row)


def test_expurgate_rejects_degree_one_attachment(reg):
    root = reg["BE-3/4"]
    bad = np.zeros(root.n_vars, dtype=int)
    bad[DEGREE_ONE_COL] = 1
    bad[PUNCTURED_COL] = 1
    with pytest.raises(ValueError, match="degree-1"):
        expurgate(root, bad)
    with pytest.raises(ValueError, match="all zero"):
        expurgate(root, np.zeros(root.n_vars, dtype=int))


def test_split_recombines_exactly(reg):
    parent = reg["BL-3/4"]
    keep, ext = split_bilayer(parent, "lengthened", 7)
    assert np.array_equal(keep.entries, reg["BL-1/2"].entries)
    assert np.array_equal(np.hstack([keep.entries, ext]), parent.entries)

    low = reg["BE-1/2"]
    keep, rows = split_bilayer(low, "expurgated", reg["BE-3/4"].n_checks)
    assert np.array_equal(keep.entries, reg["BE-3/4"].entries)
    assert np.array_equal(np.vstack([keep.entries, rows]), low.entries)


def test_split_validation(reg):
    with pytest.raises(ValueError, match="boundary"):
        split_bilayer(reg["BL-1/2"], "lengthened", 0)
    with pytest.raises(ValueError, match="kind"):
        split_bilayer(reg["BL-1/2"], "shortened", 3)


def test_text_round_trip(reg):
    for name in ("BL-1/2", "BE-1/3"):
        p = reg[name]
        q = from_text(p.to_text(), name=name)
        assert np.array_equal(q.entries, p.entries)
        assert q.punctured == p.punctured
        assert q == p  # name ignored by equality


def test_from_text_rejects_malformed():
    with pytest.raises(ValueError):
        from_text("garbage header\n1 2 3\n")
    # header promises more rows than provided
    with pytest.raises(ValueError):
        from_text("2 3 1/3 punctured=1\n1 1 1\n")


def test_registry_lookup(reg):
    assert reg["BL-1/2"].name == "BL-1/2"
    with pytest.raises(KeyError):
        reg["BL-1/5"]
    renamed = rename(reg["BL-1/2"], "other")
    assert renamed == reg["BL-1/2"]
    assert renamed.name == "other"


def test_registry_requires_unique_names(reg):
    base = reg["BL-1/2"]
    with pytest.raises(ValueError, match="unique"):
        CodeFamilyRegistry(base, (base, base), ())
