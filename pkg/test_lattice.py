"""Tests for integer echelon forms and lattice indices."""

from math import gcd

import pytest
from hypothesis import assume, given, strategies as st
from sympy import Matrix

from app.services.lattice import DimensionError, Echelon, IntLattice, hnf_insert, lattice_index, xgcd

small_ints = st.integers(min_value=-12, max_value=12)


@given(small_ints, small_ints)
def test_xgcd(a, b):
    assume(a or b)
    g, s, t = xgcd(a, b)
    assert g == gcd(a, b)
    assert s * a + t * b == g


def test_two_by_two_example():
    lattice = IntLattice(2, [(1, 2), (3, 4)])
    assert lattice.basis() == [[1, 0], [0, 2]]
    assert lattice_index(lattice) == 2


def test_rank_deficient_index():
    lattice = IntLattice(3, [(1, 0, 0), (0, 1, 0)])
    assert lattice.index() is None
    assert IntLattice(0).index() == 1


def test_insert_reports_growth():
    lattice = IntLattice(2, [(2, 0)])
    assert not lattice.insert((0, 0))
    assert not lattice.insert((4, 0))
    assert lattice.basis() == [[2, 0]]
    assert lattice.insert((1, 0))
    assert lattice.basis() == [[1, 0]]


def test_hnf_insert_returns_new_lattice():
    lattice = IntLattice(2, [(2, 0), (0, 2)])
    bigger = hnf_insert(lattice, (1, 1))
    assert lattice.index() == 4
    assert bigger.index() == 2
    assert bigger.basis() == [[1, 1], [0, 2]]


def test_dimension_errors():
    with pytest.raises(DimensionError):
        IntLattice(-1)
    with pytest.raises(DimensionError):
        IntLattice(2).insert((1, 2, 3))


square_rows = st.lists(st.lists(small_ints, min_size=3, max_size=3), min_size=3, max_size=5)


@given(square_rows)
def test_index_is_the_gcd_of_maximal_minors(rows):
    lattice = IntLattice(3, rows)
    matrix = Matrix(rows)
    if matrix.rank() < 3:
        assert lattice.index() is None
        return
    minors = [abs(matrix.extract([i, j, k], [0, 1, 2]).det())
              for i in range(len(rows)) for j in range(i + 1, len(rows)) for k in range(j + 1, len(rows))]
    expected = 0
    for m in minors:
        expected = gcd(expected, int(m))
    assert lattice.index() == expected


@given(square_rows)
def test_hermite_normal_form_shape(rows):
    lattice = IntLattice(3, rows)
    pivots = lattice.pivots
    basis = lattice.basis()
    assert pivots == sorted(set(pivots))
    for p, row in zip(pivots, basis):
        assert row[p] > 0
        assert all(x == 0 for x in row[:p])
        for q, other in zip(pivots, basis):
            if q > p:
                assert 0 <= row[q] < other[q]


@given(square_rows)
def test_hermite_form_agrees_with_echelon(rows):
    lattice = IntLattice(3, rows)
    echelon = Echelon(3)
    for row in rows:
        echelon.insert(row)
    assert lattice.rank == echelon.rank
    assert lattice.pivots == echelon.pivots
    assert lattice.index() == echelon.index()
    assert IntLattice(3, echelon.basis()).basis() == lattice.basis()


def _combine_vectors(t1, c1, t2, c2):
    if t2 is None:
        return tuple(c1 * x for x in t1)
    return tuple(c1 * x + c2 * y for x, y in zip(t1, t2))


@given(st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=1, max_size=6))
def test_tags_follow_row_operations(rows):
    echelon = Echelon(4, combine=_combine_vectors)
    residues = []
    for i, row in enumerate(rows):
        unit = tuple(int(i == j) for j in range(len(rows)))
        result = echelon.insert(row, unit)
        if result.residue is not None:
            residues.append(result.residue)

    def recombine(tag):
        return [sum(c * row[k] for c, row in zip(tag, rows)) for k in range(4)]

    for row, tag in zip(echelon.basis(), echelon.tags()):
        assert recombine(tag) == row
    for tag in residues:
        assert recombine(tag) == [0, 0, 0, 0]
    assert echelon.rank == Matrix(rows).rank()
