"""Tests for Hall bases and collection in free nilpotent groups."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.services.collector import (
    CollectorError,
    NormalForm,
    collect,
    free_nilpotent_group,
    hall_basis,
    nf_comm,
    nf_conj,
    nf_inv,
    nf_mul,
    nf_pow,
)
from app.services.corpus import get_group
from app.services.groups import UnboundLabelError

RANK_TWO_LABELS = [
    "a", "b", "[b,a]", "[b,a,a]", "[b,a,b]", "[b,a,a,a]", "[b,a,a,b]", "[b,a,b,b]",
    "[[b,a,a],[b,a]]", "[[b,a,b],[b,a]]", "[b,a,a,a,a]", "[b,a,a,a,b]", "[b,a,a,b,b]", "[b,a,b,b,b]",
]

words = st.lists(
    st.tuples(st.sampled_from("ab"), st.sampled_from([1, -1, 2, -3])), max_size=8
).map(tuple)


@pytest.mark.parametrize("rank, counts", [(1, [1, 0, 0, 0, 0]), (2, [2, 1, 2, 3, 6]), (3, [3, 3, 8, 18, 48])])
def test_hall_basis_sizes(rank, counts):
    basis = hall_basis(rank, 5)
    assert [sum(1 for u in basis if u.weight == w) for w in range(1, 6)] == counts


def test_rank_two_labels():
    basis = hall_basis(2, 5)
    assert [u.label for u in basis] == RANK_TWO_LABELS
    assert [u.id for u in basis] == list(range(14))
    assert basis[8].left == 3 and basis[8].right == 2
    assert basis[0].is_generator and not basis[2].is_generator


def test_lower_class_is_a_prefix():
    assert hall_basis(2, 3) == hall_basis(2, 5)[:5]


@pytest.mark.parametrize("rank, cls", [(0, 2), (4, 2), (2, 0), (2, 6)])
def test_range_errors(rank, cls):
    with pytest.raises(CollectorError):
        hall_basis(rank, cls)
    with pytest.raises(CollectorError):
        collect("a", rank, cls)


def test_collect_examples():
    assert collect("abab^-1", 2, 2).exponents == (2, 0, 1)
    assert collect("abab^-1", 2, 2).format() == "a^2 [b,a]"
    assert collect("", 2, 3).is_identity()
    assert collect("", 2, 3).format() == "1"
    assert collect("b a", 2, 2).exponents == (1, 1, 1)
    assert collect("a b", 2, 2).exponents == (1, 1, 0)


def test_commutator_of_generators():
    a, b = collect("a", 2, 2), collect("b", 2, 2)
    assert nf_comm(a, b).exponents == (0, 0, -1)
    assert nf_comm(b, a).exponents == (0, 0, 1)
    assert nf_conj(a, b) == nf_mul(a, nf_comm(a, b))


def test_unknown_generator():
    with pytest.raises(UnboundLabelError):
        collect("c", 2, 3)
    with pytest.raises(UnboundLabelError):
        free_nilpotent_group(2, 3).generator("ab")


def test_mismatched_forms():
    x, y = collect("a", 2, 3), collect("a", 2, 4)
    with pytest.raises(CollectorError):
        nf_mul(x, y)
    with pytest.raises(CollectorError):
        free_nilpotent_group(2, 4).inv(x)
    with pytest.raises(CollectorError):
        free_nilpotent_group(2, 3).inv(NormalForm(2, 3, (1, 0)))


@pytest.mark.parametrize("rank, cls", [(2, 5), (3, 4)])
def test_brackets_are_basis_elements(rank, cls):
    F = free_nilpotent_group(rank, cls)
    for j in range(F.size):
        assert F.bracket(j) == F.basis_element(j)


@settings(max_examples=100)
@given(words, words)
def test_collection_is_multiplicative(u, v):
    F = free_nilpotent_group(2, 5)
    assert F.collect(u + v) == F.mul(F.collect(u), F.collect(v))


@given(words, words, words)
def test_group_laws(u, v, w):
    F = free_nilpotent_group(2, 5)
    x, y, z = F.collect(u), F.collect(v), F.collect(w)
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.mul(x, F.inv(x)).is_identity()
    assert nf_inv(nf_inv(x)) == x
    assert nf_pow(x, 3) == F.mul(x, F.mul(x, x))
    assert nf_pow(x, -2) == F.inv(F.mul(x, x))
    assert nf_pow(x, 0).is_identity()
    assert F.comm(x, y) == F.inv(F.comm(y, x))


@given(words)
def test_magnus_image_peels_back(u):
    F = free_nilpotent_group(2, 5)
    x = F.collect(u)
    assert F.peel(F.magnus(x)) == x


def test_magnus_of_generator():
    F = free_nilpotent_group(2, 3)
    assert F.magnus(F.generator("b")) == {(): 1, (1,): 1}


def test_leading_weight_and_layers():
    F = free_nilpotent_group(2, 5)
    assert F.leading_weight(F.identity()) is None
    assert F.leading_weight(F.bracket(8)) == 5
    assert F.layers == {1: (0, 2), 2: (2, 3), 3: (3, 5), 4: (5, 8), 5: (8, 14)}
    assert F.layer_vector(F.basis_element(6), 4) == (0, 1, 0)


def test_class_bound_kills_long_commutators():
    F = free_nilpotent_group(2, 5)
    a, b = F.generator("a"), F.generator("b")
    assert F.comm_many(b, a, a, a, a, a).is_identity()
    assert not F.comm_many(b, a, a, a, a).is_identity()


# -- homomorphisms into concrete groups ---------------------------------------


def _unitriangular(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.triu(rng.integers(0, 7, size=(6, 6)), k=1) + np.eye(6, dtype=np.int64)


def _mat_mul(x, y):
    return (x @ y) % 7


def _mat_inv(x):
    nil = (np.eye(6, dtype=np.int64) - x) % 7
    out = np.eye(6, dtype=np.int64)
    term = np.eye(6, dtype=np.int64)
    for _ in range(5):
        term = _mat_mul(term, nil)
        out = (out + term) % 7
    return out


HOMOMORPHISM_SEEDS = [1, 2, 3, 4, 5]


@pytest.mark.parametrize("seed", HOMOMORPHISM_SEEDS)
@settings(max_examples=100)
@given(words)
def test_evaluation_in_unitriangular_matrices(seed, u):
    F = free_nilpotent_group(2, 5)
    images = [_unitriangular(seed), _unitriangular(seed + 100)]
    expected = np.eye(6, dtype=np.int64)
    for label, e in u:
        g = images["ab".index(label)]
        if e < 0:
            g, e = _mat_inv(g), -e
        for _ in range(e):
            expected = _mat_mul(expected, g)
    got = F.evaluate(F.collect(u), images, _mat_mul, _mat_inv, np.eye(6, dtype=np.int64))
    assert np.array_equal(got, expected)


@pytest.mark.parametrize("name", ["D8", "Q32", "D32", "UT4(2)", "Heis5"])
@settings(max_examples=100)
@given(words, st.integers(min_value=0, max_value=2**32 - 1))
def test_evaluation_in_small_nilpotent_groups(name, u, seed):
    G = get_group(name)
    F = free_nilpotent_group(2, 5)
    images = [int(g) for g in np.random.default_rng(seed).integers(0, G.order, size=2)]
    env = dict(zip("ab", images))
    assert F.evaluate_in(F.collect(u), G, images) == G.evaluate_word(u, env)
