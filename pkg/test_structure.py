"""Tests for subgroup closure, series, subnormality and the two radicals."""

import numpy as np
import pytest

from app.services import claims, engel, structure
from app.services.corpus import default_corpus, get_group
from app.services.structure import (
    baer_radical,
    center,
    centralizer,
    commutator_subgroup,
    conjugacy_classes,
    derived_length,
    derived_series,
    fitting_oracle,
    generate,
    is_closed,
    is_normal,
    is_subnormal,
    left_normed_commutator_trivial,
    lower_central_series,
    nilpotency_class,
    normal_closure,
    subnormal_chain,
    whole_group,
)
from conftest import element_of


def _non_central_involution(G):
    Z = center(G)
    return next(g for g in range(G.order) if G.element_orders[g] == 2 and g not in Z)


def test_generate(S3):
    a, b = element_of(S3, "(1 2)"), element_of(S3, "(1 2 3)")
    assert generate(S3, a).order == 2
    assert generate(S3, b).order == 3
    assert generate(S3, a, b).is_whole()
    assert generate(S3).is_trivial()


def test_generate_is_idempotent(S4):
    H = generate(S4, element_of(S4, "(1 2 3 4)"))
    assert generate(S4, *H.generators) == H
    assert generate(S4, *H.members) == H


def test_centralizer_and_center(S3, Q8):
    b = element_of(S3, "(1 2 3)")
    assert centralizer(S3, [b]).order == 3
    assert centralizer(S3, []).is_whole()
    assert center(S3).is_trivial()
    assert center(Q8).order == 2
    assert center(get_group("C12")).is_whole()


def test_normal_closure(S3):
    a = element_of(S3, "(1 2)")
    b = element_of(S3, "(1 2 3)")
    assert normal_closure(S3, [a]).is_whole()
    assert normal_closure(S3, [b]).order == 3
    assert normal_closure(S3, []).is_trivial()


def test_commutator_subgroups(S4):
    top = whole_group(S4)
    assert commutator_subgroup(S4, top, top).order == 12
    assert commutator_subgroup(get_group("C6"), whole_group(get_group("C6")), whole_group(get_group("C6"))).is_trivial()


@pytest.mark.parametrize(
    "name, orders",
    [("S3", [6, 3]), ("D4", [8, 2, 1]), ("D8", [16, 4, 2, 1]), ("Heis3", [27, 3, 1]), ("C5", [5, 1])],
)
def test_lower_central_series(name, orders):
    assert lower_central_series(whole_group(get_group(name))).orders() == orders


@pytest.mark.parametrize(
    "name, cls",
    [("C1", 0), ("C4", 1), ("Q8", 2), ("D8", 3), ("Q16", 3), ("Q32", 4), ("D32", 5), ("UT4(2)", 3), ("S3", None), ("A5", None)],
)
def test_nilpotency_class(name, cls):
    assert nilpotency_class(whole_group(get_group(name))) == cls


def test_derived_series():
    assert derived_series(whole_group(get_group("S4"))).orders() == [24, 12, 4, 1]
    assert derived_length(whole_group(get_group("S4"))) == 3
    assert derived_length(whole_group(get_group("C6"))) == 1
    assert derived_length(whole_group(get_group("C1"))) == 0
    assert derived_length(whole_group(get_group("S5"))) is None


def test_normality(S3):
    a = element_of(S3, "(1 2)")
    b = element_of(S3, "(1 2 3)")
    assert is_normal(S3, generate(S3, b))
    assert not is_normal(S3, generate(S3, a))


def test_reflection_is_subnormal_but_not_normal():
    G = get_group("D4")
    H = generate(G, _non_central_involution(G))
    assert not is_normal(G, H)
    assert is_subnormal(G, H)
    assert subnormal_chain(G, H).orders() == [8, 4, 2]


def test_transposition_is_not_subnormal_in_s3(S3):
    H = generate(S3, element_of(S3, "(1 2)"))
    assert not is_subnormal(S3, H)
    assert subnormal_chain(S3, H).orders() == [6]


def test_is_closed(S3):
    a = element_of(S3, "(1 2)")
    b = element_of(S3, "(1 2 3)")
    mask = np.zeros(S3.order, dtype=bool)
    mask[[0, a]] = True
    assert is_closed(S3, mask)
    mask = np.zeros(S3.order, dtype=bool)
    mask[[0, b]] = True
    assert not is_closed(S3, mask)


@pytest.mark.parametrize("name, count", [("S3", 3), ("S4", 5), ("A5", 5), ("Q8", 5), ("D4", 5), ("C6", 6)])
def test_conjugacy_classes(name, count):
    G = get_group(name)
    classes = conjugacy_classes(G)
    assert len(classes) == count
    assert sum(len(c) for c in classes) == G.order
    assert [int(c[0]) for c in classes] == sorted(int(c[0]) for c in classes)


@pytest.mark.parametrize("name, order", [("S3", 3), ("S4", 4), ("A4", 4), ("A5", 1), ("D5", 5), ("Q8", 8), ("S3xC4", 12)])
def test_radicals(name, order):
    G = get_group(name)
    assert baer_radical(G).order == order
    assert fitting_oracle(G) == baer_radical(G)


def test_left_normed_commutators(Q8, S3):
    triples = np.indices((8, 8, 8)).reshape(3, -1).T
    assert left_normed_commutator_trivial(Q8, triples).all()
    pairs = np.indices((6, 6)).reshape(2, -1).T
    trivial = left_normed_commutator_trivial(S3, pairs)
    assert trivial.sum() == 18
    assert trivial[0]


@pytest.mark.slow
def test_baer_radical_is_fitting_on_corpus():
    for G in default_corpus():
        assert baer_radical(G) == fitting_oracle(G), G.name


@pytest.mark.parametrize("module", [structure, engel, claims])
def test_group_keyed_caches_are_bounded(module):
    cached = [value for value in vars(module).values() if hasattr(value, "cache_info") and value.__module__ == module.__name__]
    assert cached
    for function in cached:
        assert function.cache_info().maxsize is not None, function.__name__


def test_caches_evict_old_groups():
    size = center.cache_info().maxsize
    center.cache_clear()
    for n in range(1, size + 10):
        center(get_group(f"C{n}"))
    assert center.cache_info().currsize == size
    assert center(get_group("C1")).order == 1
