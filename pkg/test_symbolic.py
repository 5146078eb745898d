"""Tests for subgroup saturation and the symbolic Engel relator check."""

import pytest

from app.services.collector import (
    CollectorError,
    ResourceCapError,
    engel_relator_instances,
    free_nilpotent_group,
    reduced_words,
    saturate,
    theorem2_symbolic,
)


def test_reduced_words():
    assert reduced_words(0) == [()]
    assert len(reduced_words(1)) == 5
    assert len(reduced_words(2)) == 17
    assert reduced_words(1)[1:] == [(("a", 1),), (("b", 1),), (("a", -1),), (("b", -1),)]
    assert (("a", 1), ("a", -1)) not in reduced_words(2)


def test_empty_saturation():
    F = free_nilpotent_group(2, 5)
    assert saturate(F, []).layer_indices() == (None,) * 5
    assert saturate(F, [F.identity()]).layer_indices() == (None,) * 5


def test_generators_saturate_to_everything():
    F = free_nilpotent_group(2, 5)
    saturation = saturate(F, [F.generator("a"), F.generator("b")])
    assert saturation.layer_indices() == (1, 1, 1, 1, 1)


def test_finite_index_subgroup():
    F = free_nilpotent_group(2, 4)
    a, b = F.generator("a"), F.generator("b")
    indices = saturate(F, [F.pow(a, 2), b]).layer_indices()
    assert indices[0] == 2
    assert all(i is not None and i >= 1 for i in indices)


def test_saturation_tags_lie_in_the_subgroup_layers():
    F = free_nilpotent_group(2, 5)
    a, b = F.generator("a"), F.generator("b")
    saturation = saturate(F, [F.comm(b, a), F.pow(F.comm_many(b, a, a), 3)])
    assert saturation.layer_indices()[:3] == (None, 1, None)
    for tag in saturation.tags():
        assert F.leading_weight(tag) >= 2


def test_relator_instances():
    instances = engel_relator_instances(1, 0)
    assert len(instances) == 4
    assert all(not x.is_identity() for x in instances)
    assert len({x.exponents for x in instances}) == len(instances)
    F = free_nilpotent_group(2, 5)
    assert all(F.leading_weight(x) == 4 for x in instances)


def test_resource_cap():
    with pytest.raises(ResourceCapError, match="cap"):
        engel_relator_instances(2, 2, cap=10)
    with pytest.raises(ResourceCapError):
        theorem2_symbolic(2, 2, cap=100)


def test_negative_lengths():
    with pytest.raises(CollectorError):
        theorem2_symbolic(-1, 0)


def test_no_instances_is_inconclusive():
    verdict = theorem2_symbolic(0, 3)
    assert verdict.instance_count == 0
    assert verdict.layer_indices == (None,) * 5
    assert not verdict.verified


def test_single_letters_are_inconclusive():
    verdict = theorem2_symbolic(1, 0)
    assert verdict.status == "Inconclusive"
    assert verdict.layer_indices[4] is None
    assert verdict.instance_count == 4
    assert verdict.format().startswith("Inconclusive (L=1, C=0, 4 relator instances;")
    assert "w5=infinite" in verdict.format()


def _as_number(index):
    return float("inf") if index is None else index


def test_more_instances_never_grow_the_index():
    small = theorem2_symbolic(1, 0)
    large = theorem2_symbolic(1, 1)
    assert large.instance_count >= small.instance_count
    for before, after in zip(small.layer_indices, large.layer_indices):
        assert _as_number(after) <= _as_number(before)


def test_short_relators_kill_the_fifth_layer():
    verdict = theorem2_symbolic(1, 1)
    assert verdict.instance_count == 20
    assert verdict.verified
    assert verdict.status == "Verified"
    assert verdict.layer_indices[4] == 1


def test_one_conjugation_step_is_the_smallest_verified_pair():
    for instance_len, conj_len in [(0, 0), (0, 4), (1, 0)]:
        assert not theorem2_symbolic(instance_len, conj_len).verified
    assert theorem2_symbolic(1, 1).verified
    assert theorem2_symbolic(2, 1).verified
