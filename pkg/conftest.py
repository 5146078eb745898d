"""Shared fixtures for the root test modules."""

import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings

from app.services.corpus import get_group
from app.services.groups import parse_permutation

hypothesis_settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
hypothesis_settings.load_profile("repro")


def element_of(G, cycles: str) -> int:
    """Index of the permutation written in cycle notation."""
    images = np.asarray(parse_permutation(cycles, degree=G.points.shape[1]).array_form)
    matches = np.flatnonzero((G.points == images).all(axis=1))
    assert matches.size == 1, f"{cycles} is not an element of {G.name}"
    return int(matches[0])


@pytest.fixture
def S3():
    return get_group("S3")


@pytest.fixture
def S4():
    return get_group("S4")


@pytest.fixture
def Q8():
    return get_group("Q8")


@pytest.fixture
def A5():
    return get_group("A5")
