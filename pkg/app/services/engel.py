"""
Left and right n-Engel sets.

The defining quantifier over all of G is the primary computation
(vectorized over the full commutator table). The characterizations of
L_2 and L_3 are independent constructions that the claim registry
compares against it.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from app.services.groups import FiniteGroup, GroupError
from app.services.structure import conjugacy_classes, generate, nilpotency_class, normal_closure

logger = logging.getLogger(__name__)

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True, eq=False)
class EngelSet:
    """Membership bitmask; not necessarily a subgroup."""

    group: FiniteGroup
    side: str
    n: int
    mask: np.ndarray

    def __post_init__(self):
        self.mask.setflags(write=False)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __repr__(self) -> str:
        return f"EngelSet({self.group.name}, {self.side}, n={self.n}, size={len(self)})"

    @property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def same_members(self, other: "EngelSet") -> bool:
        return self.group is other.group and bool((self.mask == other.mask).all())

    def issubset(self, other: "EngelSet") -> bool:
        return bool((self.mask <= other.mask).all())


def _check_n(n: int) -> None:
    if n < 0:
        raise GroupError(f"Engel length must be non-negative, got {n}")


@lru_cache(maxsize=256)
def engel_matrix(G: FiniteGroup, n: int) -> np.ndarray:
    """engel_matrix(G, n)[g, x] = [g,_n x]."""
    if n == 0:
        matrix = np.broadcast_to(np.arange(G.order)[:, None], (G.order, G.order)).copy()
    else:
        matrix = G.comm_table[engel_matrix(G, n - 1), np.arange(G.order)[None, :]]
    matrix.setflags(write=False)
    return matrix


def left_engel_set(G: FiniteGroup, n: int) -> EngelSet:
    """{x : [g,_n x] = 1 for every g}; n = 0 gives the identity alone."""
    _check_n(n)
    if n == 0:
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
    else:
        mask = (engel_matrix(G, n) == 0).all(axis=0)
    return EngelSet(G, LEFT, n, mask)


def right_engel_set(G: FiniteGroup, n: int) -> EngelSet:
    """{x : [x,_n g] = 1 for every g}."""
    _check_n(n)
    mask = (engel_matrix(G, n) == 0).all(axis=1)
    return EngelSet(G, RIGHT, n, mask)


def engel_set(G: FiniteGroup, side: str, n: int) -> EngelSet:
    if side == LEFT:
        return left_engel_set(G, n)
    if side == RIGHT:
        return right_engel_set(G, n)
    raise GroupError(f"side must be 'left' or 'right', got {side!r}")


def is_left_n_engel(G: FiniteGroup, x: int, n: int) -> bool:
    _check_n(n)
    G._check(x)
    if n == 0:
        return x == G.identity
    mul, inv = G.mul_table, G.inv_table
    cur = np.arange(G.order)
    for _ in range(n):
        cur = mul[mul[inv[cur], inv[x]], mul[cur, x]]
    return bool((cur == 0).all())


def is_right_n_engel(G: FiniteGroup, x: int, n: int) -> bool:
    _check_n(n)
    G._check(x)
    mul, inv = G.mul_table, G.inv_table
    g = np.arange(G.order)
    cur = np.full(G.order, x)
    for _ in range(n):
        cur = mul[mul[inv[cur], inv[g]], mul[cur, g]]
    return bool((cur == 0).all())


@lru_cache(maxsize=64)
def l2_characterization(G: FiniteGroup) -> EngelSet:
    """{x : the normal closure of x is abelian}."""
    mask = np.zeros(G.order, dtype=bool)
    for cls in conjugacy_classes(G):
        if normal_closure(G, [int(cls[0])]).is_abelian():
            mask[cls] = True
    return EngelSet(G, LEFT, 2, mask)


def pair_class_at_most_two(G: FiniteGroup, x: int, z: int) -> bool:
    cls = nilpotency_class(generate(G, *sorted((x, z))))
    return cls is not None and cls <= 2


def l3_witness(G: FiniteGroup, x: int):
    """A conjugate z = x^y with <x, z> outside N_2, or None."""
    for z in np.unique(G.conj_table[x]):
        if not pair_class_at_most_two(G, x, int(z)):
            return int(z)
    return None


@lru_cache(maxsize=64)
def l3_characterization(G: FiniteGroup) -> EngelSet:
    """{x : <x, x^y> is nilpotent of class at most 2 for every y}."""
    mask = np.zeros(G.order, dtype=bool)
    for cls in conjugacy_classes(G):
        if l3_witness(G, int(cls[0])) is None:
            mask[cls] = True
    logger.debug(f"{G.name}: L_3 characterization has {int(mask.sum())} members")
    return EngelSet(G, LEFT, 3, mask)
