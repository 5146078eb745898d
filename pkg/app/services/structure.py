"""
Subgroup machinery over a FiniteGroup: generation, normal closure,
centralizers, lower central and derived series, subnormality and the
Baer / Fitting radicals of finite groups.

Subgroups are membership bitmasks plus a small generating list. All
functions are pure and cached on (group, mask).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

import numpy as np

from app.services.groups import FiniteGroup, GroupError

logger = logging.getLogger(__name__)


class RadicalError(GroupError):
    """The elements selected for a radical did not form a subgroup."""


@dataclass(frozen=True, eq=False)
class Subgroup:
    group: FiniteGroup
    mask: np.ndarray
    generators: Tuple[int, ...]

    def __post_init__(self):
        self.mask.setflags(write=False)

    @property
    def key(self) -> Tuple[int, bytes]:
        return id(self.group), self.mask.tobytes()

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.group is other.group and bool((self.mask == other.mask).all())

    def __le__(self, other: "Subgroup") -> bool:
        return bool((self.mask <= other.mask).all())

    def __lt__(self, other: "Subgroup") -> bool:
        return self <= other and self.order < other.order

    def __contains__(self, g: int) -> bool:
        return bool(self.mask[g])

    def __repr__(self) -> str:
        return f"Subgroup({self.group.name}, order={self.order})"

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    @property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.group.order

    def is_abelian(self) -> bool:
        idx = self.members
        block = self.group.mul_table[np.ix_(idx, idx)]
        return bool((block == block.T).all())


@dataclass(frozen=True)
class Series:
    """Descending chain of subgroups; terms[0] is the declared top."""

    terms: Tuple[Subgroup, ...]

    def __len__(self) -> int:
        return len(self.terms)

    def orders(self) -> List[int]:
        return [t.order for t in self.terms]

    @property
    def last(self) -> Subgroup:
        return self.terms[-1]


# ---------------------------------------------------------------------------
# Closure primitives
# ---------------------------------------------------------------------------


def _closure_mask(G: FiniteGroup, gens: Iterable[int], start: Optional[np.ndarray] = None) -> np.ndarray:
    """Members of <start, gens> where start is already a subgroup mask."""
    gens = np.asarray(sorted(set(int(g) for g in gens)), dtype=np.int64)
    if start is None:
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
    else:
        mask = start.copy()
    if gens.size == 0:
        return mask

    frontier = np.flatnonzero(mask)
    while frontier.size:
        products = np.unique(G.mul_table[np.ix_(frontier, gens)])
        frontier = products[~mask[products]]
        mask[frontier] = True
    return mask


def _reduce_generators(G: FiniteGroup, candidates: Iterable[int]) -> Tuple[Tuple[int, ...], np.ndarray]:
    """Keep each candidate not already generated by the earlier ones."""
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    kept: List[int] = []
    for c in candidates:
        c = int(c)
        if not mask[c]:
            kept.append(c)
            mask = _closure_mask(G, kept, start=mask)
    return tuple(kept), mask


def _from_candidates(G: FiniteGroup, candidates: Iterable[int]) -> Subgroup:
    gens, mask = _reduce_generators(G, candidates)
    return Subgroup(G, mask, gens)


def _comm_block(G: FiniteGroup, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """All commutators [a, b] for a in left, b in right."""
    mul, inv = G.mul_table, G.inv_table
    a = left[:, None]
    b = right[None, :]
    return mul[mul[inv[a], inv[b]], mul[a, b]]


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    return Subgroup(G, mask, ())


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, np.ones(G.order, dtype=bool), tuple(g for _, g in G.generators))


def subgroup_from_mask(G: FiniteGroup, mask: np.ndarray) -> Subgroup:
    """Wrap a mask that is known to be closed, choosing a small generating set."""
    sub = _from_candidates(G, np.flatnonzero(mask))
    if not (sub.mask == mask).all():
        raise GroupError(f"{G.name}: element set of size {int(mask.sum())} is not a subgroup")
    return sub


def is_closed(G: FiniteGroup, mask: np.ndarray) -> bool:
    idx = np.flatnonzero(mask)
    if not mask[0]:
        return False
    return bool(mask[G.mul_table[np.ix_(idx, idx)]].all())


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def subgroup_generate(G: FiniteGroup, gens: Tuple[int, ...]) -> Subgroup:
    """Least subgroup containing gens."""
    return _from_candidates(G, gens)


def generate(G: FiniteGroup, *gens: int) -> Subgroup:
    return subgroup_generate(G, tuple(int(g) for g in gens))


def normal_closure(G: FiniteGroup, gens: Iterable[int], ambient: Optional[Subgroup] = None) -> Subgroup:
    """Least subgroup containing gens that is normalized by ambient (default: all of G)."""
    return _normal_closure(G, tuple(int(g) for g in gens), ambient)


@lru_cache(maxsize=4096)
def _normal_closure(G: FiniteGroup, gens: Tuple[int, ...], ambient: Optional[Subgroup]) -> Subgroup:
    conjugators = np.asarray(
        ambient.generators if ambient is not None else [g for _, g in G.generators],
        dtype=np.int64,
    )
    kept, mask = _reduce_generators(G, gens)
    kept = list(kept)
    if conjugators.size == 0:
        return Subgroup(G, mask, tuple(kept))

    while True:
        members = np.flatnonzero(mask)
        conjugates = np.unique(G.conj_table[np.ix_(members, conjugators)])
        outside = conjugates[~mask[conjugates]]
        if outside.size == 0:
            return Subgroup(G, mask, tuple(kept))
        for c in outside:
            c = int(c)
            if not mask[c]:
                kept.append(c)
                mask = _closure_mask(G, kept, start=mask)


def centralizer(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    """Elements commuting with every member of S."""
    S = np.asarray(sorted(set(int(s) for s in S)), dtype=np.int64)
    mul = G.mul_table
    if S.size == 0:
        return whole_group(G)
    mask = (mul[:, S] == mul[S, :].T).all(axis=1)
    return subgroup_from_mask(G, mask)


@lru_cache(maxsize=64)
def center(G: FiniteGroup) -> Subgroup:
    mul = G.mul_table
    return subgroup_from_mask(G, (mul == mul.T).all(axis=1))


@lru_cache(maxsize=4096)
def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """<[a, b] : a in A, b in B> over the full member sets."""
    values = np.unique(_comm_block(G, A.members, B.members))
    return _from_candidates(G, values)


@lru_cache(maxsize=4096)
def lower_central_series(H: Subgroup) -> Series:
    """gamma_1 = H, gamma_{i+1} = [gamma_i, H], up to stabilization."""
    terms = [H]
    while not terms[-1].is_trivial():
        nxt = commutator_subgroup(H.group, terms[-1], H)
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    return Series(tuple(terms))


def nilpotency_class(H: Subgroup) -> Optional[int]:
    """Least c with gamma_{c+1} trivial; None when H is not nilpotent. The trivial group has class 0."""
    series = lower_central_series(H)
    if not series.last.is_trivial():
        return None
    return len(series) - 1


@lru_cache(maxsize=4096)
def derived_series(H: Subgroup) -> Series:
    terms = [H]
    while not terms[-1].is_trivial():
        nxt = commutator_subgroup(H.group, terms[-1], terms[-1])
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    return Series(tuple(terms))


def derived_length(H: Subgroup) -> Optional[int]:
    """Number of strict steps down to the trivial group; None when H is not soluble."""
    series = derived_series(H)
    if not series.last.is_trivial():
        return None
    return len(series) - 1


def is_normal(G: FiniteGroup, H: Subgroup, ambient: Optional[Subgroup] = None) -> bool:
    conjugators = np.asarray(
        ambient.generators if ambient is not None else [g for _, g in G.generators], dtype=np.int64
    )
    if conjugators.size == 0:
        return True
    return bool(H.mask[G.conj_table[np.ix_(H.members, conjugators)]].all())


@lru_cache(maxsize=4096)
def subnormal_chain(G: FiniteGroup, H: Subgroup) -> Series:
    """G = H_0 >= H_1 >= ... with H_{i+1} the normal closure of H in H_i."""
    terms = [whole_group(G)]
    while True:
        nxt = normal_closure(G, H.generators, ambient=terms[-1])
        if nxt == terms[-1]:
            return Series(tuple(terms))
        terms.append(nxt)


def is_subnormal(G: FiniteGroup, H: Subgroup) -> bool:
    return subnormal_chain(G, H).last == H


@lru_cache(maxsize=64)
def conjugacy_classes(G: FiniteGroup) -> List[np.ndarray]:
    """Classes in order of their smallest element."""
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for g in range(G.order):
        if seen[g]:
            continue
        cls = np.unique(G.conj_table[g])
        seen[cls] = True
        classes.append(cls)
    return classes


def _radical_from_classes(G: FiniteGroup, predicate, label: str) -> Subgroup:
    # both radical predicates are conjugation invariant, so test one element per class
    mask = np.zeros(G.order, dtype=bool)
    for cls in conjugacy_classes(G):
        if predicate(int(cls[0])):
            mask[cls] = True
    if not is_closed(G, mask):
        raise RadicalError(f"{G.name}: {label} elements do not form a subgroup")
    return subgroup_from_mask(G, mask)


@lru_cache(maxsize=64)
def baer_radical(G: FiniteGroup) -> Subgroup:
    """Elements x with <x> subnormal in G."""
    return _radical_from_classes(G, lambda x: is_subnormal(G, generate(G, x)), "Baer radical")


@lru_cache(maxsize=64)
def fitting_oracle(G: FiniteGroup) -> Subgroup:
    """Elements x whose normal closure in G is nilpotent."""
    return _radical_from_classes(G, lambda x: nilpotency_class(normal_closure(G, [x])) is not None, "Fitting")


def left_normed_commutator_trivial(G: FiniteGroup, elements: np.ndarray) -> np.ndarray:
    """Vectorized [x1, x2, ..., xk] == 1 over rows of an (m, k) index array."""
    mul, inv = G.mul_table, G.inv_table
    cur = elements[:, 0]
    for j in range(1, elements.shape[1]):
        x = elements[:, j]
        cur = mul[mul[inv[cur], inv[x]], mul[cur, x]]
    return cur == 0
