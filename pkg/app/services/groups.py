"""
Finite group engine.

Groups are materialized as full multiplication tables over element indices
0..order-1 with the identity at index 0. They are built either by closing a
list of permutation generators or from a validated Cayley table.

Conventions used everywhere in the package:
    [g, h]   = g^-1 h^-1 g h
    g^h      = h^-1 g h
    [g,_n h] = [[g,_{n-1} h], h],  [g,_0 h] = g
Permutations compose left to right: in p*q, p is applied first.
"""

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation

from app.config import settings

logger = logging.getLogger(__name__)

Word = Tuple[Tuple[str, int], ...]


class GroupError(ValueError):
    """Base class for every input or construction error raised by the toolkit."""


class PermutationSyntaxError(GroupError):
    pass


class WordSyntaxError(GroupError):
    pass


class ElementIndexError(GroupError):
    pass


class OrderCapError(GroupError):
    pass


class UnboundLabelError(GroupError):
    pass


class GroupValidationError(GroupError):
    pass


class GenerationError(GroupValidationError):
    pass


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _cycle_points(text: str) -> List[List[int]]:
    """Split cycle notation into 1-based point lists, validating the syntax."""
    stripped = text.strip()
    if not stripped:
        raise PermutationSyntaxError("empty permutation text")

    cycles = []
    pos = 0
    while pos < len(stripped):
        if stripped[pos].isspace():
            pos += 1
            continue
        match = _CYCLE_RE.match(stripped, pos)
        if match is None:
            raise PermutationSyntaxError(f"malformed parentheses at position {pos} in {text!r}")
        tokens = match.group(1).replace(",", " ").split()
        points = []
        for token in tokens:
            if not token.isdigit():
                raise PermutationSyntaxError(f"non-numeric token {token!r} in {text!r}")
            point = int(token)
            if point < 1:
                raise PermutationSyntaxError(f"points are 1-based, got {point} in {text!r}")
            if point in points:
                raise PermutationSyntaxError(f"point {point} repeated within one cycle in {text!r}")
            points.append(point)
        cycles.append(points)
        pos = match.end()
    return cycles


def parse_permutation(text: str, degree: Optional[int] = None) -> Permutation:
    """
    Parse cycle notation such as "(1 2 3)(4 5)" into a sympy Permutation.

    Non-disjoint cycles compose left to right. Points not mentioned are
    fixed. The degree defaults to the largest point mentioned.
    """
    cycles = _cycle_points(text)
    largest = max((p for cycle in cycles for p in cycle), default=1)
    if degree is None:
        degree = largest
    elif largest > degree:
        raise PermutationSyntaxError(f"point {largest} exceeds declared degree {degree}")

    result = Permutation(list(range(degree)))
    for cycle in cycles:
        if len(cycle) > 1:
            result = result * Permutation([[p - 1 for p in cycle]], size=degree)
    return result


def format_permutation(perm: Permutation) -> str:
    """Print in normalized cycle notation: smallest point first, cycles sorted."""
    cycles = []
    for cycle in perm.cyclic_form:
        start = cycle.index(min(cycle))
        cycles.append(cycle[start:] + cycle[:start])
    cycles.sort()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(p + 1) for p in cycle) + ")" for cycle in cycles)


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

_LETTER_RE = re.compile(r"([A-Za-z][0-9]*)(?:\^(?:\{\s*(-?\d+)\s*\}|(-?\d+)))?")


def parse_word(text: str) -> Word:
    """
    Parse a word such as "a^{-1} b^-1 a b" or "abab^-1".

    Labels are a letter followed by optional digits. "1" or an empty string
    denote the empty word.
    """
    stripped = text.strip()
    if stripped in ("", "1"):
        return ()

    letters = []
    pos = 0
    while pos < len(stripped):
        if stripped[pos].isspace() or stripped[pos] == "*":
            pos += 1
            continue
        match = _LETTER_RE.match(stripped, pos)
        if match is None:
            raise WordSyntaxError(f"unexpected {stripped[pos]!r} at position {pos} in word {text!r}")
        exponent = match.group(2) or match.group(3)
        letters.append((match.group(1), int(exponent) if exponent is not None else 1))
        pos = match.end()
    return tuple(letters)


def format_word(word: Word) -> str:
    if not word:
        return "1"
    parts = []
    for label, exponent in word:
        parts.append(label if exponent == 1 else f"{label}^{exponent}")
    return " ".join(parts)


def _compress(letters: Iterable[Tuple[str, int]]) -> Word:
    out: List[Tuple[str, int]] = []
    for label, exponent in letters:
        if out and out[-1][0] == label:
            merged = out[-1][1] + exponent
            out.pop()
            if merged:
                out.append((label, merged))
        elif exponent:
            out.append((label, exponent))
    return tuple(out)


# ---------------------------------------------------------------------------
# FiniteGroup
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """
    Immutable finite group given by its multiplication table.

    Elements are indices; index 0 is the identity. ``generators`` lists
    labeled element indices in a fixed order. ``points`` holds the
    permutation image arrays when the group was built from permutations.
    """

    name: str
    mul_table: np.ndarray
    inv_table: np.ndarray
    generators: Tuple[Tuple[str, int], ...]
    points: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.mul_table.setflags(write=False)
        self.inv_table.setflags(write=False)
        if self.points is not None:
            self.points.setflags(write=False)

    @property
    def order(self) -> int:
        return int(self.mul_table.shape[0])

    @property
    def identity(self) -> int:
        return 0

    @property
    def labels(self) -> Dict[str, int]:
        return dict(self.generators)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    # -- element operations -------------------------------------------------

    def _check(self, *elements: int) -> None:
        for g in elements:
            if not 0 <= g < self.order:
                raise ElementIndexError(f"element index {g} out of range for {self.name} of order {self.order}")

    def mul(self, g: int, h: int) -> int:
        self._check(g, h)
        return int(self.mul_table[g, h])

    def inv(self, g: int) -> int:
        self._check(g)
        return int(self.inv_table[g])

    def conj(self, g: int, h: int) -> int:
        """g^h = h^-1 g h."""
        self._check(g, h)
        mul, inv = self.mul_table, self.inv_table
        return int(mul[inv[h], mul[g, h]])

    def comm(self, g: int, h: int) -> int:
        """[g, h] = g^-1 h^-1 g h."""
        self._check(g, h)
        mul, inv = self.mul_table, self.inv_table
        return int(mul[mul[inv[g], inv[h]], mul[g, h]])

    def comm_many(self, *elements: int) -> int:
        """Left-normed commutator [x1, x2, ..., xk]."""
        if not elements:
            return self.identity
        result = elements[0]
        for x in elements[1:]:
            result = self.comm(result, x)
        return result

    def engel_commutator(self, g: int, x: int, n: int) -> int:
        """[g,_n x]; n = 0 returns g."""
        if n < 0:
            raise GroupError(f"Engel length must be non-negative, got {n}")
        self._check(g, x)
        for _ in range(n):
            g = self.comm(g, x)
        return g

    def power(self, g: int, k: int) -> int:
        self._check(g)
        if k < 0:
            g, k = int(self.inv_table[g]), -k
        result = self.identity
        base = g
        while k:
            if k & 1:
                result = int(self.mul_table[result, base])
            base = int(self.mul_table[base, base])
            k >>= 1
        return result

    def element_order(self, g: int) -> int:
        self._check(g)
        return int(self.element_orders[g])

    def product(self, elements: Iterable[int]) -> int:
        result = self.identity
        for g in elements:
            result = self.mul(result, g)
        return result

    def evaluate_word(self, word: Word, assignment: Optional[Mapping[str, int]] = None) -> int:
        """Left-to-right product of assigned elements raised to the listed exponents."""
        if assignment is None:
            assignment = self.labels
        result = self.identity
        for label, exponent in word:
            if label not in assignment:
                raise UnboundLabelError(f"label {label!r} is not bound (known: {', '.join(sorted(assignment))})")
            result = self.mul(result, self.power(assignment[label], exponent))
        return result

    def element(self, text: str) -> int:
        """Resolve a word in the group's generator labels."""
        return self.evaluate_word(parse_word(text))

    # -- vectorized tables --------------------------------------------------

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        base = np.arange(n)
        cur = base.copy()
        k = 1
        orders[cur == 0] = 1
        while (orders == 0).any():
            cur = self.mul_table[cur, base]
            k += 1
            orders[(cur == 0) & (orders == 0)] = k
        orders.setflags(write=False)
        return orders

    @cached_property
    def comm_table(self) -> np.ndarray:
        """comm_table[g, h] = [g, h] for all pairs."""
        mul, inv = self.mul_table, self.inv_table
        table = mul[mul[inv[:, None], inv[None, :]], mul]
        table.setflags(write=False)
        return table

    @cached_property
    def conj_table(self) -> np.ndarray:
        """conj_table[g, h] = g^h for all pairs."""
        mul, inv = self.mul_table, self.inv_table
        table = mul[inv[None, :], mul]
        table.setflags(write=False)
        return table

    def is_abelian(self) -> bool:
        return bool((self.mul_table == self.mul_table.T).all())

    # -- printing -----------------------------------------------------------

    @cached_property
    def _shortest_words(self) -> List[Word]:
        # breadth-first search over generators and their inverses, in label order
        steps = []
        for label, g in self.generators:
            steps.append((label, 1, g))
            g_inv = int(self.inv_table[g])
            if g_inv != g:
                steps.append((label, -1, g_inv))

        words: List[Optional[Word]] = [None] * self.order
        words[0] = ()
        queue = deque([0])
        while queue:
            current = queue.popleft()
            for label, exponent, g in steps:
                nxt = int(self.mul_table[current, g])
                if words[nxt] is None:
                    words[nxt] = words[current] + ((label, exponent),)
                    queue.append(nxt)

        if any(w is None for w in words):
            raise GenerationError(f"{self.name}: generators do not generate the group")
        return [_compress(w) for w in words]

    def word_of(self, g: int) -> Word:
        """Shortest word in the generators representing g."""
        self._check(g)
        return self._shortest_words[g]

    def format_element(self, g: int) -> str:
        return format_word(self.word_of(g))

    def permutation_of(self, g: int) -> Optional[Permutation]:
        if self.points is None:
            return None
        return Permutation(self.points[g].tolist())


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _default_labels(count: int) -> List[str]:
    if count <= 26:
        return [chr(ord("a") + i) for i in range(count)]
    return [f"g{i + 1}" for i in range(count)]


def close_group(
    gens: Sequence[Permutation],
    cap: Optional[int] = None,
    name: str = "G",
    labels: Optional[Sequence[str]] = None,
) -> FiniteGroup:
    """
    Breadth-first closure of permutation generators into a FiniteGroup.

    Element 0 is the identity; the remaining elements are numbered in
    discovery order, visiting generators in the order given.
    """
    cap = settings.order_cap if cap is None else cap
    if cap < 1:
        raise GroupError(f"order cap must be at least 1, got {cap}")
    if labels is None:
        labels = _default_labels(len(gens))
    if len(labels) != len(gens):
        raise GroupError(f"{len(labels)} labels given for {len(gens)} generators")

    degrees = {g.size for g in gens}
    if len(degrees) > 1:
        raise GroupError(f"generators of {name} have different degrees: {sorted(degrees)}")
    degree = degrees.pop() if degrees else 1

    gen_arrays = [np.asarray(g.array_form, dtype=np.int64) for g in gens]
    identity = np.arange(degree, dtype=np.int64)

    index: Dict[bytes, int] = {identity.tobytes(): 0}
    elements = [identity]
    parent = [-1]
    via = [-1]
    right = [[] for _ in gen_arrays]

    pos = 0
    while pos < len(elements):
        current = elements[pos]
        for k, gen in enumerate(gen_arrays):
            # left-to-right: apply current, then gen
            image = gen[current]
            key = image.tobytes()
            found = index.get(key)
            if found is None:
                found = len(elements)
                if found >= cap:
                    raise OrderCapError(f"order cap {cap} exceeded while closing {name}")
                index[key] = found
                elements.append(image)
                parent.append(pos)
                via.append(k)
            right[k].append(found)
        pos += 1

    n = len(elements)
    right_cols = [np.asarray(r, dtype=np.int64) for r in right]
    mul = np.empty((n, n), dtype=np.int64)
    mul[:, 0] = np.arange(n)
    # element j = parent(j) * gen(via j), so column j is the gen action on column parent(j)
    for j in range(1, n):
        mul[:, j] = right_cols[via[j]][mul[:, parent[j]]]

    inv = mul.argmin(axis=1)
    generators = tuple((label, index[arr.tobytes()]) for label, arr in zip(labels, gen_arrays))
    group = FiniteGroup(name=name, mul_table=mul, inv_table=inv, generators=generators, points=np.array(elements))
    logger.debug(f"Closed {name}: order {n} from {len(gens)} generators on {degree} points")
    return group


def greedy_generators(mul: np.ndarray) -> List[int]:
    """Deterministic generating set: scan indices, keep each element not yet generated."""
    n = mul.shape[0]
    member = np.zeros(n, dtype=bool)
    member[0] = True
    gens: List[int] = []
    for g in range(1, n):
        if member[g]:
            continue
        gens.append(g)
        frontier = np.flatnonzero(member)
        while frontier.size:
            products = np.unique(np.concatenate([mul[frontier][:, gens].ravel(), mul[gens][:, frontier].ravel()]))
            new = products[~member[products]]
            member[new] = True
            frontier = new
    return gens


def group_from_table(
    mul: np.ndarray,
    name: str,
    generators: Optional[Sequence[Tuple[str, int]]] = None,
) -> FiniteGroup:
    """Wrap an already validated table. Generators default to a greedy generating set."""
    mul = np.asarray(mul, dtype=np.int64)
    if generators is None:
        gens = greedy_generators(mul)
        generators = list(zip(_default_labels(len(gens)), gens))
    inv = mul.argmin(axis=1)
    return FiniteGroup(name=name, mul_table=mul, inv_table=inv, generators=tuple(generators))


def check_associative(mul: np.ndarray, exhaustive_limit: Optional[int] = None,
                      samples: Optional[int] = None, seed: Optional[int] = None) -> Optional[Tuple[int, int, int]]:
    """
    Look for a triple (a, b, c) with (ab)c != a(bc).

    Args:
        mul: multiplication table
        exhaustive_limit: orders up to this are checked on every triple
        samples: number of random triples checked above the limit
        seed: sampling seed; defaults to settings.random_seed

    Returns:
        A failing triple, or None
    """
    exhaustive_limit = settings.associativity_exhaustive_limit if exhaustive_limit is None else exhaustive_limit
    samples = settings.associativity_sample_triples if samples is None else samples
    n = mul.shape[0]

    if n <= exhaustive_limit:
        for a in range(n):
            # (a b) c against a (b c) for all b, c
            left = mul[mul[a]]
            right = mul[a][mul]
            bad = np.argwhere(left != right)
            if bad.size:
                b, c = bad[0]
                return a, int(b), int(c)
        return None

    rng = np.random.default_rng(settings.random_seed if seed is None else seed)
    a, b, c = rng.integers(0, n, size=(3, samples))
    bad = np.flatnonzero(mul[mul[a, b], c] != mul[a, mul[b, c]])
    if bad.size:
        i = bad[0]
        return int(a[i]), int(b[i]), int(c[i])
    return None


def validate_group(group: FiniteGroup) -> None:
    """Re-check the table invariants of a built group; raises GroupValidationError."""
    mul = group.mul_table
    n = group.order
    expected = np.arange(n)
    if not (np.sort(mul, axis=1) == expected).all() or not (np.sort(mul, axis=0) == expected[:, None]).all():
        raise GroupValidationError(f"{group.name}: multiplication table is not a Latin square")
    if not (mul[0] == expected).all() or not (mul[:, 0] == expected).all():
        raise GroupValidationError(f"{group.name}: element 0 is not the identity")
    triple = check_associative(mul)
    if triple is not None:
        raise GroupValidationError(f"{group.name}: associativity fails for triple {triple}")
    if (mul[expected, group.inv_table] != 0).any():
        raise GroupValidationError(f"{group.name}: inverse table is inconsistent")
    group.word_of(0)


def load_permutation_file(path, name: str, cap: Optional[int] = None) -> FiniteGroup:
    """
    Load ``name = cycles`` bindings (one per line, '#' comments) and close them.

    The binding names become the generator labels.
    """
    path = Path(path)
    bindings: List[Tuple[str, str]] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PermutationSyntaxError(f"{path.name}:{lineno}: expected 'name = cycles'")
        label, cycles = (part.strip() for part in line.split("=", 1))
        if not re.fullmatch(r"[A-Za-z][0-9]*", label):
            raise PermutationSyntaxError(f"{path.name}:{lineno}: invalid generator name {label!r}")
        if any(label == known for known, _ in bindings):
            raise PermutationSyntaxError(f"{path.name}:{lineno}: generator {label!r} bound twice")
        bindings.append((label, cycles))

    if not bindings:
        raise PermutationSyntaxError(f"{path.name}: no generator bindings found")

    degree = max(
        (int(tok) for _, cycles in bindings for tok in re.findall(r"\d+", cycles)),
        default=1,
    )
    gens = [parse_permutation(cycles, degree=degree) for _, cycles in bindings]
    logger.info(f"Loaded {len(gens)} generators on {degree} points from {path}")
    return close_group(gens, cap=cap, name=name, labels=[label for label, _ in bindings])
