"""
Free nilpotent groups of small rank and class via Hall basic commutators.

Elements are normal forms u_1^e_1 u_2^e_2 ... u_n^e_n over the Hall basis
(ordered by weight, then by (left, right) id). Products are computed by
collection from the left using conjugation rules u_j^(u_i^+-1) for basis
pairs of total weight at most the class. The rules are derived once from
the Magnus embedding x_i -> 1 + X_i into the truncated free associative
algebra over Z, where the free nilpotent group embeds faithfully.

``saturate`` computes the layer lattices (S n gamma_w) gamma_{w+1} / gamma_{w+1}
of the subgroup S generated by a list of elements, by sifting through one
tagged integer echelon per weight and closing under commutators.
``theorem2_symbolic`` applies it to instances of the relators [g, t, t, t].
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, binomial

from app.config import settings
from app.services.groups import GroupError, UnboundLabelError, Word, parse_word
from app.services.lattice import Echelon

logger = logging.getLogger(__name__)

MAX_RANK = 3
MAX_CLASS = 5
GENERATOR_LABELS = "abc"


class CollectorError(GroupError):
    pass


class ResourceCapError(GroupError):
    pass


@dataclass(frozen=True)
class BasicCommutator:
    id: int
    weight: int
    left: Optional[int]
    right: Optional[int]
    label: str

    @property
    def is_generator(self) -> bool:
        return self.left is None


def _check_range(rank: int, cls: int) -> None:
    if not 1 <= rank <= MAX_RANK:
        raise CollectorError(f"rank must be in 1..{MAX_RANK}, got {rank}")
    if not 1 <= cls <= MAX_CLASS:
        raise CollectorError(f"class must be in 1..{MAX_CLASS}, got {cls}")


def _bracket_label(left: BasicCommutator, right: BasicCommutator) -> str:
    # left-normed brackets are flattened: [[b,a],a] prints as [b,a,a]
    if right.is_generator and not left.is_generator:
        return left.label[:-1] + "," + right.label + "]"
    return f"[{left.label},{right.label}]"


@lru_cache(maxsize=None)
def hall_basis(rank: int, cls: int) -> Tuple[BasicCommutator, ...]:
    """
    Basic commutators of weight <= cls on rank generators.

    [x, y] is basic when x, y are basic, x > y, and when x = [x1, x2]
    also x2 <= y. Within a weight, commutators are ordered by (x, y).
    """
    _check_range(rank, cls)
    basis = [BasicCommutator(i, 1, None, None, GENERATOR_LABELS[i]) for i in range(rank)]
    by_weight: Dict[int, List[BasicCommutator]] = {1: list(basis)}

    for weight in range(2, cls + 1):
        candidates = []
        for left_weight in range(1, weight):
            for x in by_weight[left_weight]:
                for y in by_weight[weight - left_weight]:
                    if x.id <= y.id:
                        continue
                    if not x.is_generator and basis[x.right].id > y.id:
                        continue
                    candidates.append((x.id, y.id))
        candidates.sort()
        layer = []
        for x_id, y_id in candidates:
            u = BasicCommutator(len(basis), weight, x_id, y_id, _bracket_label(basis[x_id], basis[y_id]))
            basis.append(u)
            layer.append(u)
        by_weight[weight] = layer
    return tuple(basis)


@dataclass(frozen=True)
class NormalForm:
    rank: int
    nilpotency_class: int
    exponents: Tuple[int, ...]

    def is_identity(self) -> bool:
        return not any(self.exponents)

    def format(self) -> str:
        basis = hall_basis(self.rank, self.nilpotency_class)
        parts = []
        for u, e in zip(basis, self.exponents):
            if e:
                parts.append(u.label if e == 1 else f"{u.label}^{e}")
        return " ".join(parts) if parts else "1"

    def __str__(self) -> str:
        return self.format()


# ---------------------------------------------------------------------------
# Truncated free associative algebra: dict monomial -> coefficient
# ---------------------------------------------------------------------------

Series = Dict[Tuple[int, ...], int]

_ONE: Series = {(): 1}


def _alg_mul(x: Series, y: Series, degree: int) -> Series:
    out: Series = {}
    for m1, c1 in x.items():
        room = degree - len(m1)
        for m2, c2 in y.items():
            if len(m2) > room:
                continue
            m = m1 + m2
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _alg_pow(x: Series, e: int, degree: int) -> Series:
    """(1 + N)^e = sum_j binom(e, j) N^j, valid for every integer e."""
    nil = {m: c for m, c in x.items() if m}
    out: Series = dict(_ONE)
    term: Series = dict(_ONE)
    for j in range(1, degree + 1):
        term = _alg_mul(term, nil, degree)
        if not term:
            break
        coeff = int(binomial(e, j))
        if coeff:
            for m, c in term.items():
                out[m] = out.get(m, 0) + coeff * c
    return {m: c for m, c in out.items() if c}


# ---------------------------------------------------------------------------
# Free nilpotent group
# ---------------------------------------------------------------------------


class FreeNilpotentGroup:
    def __init__(self, rank: int, cls: int):
        _check_range(rank, cls)
        self.rank = rank
        self.cls = cls
        self.basis = hall_basis(rank, cls)
        self.size = len(self.basis)
        self.weights = [u.weight for u in self.basis]
        self.layers: Dict[int, Tuple[int, int]] = {}
        for w in range(1, cls + 1):
            ids = [u.id for u in self.basis if u.weight == w]
            self.layers[w] = (ids[0], ids[-1] + 1) if ids else (0, 0)

        self._magnus: List[Series] = []
        self._magnus_inv: List[Series] = []
        for u in self.basis:
            if u.is_generator:
                image = {(): 1, (u.id,): 1}
            else:
                x, y = self._magnus[u.left], self._magnus[u.right]
                x_inv, y_inv = self._magnus_inv[u.left], self._magnus_inv[u.right]
                image = self._amul(self._amul(x_inv, y_inv), self._amul(x, y))
            self._magnus.append(image)
            self._magnus_inv.append(_alg_pow(image, -1, cls))

        self._solvers: Dict[int, tuple] = {}
        self._rules: Dict[Tuple[int, int, int], Tuple[int, ...]] = {}
        logger.debug(f"Free nilpotent group rank {rank} class {cls}: {self.size} basic commutators")

    def __repr__(self) -> str:
        return f"FreeNilpotentGroup(rank={self.rank}, class={self.cls})"

    def _amul(self, x: Series, y: Series) -> Series:
        return _alg_mul(x, y, self.cls)

    # -- Magnus embedding ----------------------------------------------------

    def magnus(self, x: NormalForm) -> Series:
        self._own(x)
        out = dict(_ONE)
        for j, e in enumerate(x.exponents):
            if e:
                out = self._amul(out, _alg_pow(self._magnus[j], e, self.cls))
        return out

    def _solver(self, w: int):
        if w not in self._solvers:
            start, stop = self.layers[w]
            monomials = list(product(range(self.rank), repeat=w))
            matrix = Matrix([[self._magnus[j].get(m, 0) for j in range(start, stop)] for m in monomials])
            _, pivots = matrix.T.rref()
            square = matrix.extract(list(pivots), list(range(stop - start)))
            self._solvers[w] = (monomials, matrix, list(pivots), square.inv())
        return self._solvers[w]

    def peel(self, series: Series) -> NormalForm:
        """Read off Hall exponents of a Magnus image, one weight layer at a time."""
        exponents = [0] * self.size
        cur = series
        for w in range(1, self.cls + 1):
            start, stop = self.layers[w]
            if start == stop:
                continue
            monomials, matrix, pivots, inverse = self._solver(w)
            layer = Matrix([cur.get(m, 0) for m in monomials])
            if not any(layer):
                continue
            solution = inverse * layer.extract(pivots, [0])
            if any(not v.is_integer for v in solution) or matrix * solution != layer:
                raise CollectorError(f"weight {w} layer is not in the Hall lattice")
            strip = dict(_ONE)
            for offset, value in enumerate(solution):
                value = int(value)
                exponents[start + offset] = value
                if value:
                    strip = self._amul(strip, _alg_pow(self._magnus[start + offset], value, self.cls))
            cur = self._amul(_alg_pow(strip, -1, self.cls), cur)
        if cur != _ONE:
            raise CollectorError("Magnus image did not peel to the identity")
        return self._wrap(exponents)

    # -- conjugation rules ---------------------------------------------------

    def _conj_image(self, j: int, i: int, k: int) -> Tuple[int, ...]:
        """Exponents of u_j^(u_i^k) for i < j; supported on ids > i."""
        key = (j, i, k)
        cached = self._rules.get(key)
        if cached is not None:
            return cached
        if k == 1:
            image = self.peel(self._amul(self._amul(self._magnus_inv[i], self._magnus[j]), self._magnus[i])).exponents
        elif k == -1:
            image = self.peel(self._amul(self._amul(self._magnus[i], self._magnus[j]), self._magnus_inv[i])).exponents
        else:
            half = k // 2 if k > 0 else -((-k) // 2)
            first = self._conj_image(j, i, half)
            image = tuple(self._conj_tail([(l, e) for l, e in enumerate(first) if e], i, k - half))
        self._rules[key] = image
        return image

    def _conj_tail(self, tail: Sequence[Tuple[int, int]], i: int, k: int) -> List[int]:
        out = [0] * self.size
        for j, e in tail:
            if self.weights[i] + self.weights[j] > self.cls:
                out = self._mul_power(out, j, e)
            else:
                out = self._mul(out, list(self._pow(tuple(self._conj_image(j, i, k)), e)))
        return out

    # -- collection ----------------------------------------------------------

    def _mul_power(self, x: Sequence[int], i: int, k: int) -> List[int]:
        """x * u_i^k: keep the prefix, add k at i, conjugate the tail by u_i^k."""
        if k == 0:
            return list(x)
        result = list(x[: i + 1]) + [0] * (self.size - i - 1)
        result[i] += k
        tail = [(j, x[j]) for j in range(i + 1, self.size) if x[j]]
        if tail:
            conjugated = self._conj_tail(tail, i, k)
            result[i + 1:] = conjugated[i + 1:]
        return result

    def _mul(self, x: Sequence[int], y: Sequence[int]) -> List[int]:
        out = list(x)
        for j, e in enumerate(y):
            if e:
                out = self._mul_power(out, j, e)
        return out

    def _inv(self, x: Sequence[int]) -> List[int]:
        out = [0] * self.size
        for j in range(self.size - 1, -1, -1):
            if x[j]:
                out = self._mul_power(out, j, -x[j])
        return out

    @lru_cache(maxsize=65536)
    def _pow(self, x: Tuple[int, ...], e: int) -> Tuple[int, ...]:
        if e < 0:
            x, e = tuple(self._inv(x)), -e
        out = [0] * self.size
        base = list(x)
        while e:
            if e & 1:
                out = self._mul(out, base)
            e >>= 1
            if e:
                base = self._mul(base, base)
        return tuple(out)

    # -- public operations on normal forms -----------------------------------

    def _wrap(self, exponents: Sequence[int]) -> NormalForm:
        return NormalForm(self.rank, self.cls, tuple(int(e) for e in exponents))

    def _own(self, *forms: NormalForm) -> None:
        for x in forms:
            if x.rank != self.rank or x.nilpotency_class != self.cls:
                raise CollectorError(
                    f"normal form of rank {x.rank} class {x.nilpotency_class} used in rank {self.rank} class {self.cls}"
                )
            if len(x.exponents) != self.size:
                raise CollectorError(f"normal form has {len(x.exponents)} exponents, expected {self.size}")

    def identity(self) -> NormalForm:
        return self._wrap([0] * self.size)

    def basis_element(self, j: int) -> NormalForm:
        exponents = [0] * self.size
        exponents[j] = 1
        return self._wrap(exponents)

    def generator(self, label: str) -> NormalForm:
        return self.basis_element(self._generator_id(label))

    def _generator_id(self, label: str) -> int:
        labels = GENERATOR_LABELS[: self.rank]
        if len(label) != 1 or label not in labels:
            raise UnboundLabelError(f"label {label!r} is not a generator of the rank {self.rank} free group ({', '.join(labels)})")
        return labels.index(label)

    def collect(self, word: Union[str, Word]) -> NormalForm:
        """Collect a word in a, b, c into normal form, from the left."""
        if isinstance(word, str):
            word = parse_word(word)
        out = [0] * self.size
        for label, e in word:
            out = self._mul_power(out, self._generator_id(label), e)
        return self._wrap(out)

    def mul(self, x: NormalForm, y: NormalForm) -> NormalForm:
        self._own(x, y)
        return self._wrap(self._mul(x.exponents, y.exponents))

    def inv(self, x: NormalForm) -> NormalForm:
        self._own(x)
        return self._wrap(self._inv(x.exponents))

    def pow(self, x: NormalForm, e: int) -> NormalForm:
        self._own(x)
        return self._wrap(self._pow(x.exponents, int(e)))

    def comm(self, x: NormalForm, y: NormalForm) -> NormalForm:
        """[x, y] = x^-1 y^-1 x y."""
        self._own(x, y)
        xe, ye = x.exponents, y.exponents
        return self._wrap(self._mul(self._mul(self._inv(xe), self._inv(ye)), self._mul(xe, ye)))

    def conj(self, x: NormalForm, y: NormalForm) -> NormalForm:
        """x^y = y^-1 x y."""
        self._own(x, y)
        ye = y.exponents
        return self._wrap(self._mul(self._inv(ye), self._mul(x.exponents, ye)))

    def comm_many(self, *forms: NormalForm) -> NormalForm:
        out = forms[0]
        for f in forms[1:]:
            out = self.comm(out, f)
        return out

    def bracket(self, j: int) -> NormalForm:
        """The basic commutator u_j computed as a bracket of its components."""
        u = self.basis[j]
        if u.is_generator:
            return self.basis_element(j)
        return self.comm(self.bracket(u.left), self.bracket(u.right))

    def leading_weight(self, x: NormalForm) -> Optional[int]:
        for j, e in enumerate(x.exponents):
            if e:
                return self.weights[j]
        return None

    def layer_vector(self, x: NormalForm, w: int) -> Tuple[int, ...]:
        start, stop = self.layers[w]
        return x.exponents[start:stop]

    def evaluate(self, x: NormalForm, images: Sequence, mul, inv, one):
        """
        Image of x under the homomorphism sending generator i to images[i],
        given the target group's multiplication, inversion and identity.
        """
        self._own(x)
        values = []
        for u in self.basis:
            if u.is_generator:
                values.append(images[u.id])
            else:
                g, h = values[u.left], values[u.right]
                values.append(mul(mul(inv(g), inv(h)), mul(g, h)))

        def power(g, e):
            if e < 0:
                g, e = inv(g), -e
            out = one
            for _ in range(e):
                out = mul(out, g)
            return out

        out = one
        for value, e in zip(values, x.exponents):
            if e:
                out = mul(out, power(value, e))
        return out

    def evaluate_in(self, x: NormalForm, G, images: Sequence[int]) -> int:
        """evaluate() into a FiniteGroup."""
        return self.evaluate(x, images, G.mul, G.inv, G.identity)


@lru_cache(maxsize=None)
def free_nilpotent_group(rank: int, cls: int) -> FreeNilpotentGroup:
    return FreeNilpotentGroup(rank, cls)


def _group_of(x: NormalForm) -> FreeNilpotentGroup:
    return free_nilpotent_group(x.rank, x.nilpotency_class)


def _same_group(x: NormalForm, y: NormalForm) -> FreeNilpotentGroup:
    if (x.rank, x.nilpotency_class) != (y.rank, y.nilpotency_class):
        raise CollectorError(
            f"rank/class mismatch: ({x.rank}, {x.nilpotency_class}) against ({y.rank}, {y.nilpotency_class})"
        )
    return _group_of(x)


def collect(word: Union[str, Word], rank: int, cls: int) -> NormalForm:
    return free_nilpotent_group(rank, cls).collect(word)


def nf_mul(x: NormalForm, y: NormalForm) -> NormalForm:
    return _same_group(x, y).mul(x, y)


def nf_inv(x: NormalForm) -> NormalForm:
    return _group_of(x).inv(x)


def nf_comm(x: NormalForm, y: NormalForm) -> NormalForm:
    return _same_group(x, y).comm(x, y)


def nf_conj(x: NormalForm, y: NormalForm) -> NormalForm:
    return _same_group(x, y).conj(x, y)


def nf_pow(x: NormalForm, e: int) -> NormalForm:
    return _group_of(x).pow(x, e)


# ---------------------------------------------------------------------------
# Subgroup saturation
# ---------------------------------------------------------------------------


class Saturation:
    """Induced sequence of the subgroup generated by the added elements, one echelon per weight."""

    def __init__(self, group: FreeNilpotentGroup):
        self.group = group
        self.layers: Dict[int, Echelon[NormalForm]] = {}
        for w in range(1, group.cls + 1):
            start, stop = group.layers[w]
            self.layers[w] = Echelon(stop - start, combine=self._combine)
        self._seen = set()
        self.sifted = 0

    def _combine(self, t1: NormalForm, c1: int, t2: Optional[NormalForm], c2: int) -> NormalForm:
        out = self.group.pow(t1, c1)
        if t2 is not None and c2:
            out = self.group.mul(out, self.group.pow(t2, c2))
        return out

    def tags(self) -> List[NormalForm]:
        return [t for w in sorted(self.layers) for t in self.layers[w].tags()]

    def add(self, elements: Sequence[NormalForm]) -> "Saturation":
        queue = deque(elements)
        while queue:
            g = queue.popleft()
            if g.is_identity() or g.exponents in self._seen:
                continue
            self._seen.add(g.exponents)
            self.sifted += 1
            while g is not None and not g.is_identity():
                w = self.group.leading_weight(g)
                insertion = self.layers[w].insert(self.group.layer_vector(g, w), g)
                for h in insertion.changed:
                    for t in self.tags():
                        c = self.group.comm(h, t)
                        if not c.is_identity():
                            queue.append(c)
                queue.extend(insertion.displaced)
                g = insertion.residue
            if self.sifted % 200 == 0:
                logger.debug(f"Saturation: {self.sifted} elements sifted, {len(queue)} queued")
        return self

    def layer_indices(self) -> Tuple[Optional[int], ...]:
        return tuple(self.layers[w].index() for w in sorted(self.layers))


def saturate(group: FreeNilpotentGroup, elements: Sequence[NormalForm]) -> Saturation:
    return Saturation(group).add(elements)


# ---------------------------------------------------------------------------
# Engel relators in the free nilpotent group of rank 2 and class 5
# ---------------------------------------------------------------------------

ALPHABET: Tuple[Tuple[str, int], ...] = (("a", 1), ("b", 1), ("a", -1), ("b", -1))


def reduced_words(max_len: int) -> List[Word]:
    """Reduced words in a, b, a^-1, b^-1 ordered by length, then lexicographically in that letter order."""
    words: List[Word] = [()]
    layer: List[Word] = [()]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for letter in ALPHABET:
                if w and w[-1][0] == letter[0] and w[-1][1] == -letter[1]:
                    continue
                nxt.append(w + (letter,))
        words.extend(nxt)
        layer = nxt
    return words


@dataclass(frozen=True)
class SymbolicVerdict:
    verified: bool
    layer_indices: Tuple[Optional[int], ...]
    instance_len: int
    conj_len: int
    instance_count: int

    @property
    def status(self) -> str:
        return "Verified" if self.verified else "Inconclusive"

    def format(self) -> str:
        layers = ", ".join(
            f"w{w}={'infinite' if idx is None else idx}" for w, idx in enumerate(self.layer_indices, start=1)
        )
        return (
            f"{self.status} (L={self.instance_len}, C={self.conj_len}, "
            f"{self.instance_count} relator instances; layer indices {layers})"
        )


def engel_relator_instances(instance_len: int, conj_len: int, cap: Optional[int] = None) -> List[NormalForm]:
    """Distinct nontrivial [g, t, t, t]^w for t in {a, b}, |g| <= instance_len, |w| <= conj_len."""
    cap = settings.theorem2_instance_cap if cap is None else cap
    F = free_nilpotent_group(2, 5)
    words = reduced_words(instance_len)
    conjugators = reduced_words(conj_len)
    raw = 2 * len(words) * len(conjugators)
    if raw > cap:
        raise ResourceCapError(f"{raw} relator instances for L={instance_len}, C={conj_len} exceed the cap of {cap}")

    t_forms = [F.generator("a"), F.generator("b")]
    conj_forms = [F.collect(w) for w in conjugators]
    instances: List[NormalForm] = []
    seen = set()
    for w in words:
        g = F.collect(w)
        for t in t_forms:
            relator = F.comm_many(g, t, t, t)
            if relator.is_identity():
                continue
            for c in conj_forms:
                instance = F.conj(relator, c)
                if instance.exponents not in seen:
                    seen.add(instance.exponents)
                    instances.append(instance)
    return instances


def theorem2_symbolic(instance_len: int, conj_len: int, cap: Optional[int] = None) -> SymbolicVerdict:
    """
    Saturate the Engel relator instances in the free group of rank 2 and class 5.

    Verified iff the weight-5 layer of the subgroup generated by the relator
    instances has index 1, i.e. gamma_5 dies modulo the Engel relators.

    Args:
        instance_len: longest reduced word g in the relators [g, t, t, t]
        conj_len: longest reduced conjugating word
        cap: relator instance cap; defaults to settings.theorem2_instance_cap

    Returns:
        SymbolicVerdict with per-layer indices and the instance count
    """
    if instance_len < 0 or conj_len < 0:
        raise CollectorError(f"instance and conjugator lengths must be non-negative, got L={instance_len}, C={conj_len}")
    F = free_nilpotent_group(2, 5)
    instances = engel_relator_instances(instance_len, conj_len, cap=cap)
    logger.info(f"Saturating {len(instances)} relator instances (L={instance_len}, C={conj_len})")
    saturation = saturate(F, instances)
    indices = saturation.layer_indices()
    verdict = SymbolicVerdict(
        verified=indices[-1] == 1,
        layer_indices=indices,
        instance_len=instance_len,
        conj_len=conj_len,
        instance_count=len(instances),
    )
    logger.info(f"theorem2-sym: {verdict.format()}")
    return verdict
