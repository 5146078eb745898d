"""
Claim registry.

Every registered claim is a statement about left/right Engel elements that
can be checked on a single finite group. A check returns a status
("pass", "fail" or "info") plus an optional witness map; failing checks
always name the offending elements as words in the group's generators.

Quantifiers over pairs use one representative per conjugacy class for the
first element, since every statement here is invariant under simultaneous
conjugation. The reduced pair set is run in full for groups up to
``settings.pair_exhaustive_limit`` elements and sampled above; the sample
size is recorded in the witness.
"""

import logging
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel
from sympy import factorint

from app.config import settings
from app.services.engel import (
    engel_matrix,
    l2_characterization,
    l3_characterization,
    left_engel_set,
    pair_class_at_most_two,
    right_engel_set,
)
from app.services.exponent import eval_exponent, parse_exponent
from app.services.groups import FiniteGroup, GroupError
from app.services.structure import (
    baer_radical,
    center,
    commutator_subgroup,
    conjugacy_classes,
    derived_length,
    fitting_oracle,
    generate,
    is_closed,
    nilpotency_class,
    normal_closure,
)

logger = logging.getLogger(__name__)

Status = Literal["pass", "fail", "info"]
Witness = Optional[Dict[str, str]]
Outcome = Tuple[Status, Witness]


class UnknownClaimError(GroupError):
    pass


class ClaimResult(BaseModel):
    claim: str
    group: str
    status: Status
    witness: Optional[Dict[str, str]] = None
    ms: int = 0


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    kind: str
    check: Callable[[FiniteGroup], Outcome]

    @property
    def informational(self) -> bool:
        return self.kind == "informational"


_REGISTRY: Dict[str, Claim] = {}


def claim(claim_id: str, statement: str, kind: str):
    """Register a check function under a stable claim id."""

    def decorator(func: Callable[[FiniteGroup], Outcome]):
        if claim_id in _REGISTRY:
            raise ValueError(f"claim {claim_id} registered twice")
        _REGISTRY[claim_id] = Claim(claim_id, statement, kind, func)
        return func

    return decorator


def all_claims() -> List[Claim]:
    return [_REGISTRY[k] for k in sorted(_REGISTRY)]


def get_claim(claim_id: str) -> Claim:
    try:
        return _REGISTRY[claim_id]
    except KeyError:
        raise UnknownClaimError(f"unknown claim {claim_id!r} (known: {', '.join(sorted(_REGISTRY))})")


def run_claim(claim_id: str, G: FiniteGroup, timings: bool = False) -> ClaimResult:
    """
    Run one registered claim on one group.

    Args:
        claim_id: registry id such as CHK-09
        G: group to check
        timings: keep the elapsed milliseconds instead of 0

    Returns:
        ClaimResult; informational claims always report "info" and failures always carry a witness
    """
    entry = get_claim(claim_id)
    start = time.perf_counter()
    status, witness = entry.check(G)
    elapsed = int((time.perf_counter() - start) * 1000)
    if entry.informational and status != "info":
        status = "info"
    if status == "fail" and not witness:
        witness = {"reason": "check failed without a witness"}
    logger.debug(f"{claim_id} on {G.name}: {status} in {elapsed} ms")
    return ClaimResult(claim=claim_id, group=G.name, status=status, witness=witness, ms=elapsed if timings else 0)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _passed(witness: Witness = None) -> Outcome:
    return "pass", witness


def _failed(G: FiniteGroup, note: str, **elements: int) -> Outcome:
    witness = {name: G.format_element(int(g)) for name, g in elements.items()}
    witness["reason"] = note
    return "fail", witness


def _powers(G: FiniteGroup, elements: np.ndarray, k: int) -> np.ndarray:
    """Elementwise elements^k by repeated squaring over the table."""
    mul, inv = G.mul_table, G.inv_table
    base = np.asarray(elements, dtype=np.int64)
    if k < 0:
        base, k = inv[base], -k
    result = np.zeros_like(base)
    while k:
        if k & 1:
            result = mul[result, base]
        base = mul[base, base]
        k >>= 1
    return result


def _class_reps(G: FiniteGroup, mask: Optional[np.ndarray] = None) -> List[int]:
    """One element per conjugacy class, restricted to a conjugation-invariant mask."""
    return [int(c[0]) for c in conjugacy_classes(G) if mask is None or mask[c[0]]]


def _first_outside(inner: np.ndarray, outer: np.ndarray) -> Optional[int]:
    bad = np.flatnonzero(inner & ~outer)
    return int(bad[0]) if bad.size else None


@lru_cache(maxsize=128)
def _pairs(G: FiniteGroup, which: str) -> Tuple[Tuple[Tuple[int, int], ...], str]:
    """
    (first, second) pairs for a pair quantifier. ``which`` is "L3" for
    a, b in L_3(G) or "all" for x, y in G.
    """
    if which == "L3":
        mask = left_engel_set(G, 3).mask
    else:
        mask = np.ones(G.order, dtype=bool)
    firsts = _class_reps(G, mask)
    seconds = np.flatnonzero(mask)
    total = len(firsts) * len(seconds)

    if G.order <= settings.pair_exhaustive_limit or total <= settings.pair_sample_count:
        pairs = tuple((a, int(b)) for a in firsts for b in seconds)
        return pairs, f"exhaustive, {total} pairs"

    rng = np.random.default_rng(settings.random_seed)
    chosen = np.sort(rng.choice(total, size=settings.pair_sample_count, replace=False))
    pairs = tuple((firsts[i // len(seconds)], int(seconds[i % len(seconds)])) for i in chosen)
    return pairs, f"sampled {len(pairs)} of {total} pairs"


def _pair_note(note: str) -> Witness:
    return None if note.startswith("exhaustive") else {"pairs": note}


# ---------------------------------------------------------------------------
# Definitions and cited facts
# ---------------------------------------------------------------------------


@claim("CHK-01", "[g,_n x] = [[g,_{n-1} x], x] with [g,_0 x] = g; L_0 <= L_1 <= ... <= L_6; L_1 = R_1 = Z(G)", "cited-fact")
def check_engel_recursion(G: FiniteGroup) -> Outcome:
    mul, inv = G.mul_table, G.inv_table
    g = np.arange(G.order)[:, None]
    x = np.arange(G.order)[None, :]
    cur = np.broadcast_to(g, (G.order, G.order))
    for n in range(7):
        bad = np.argwhere(engel_matrix(G, n) != cur)
        if bad.size:
            gi, xi = bad[0]
            return _failed(G, f"[g,_{n} x] disagrees with iterated commutation", g=gi, x=xi)
        cur = mul[mul[inv[cur], inv[x]], mul[cur, x]]

    for n in range(6):
        outside = _first_outside(left_engel_set(G, n).mask, left_engel_set(G, n + 1).mask)
        if outside is not None:
            return _failed(G, f"in L_{n} but not in L_{n + 1}", x=outside)

    z = center(G).mask
    for side, engel in (("L_1", left_engel_set(G, 1)), ("R_1", right_engel_set(G, 1))):
        if not (engel.mask == z).all():
            x = int(np.flatnonzero(engel.mask != z)[0])
            return _failed(G, f"{side} differs from the centre", x=x)
    return _passed()


@claim("CHK-02", "L_2(G) = {x : <x>^G is abelian}, and L_2(G) <= B(G)", "cited-fact")
def check_l2_characterization(G: FiniteGroup) -> Outcome:
    brute = left_engel_set(G, 2)
    characterized = l2_characterization(G)
    if not brute.same_members(characterized):
        x = int(np.flatnonzero(brute.mask != characterized.mask)[0])
        return _failed(G, f"left 2-Engel: {x in brute}, abelian normal closure: {x in characterized}", x=x)
    outside = _first_outside(brute.mask, baer_radical(G).mask)
    if outside is not None:
        return _failed(G, "left 2-Engel element outside the Baer radical", x=outside)
    return _passed()


@claim("CHK-03", "a^2 = 1 implies [x,_m a] = [x,a]^((-2)^(m-1)) for all x and 1 <= m <= 6", "cited-fact")
def check_involution_identity(G: FiniteGroup) -> Outcome:
    involutions = np.flatnonzero(G.mul_table[np.arange(G.order), np.arange(G.order)] == 0)
    for a in involutions:
        base = G.comm_table[:, a]
        for m in range(1, 7):
            lhs = engel_matrix(G, m)[:, a]
            rhs = _powers(G, base, (-2) ** (m - 1))
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                return _failed(G, f"identity fails at m = {m}", a=a, x=bad[0])
    return _passed({"involutions": str(len(involutions))})


@claim("CHK-04", "Heineken: R_n(G)^-1 <= L_{n+1}(G) for n <= 4", "cited-fact")
def check_heineken(G: FiniteGroup) -> Outcome:
    for n in range(1, 5):
        right = right_engel_set(G, n).members
        inverses = G.inv_table[right]
        left = left_engel_set(G, n + 1).mask
        bad = np.flatnonzero(~left[inverses])
        if bad.size:
            return _failed(G, f"x in R_{n} but x^-1 not in L_{n + 1}", x=right[bad[0]])
    return _passed()


@claim("CHK-05", "Kappe: R_2(G) is a characteristic subgroup (closed and conjugation-stable)", "cited-fact")
def check_kappe(G: FiniteGroup) -> Outcome:
    r2 = right_engel_set(G, 2)
    members = r2.members
    products = G.mul_table[np.ix_(members, members)]
    bad = np.argwhere(~r2.mask[products])
    if bad.size:
        i, j = bad[0]
        return _failed(G, "R_2 is not closed under multiplication", x=members[i], y=members[j])
    conjugates = G.conj_table[members]
    bad = np.argwhere(~r2.mask[conjugates])
    if bad.size:
        i, j = bad[0]
        return _failed(G, "R_2 is not conjugation-stable", x=members[i], g=j)
    if not is_closed(G, r2.mask):
        return "fail", {"reason": "R_2 is not a subgroup"}
    return _passed({"order": str(len(r2))})


@claim("CHK-06", "R_2(G) <= L_2(G)", "cited-fact")
def check_r2_in_l2(G: FiniteGroup) -> Outcome:
    outside = _first_outside(right_engel_set(G, 2).mask, left_engel_set(G, 2).mask)
    if outside is not None:
        return _failed(G, "right 2-Engel element that is not left 2-Engel", x=outside)
    return _passed()


@claim("CHK-07", "Newell: <x>^G is nilpotent of class at most 3 for x in R_3(G); R_3(G) <= B(G)", "cited-fact")
def check_newell(G: FiniteGroup) -> Outcome:
    r3 = right_engel_set(G, 3)
    baer = baer_radical(G)
    for x in _class_reps(G, r3.mask):
        cls = nilpotency_class(normal_closure(G, [x]))
        if cls is None or cls > 3:
            return _failed(G, f"normal closure has class {'infinite' if cls is None else cls}", x=x)
        if x not in baer:
            return _failed(G, "right 3-Engel element outside the Baer radical", x=x)
    return _passed()


@claim("CHK-08", "R_3(G)^2 <= L_3(G) and R_3(G)^4 <= R_3(G)", "cited-fact")
def check_r3_powers(G: FiniteGroup) -> Outcome:
    r3 = right_engel_set(G, 3)
    members = r3.members
    squares = _powers(G, members, 2)
    bad = np.flatnonzero(~left_engel_set(G, 3).mask[squares])
    if bad.size:
        return _failed(G, "x in R_3 but x^2 not in L_3", x=members[bad[0]])
    fourths = _powers(G, members, 4)
    bad = np.flatnonzero(~r3.mask[fourths])
    if bad.size:
        return _failed(G, "x in R_3 but x^4 not in R_3", x=members[bad[0]])
    return _passed()


# ---------------------------------------------------------------------------
# Left 3-Engel elements
# ---------------------------------------------------------------------------


@claim("CHK-09", "[y,_3 x] = [y^-1,_3 x] = 1 iff <x, x^y> is nilpotent of class at most 2", "lemma")
def check_n2_equivalence(G: FiniteGroup) -> Outcome:
    e3 = engel_matrix(G, 3)
    inv = G.inv_table
    pairs, note = _pairs(G, "all")
    for x, y in pairs:
        x_inv = int(inv[x])
        x_cubed = G.power(x, 3)
        for eps, y_eps in ((1, y), (-1, int(inv[y]))):
            rewritten = G.conj(G.comm(x_inv, G.comm(x_inv, G.comm(x_inv, y_eps))), x_cubed)
            if rewritten != int(e3[y_eps, x]):
                return _failed(G, f"[y^{eps},_3 x] differs from its rewriting by x^-1", x=x, y=y)
        engel = e3[y, x] == 0 and e3[inv[y], x] == 0
        n2 = pair_class_at_most_two(G, x, G.conj(x, y))
        if engel != n2:
            return _failed(G, f"Engel condition {engel} but class-2 condition {n2}", x=x, y=y)
    return _passed(_pair_note(note))


@claim("CHK-10", "L_3(G) = {x : <x, x^y> in N_2 for all y}; every power of a left 3-Engel element is left 3-Engel", "corollary")
def check_l3_characterization(G: FiniteGroup) -> Outcome:
    brute = left_engel_set(G, 3)
    characterized = l3_characterization(G)
    if not brute.same_members(characterized):
        x = int(np.flatnonzero(brute.mask != characterized.mask)[0])
        return _failed(G, f"left 3-Engel: {x in brute}, class-2 pairs: {x in characterized}", x=x)
    members = brute.members
    cur = members.copy()
    for k in range(2, int(G.element_orders.max()) + 1):
        cur = G.mul_table[cur, members]
        bad = np.flatnonzero(~brute.mask[cur])
        if bad.size:
            return _failed(G, f"x^{k} is not left 3-Engel", x=members[bad[0]])
    return _passed()


@claim("CHK-11", "left 3-Engel elements of coprime orders commute", "proposition")
def check_coprime_commute(G: FiniteGroup) -> Outcome:
    members = left_engel_set(G, 3).members
    orders = G.element_orders[members]
    coprime = np.gcd(orders[:, None], orders[None, :]) == 1
    commuting = G.comm_table[np.ix_(members, members)] == 0
    bad = np.argwhere(coprime & ~commuting)
    if bad.size:
        i, j = bad[0]
        return _failed(G, "coprime-order left 3-Engel elements do not commute", a=members[i], b=members[j])
    return _passed()


def _prime_power(order: int) -> Optional[Tuple[int, int]]:
    factors = factorint(order)
    if len(factors) != 1:
        return None
    (p, n), = factors.items()
    return int(p), int(n)


@claim("CHK-12", "x in L_3(G) with x^(p^n) = 1, n >= 2, gives x^(p^(n-1)) in L_2(G)", "lemma")
def check_lemma_l2_power(G: FiniteGroup) -> Outcome:
    l2 = left_engel_set(G, 2)
    for x in left_engel_set(G, 3).members:
        pp = _prime_power(G.element_order(int(x)))
        if pp is None or pp[1] < 2:
            continue
        p, n = pp
        if G.power(int(x), p ** (n - 1)) not in l2:
            return _failed(G, f"order {p}^{n} but x^({p}^{n - 1}) is not left 2-Engel", x=x)
    return _passed()


@claim("CHK-13", "x in L_3(G) of order p^n, n > 1: x^p in B(G) and <x^p>^G soluble of derived length <= n-1", "theorem")
def check_theorem1(G: FiniteGroup) -> Outcome:
    l3 = left_engel_set(G, 3)
    baer = baer_radical(G)
    witness: Dict[str, str] = {}
    for x in _class_reps(G, l3.mask):
        pp = _prime_power(G.element_order(x))
        if pp is None:
            continue
        p, n = pp
        xp = G.power(x, p)
        if xp not in baer:
            return _failed(G, f"x^{p} is outside the Baer radical", x=x)
        if n == 1:
            witness[G.format_element(x)] = f"order {p}, x^{p} = 1"
            continue
        length = derived_length(normal_closure(G, [xp]))
        if length is None or length > n - 1:
            found = "not soluble" if length is None else f"derived length {length}"
            return _failed(G, f"order {p}^{n} but <x^{p}>^G is {found}", x=x)
        witness[G.format_element(x)] = f"order {p}^{n}, derived length {length}"
    return _passed(witness or None)


_REMARK_PAIRS = [
    (parse_exponent("a^2"), parse_exponent("2a-1")),
    (parse_exponent("a(a)"), parse_exponent("2a-1")),
    (parse_exponent("a^-1"), parse_exponent("-a+2")),
]


@claim("CHK-14", "a in L_3(G): [a,x]^(a^2) = [a,x]^(2a-1) and [a,x]^(a^-1) = [a,x]^(-a+2)", "remark")
def check_remark(G: FiniteGroup) -> Outcome:
    for a in _class_reps(G, left_engel_set(G, 3).mask):
        env = {"a": a}
        for x in range(G.order):
            u = G.comm(a, x)
            for lhs, rhs in _REMARK_PAIRS:
                if eval_exponent(G, u, lhs, env) != eval_exponent(G, u, rhs, env):
                    return _failed(G, "exponent identity fails", a=a, x=x)
    return _passed()


# ---------------------------------------------------------------------------
# Pairs of left 3-Engel elements
# ---------------------------------------------------------------------------


@claim("CHK-15", "a, b in L_3(G): <a,b>' = <[a,b], [a,b]^a, [a,b]^b, [a,b]^(ab)>", "lemma")
def check_lemma_derived(G: FiniteGroup) -> Outcome:
    pairs, note = _pairs(G, "L3")
    for a, b in pairs:
        H = generate(G, a, b)
        c = G.comm(a, b)
        N = generate(G, c, G.conj(c, a), G.conj(c, b), G.conj(c, G.mul(a, b)))
        D = commutator_subgroup(G, H, H)
        if D != N:
            return _failed(G, f"derived subgroup has order {D.order}, the four conjugates generate {N.order}", a=a, b=b)
    return _passed(_pair_note(note))


@claim("CHK-16", "a, b in L_3(G): [a,b] and [a,b]^(ab) centralize [a,b]^a and [a,b]^b", "lemma")
def check_lemma_centralizer(G: FiniteGroup) -> Outcome:
    pairs, note = _pairs(G, "L3")
    for a, b in pairs:
        c = G.comm(a, b)
        for left in (c, G.conj(c, G.mul(a, b))):
            for right in (G.conj(c, a), G.conj(c, b)):
                if G.comm(left, right) != 0:
                    return _failed(G, "commutator fails to centralize a conjugate", a=a, b=b)
    return _passed(_pair_note(note))


@claim("CHK-17", "a, b in L_3(G): <a,b> is metabelian and nilpotent of class at most 4", "theorem")
def check_theorem2(G: FiniteGroup) -> Outcome:
    pairs, note = _pairs(G, "L3")
    seen: Dict = {}
    worst = 0
    for a, b in pairs:
        H = generate(G, a, b)
        if H not in seen:
            seen[H] = (nilpotency_class(H), derived_length(H))
        cls, length = seen[H]
        if cls is None or cls > 4:
            return _failed(G, f"<a,b> has class {'infinite' if cls is None else cls}", a=a, b=b)
        if length is None or length > 2:
            return _failed(G, f"<a,b> has derived length {length}", a=a, b=b)
        worst = max(worst, cls)
    witness = {"max class": str(worst), "distinct subgroups": str(len(seen))}
    witness.update(_pair_note(note) or {})
    return _passed(witness)


@claim("CHK-20", "a, b in L_3(G): the commutator identities behind the class-4 bound", "lemma")
def check_theorem2_steps(G: FiniteGroup) -> Outcome:
    pairs, note = _pairs(G, "L3")
    minus_b_plus_2 = parse_exponent("-b+2")
    for a, b in pairs:
        c = G.comm(a, b)
        a1 = G.conj(a, b)
        a2 = G.conj(a, G.power(b, 2))
        cb = G.conj(c, b)
        ca = G.comm(c, a)
        steps = [
            ("c = a^-1 a^b", c == G.mul(G.inv(a), a1)),
            ("c^b = (a^b)^-1 a^(b^2)", cb == G.mul(G.inv(a1), a2)),
            ("[c^b, c] = 1", G.comm(cb, c) == 0),
            ("a^(b^2) = a c^2 [c,b]", a2 == G.product([a, c, c, G.comm(c, b)])),
            ("[a^b, a] = [c, a]", G.comm(a1, a) == ca),
            ("[c,a] commutes with a and c", G.comm(ca, a) == 0 and G.comm(ca, c) == 0),
            ("[a^b, a, a^(b^2)] = 1", G.comm_many(a1, a, a2) == 0),
            ("[[c,a],[c,b]] = 1", G.comm(ca, G.comm(c, b)) == 0),
            ("[c^a, c^b] = 1", G.comm(G.conj(c, a), cb) == 0),
            ("c^(b^-1) = c^(-b+2)", G.conj(c, G.inv(b)) == eval_exponent(G, c, minus_b_plus_2, {"b": b})),
            ("[c^(ab), c] = 1", G.comm(G.conj(c, G.mul(a, b)), c) == 0),
        ]
        for label, ok in steps:
            if not ok:
                return _failed(G, f"step {label} fails", a=a, b=b)
        for xs in product((a, b), repeat=3):
            if G.comm_many(a, b, *xs) != 0:
                return _failed(G, "a weight-5 commutator [a,b,x1,x2,x3] is nontrivial", a=a, b=b)
    return _passed(_pair_note(note))


_CONJUGATION_IDENTITIES = [
    (lhs, rhs, parse_exponent(lhs), parse_exponent(rhs))
    for lhs, rhs in [
        ("a^2", "2a-1"),
        ("a^-1", "-a+2"),
        ("ba", "1+ab-1"),
        ("aba", "1+2ab-b-1"),
        ("ab", "-1+ba+1"),
        ("ba^-1", "-a^-1+a^-1b+a^-1"),
        ("aba^-1", "-a^-1+b+a^-1"),
    ]
]


@claim("CHK-21", "a, b in L_3(G), u = [a,b]: the conjugates of u by a, b, ab, ba, aba and their inverses lie in the span of u, u^a, u^b, u^(ab)", "lemma")
def check_lemma_conjugates(G: FiniteGroup) -> Outcome:
    pairs, note = _pairs(G, "L3")
    for a, b in pairs:
        u = G.comm(a, b)
        env = {"a": a, "b": b}
        for lhs_text, rhs_text, lhs, rhs in _CONJUGATION_IDENTITIES:
            if eval_exponent(G, u, lhs, env) != eval_exponent(G, u, rhs, env):
                return _failed(G, f"u^({lhs_text}) != u^({rhs_text})", a=a, b=b)
    return _passed(_pair_note(note))


# ---------------------------------------------------------------------------
# Informational searches
# ---------------------------------------------------------------------------


@claim("CHK-18", "search: x in R_3(G) with x^-1 or x^2 outside R_3(G)", "informational")
def search_r3_inverse_square(G: FiniteGroup) -> Outcome:
    r3 = right_engel_set(G, 3)
    members = r3.members
    bad_inverse = members[~r3.mask[G.inv_table[members]]]
    bad_square = members[~r3.mask[_powers(G, members, 2)]]
    witness = {"R_3 size": str(len(r3)), "inverse outside": str(len(bad_inverse)), "square outside": str(len(bad_square))}
    if bad_inverse.size:
        witness["inverse example"] = G.format_element(int(bad_inverse[0]))
    if bad_square.size:
        witness["square example"] = G.format_element(int(bad_square[0]))
    return "info", witness


@claim("CHK-19", "survey: maximal class of nilpotent <a,b,c> with a, b, c in L_3(G)", "informational")
def survey_three_generator_class(G: FiniteGroup) -> Outcome:
    l3 = left_engel_set(G, 3).mask
    firsts = _class_reps(G, l3)
    members = [int(x) for x in np.flatnonzero(l3)]
    total = len(firsts) * len(members) ** 2
    if total <= settings.triple_sample_count:
        triples = [(a, b, c) for a in firsts for b in members for c in members]
        note = f"exhaustive, {total} triples"
    else:
        rng = np.random.default_rng(settings.random_seed)
        picks = rng.integers(0, [len(firsts), len(members), len(members)], size=(settings.triple_sample_count, 3))
        triples = [(firsts[i], members[j], members[k]) for i, j, k in picks]
        note = f"sampled {len(triples)} of {total} triples"

    classes: Dict = {}
    for a, b, c in triples:
        H = generate(G, *sorted({a, b, c}))
        if H not in classes:
            classes[H] = nilpotency_class(H)
    nilpotent = [c for c in classes.values() if c is not None]
    return "info", {
        "triples": note,
        "distinct subgroups": str(len(classes)),
        "non-nilpotent": str(len(classes) - len(nilpotent)),
        "max class": str(max(nilpotent, default=0)),
    }


@claim("CHK-22", "search: x in L_3(G) outside the Fitting subgroup", "informational")
def search_l3_outside_fitting(G: FiniteGroup) -> Outcome:
    l3 = left_engel_set(G, 3)
    outside = np.flatnonzero(l3.mask & ~fitting_oracle(G).mask)
    witness = {"L_3 size": str(len(l3)), "outside": str(len(outside))}
    if outside.size:
        witness["example"] = G.format_element(int(outside[0]))
    return "info", witness
