"""
Built-in families of small groups and Cayley table file I/O.

Naming scheme (see README):
    C12        cyclic of order 12
    C2^3       elementary abelian of order 8
    D8         dihedral of order 16 (named by rotation order)
    Q8, Q16    generalized quaternion (dicyclic with 2-power parameter)
    Dic3       dicyclic of order 12
    S4, A5     symmetric and alternating groups
    Heis3      Heisenberg group of order 27
    UT4(2)     unitriangular 4x4 matrices over F2
    S3xC4      direct product, generator labels suffixed by factor index
"""

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime
from sympy.combinatorics import Permutation

from app.config import settings
from app.services.groups import (
    FiniteGroup,
    GroupError,
    GroupValidationError,
    check_associative,
    close_group,
    group_from_table,
    load_permutation_file,
)

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent.parent / "data"


class GroupSpecError(GroupError):
    pass


class UnknownGroupError(GroupError):
    pass


class CayleyFormatError(GroupValidationError):
    pass


class NonSquareTableError(GroupValidationError):
    pass


class LatinSquareError(GroupValidationError):
    pass


class IdentityError(GroupValidationError):
    pass


class AssociativityError(GroupValidationError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    """A family name with its parameters; products carry their factor specs."""

    family: str
    params: Tuple[int, ...] = ()
    factors: Tuple["GroupSpec", ...] = ()
    path: Optional[str] = None

    @property
    def name(self) -> str:
        family, params = self.family, self.params
        if family == "cyclic":
            return f"C{params[0]}"
        if family == "dihedral":
            return f"D{params[0]}"
        if family == "dicyclic":
            n = params[0]
            return f"Q{4 * n}" if n & (n - 1) == 0 else f"Dic{n}"
        if family == "symmetric":
            return f"S{params[0]}"
        if family == "alternating":
            return f"A{params[0]}"
        if family == "heisenberg":
            return f"Heis{params[0]}"
        if family == "elementary-abelian":
            p, k = params
            return f"C{p}" if k == 1 else f"C{p}^{k}"
        if family == "unitriangular":
            n, p = params
            return f"UT{n}({p})"
        if family == "product":
            return "x".join(f.name for f in self.factors)
        if family == "file":
            return Path(self.path).stem.upper() if self.path else "file"
        raise GroupSpecError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Family builders. Each returns (generators, labels) on a common point set.
# ---------------------------------------------------------------------------


def _cycle(points: Sequence[int], degree: int) -> Permutation:
    if len(points) < 2:
        return Permutation(list(range(degree)))
    return Permutation([[p - 1 for p in points]], size=degree)


def _from_images(images: Sequence[int]) -> Permutation:
    return Permutation([int(i) for i in images])


def _cyclic(n: int):
    if n < 1:
        raise GroupSpecError(f"cyclic order must be at least 1, got {n}")
    return [_cycle(range(1, n + 1), max(n, 1))], ["a"]


def _dihedral(n: int):
    if n < 2:
        raise GroupSpecError(f"dihedral rotation order must be at least 2, got {n}")
    if n == 2:
        return [_from_images([1, 0, 3, 2]), _from_images([2, 3, 0, 1])], ["r", "s"]
    rotation = _cycle(range(1, n + 1), n)
    reflection = _from_images([(-i) % n for i in range(n)])
    return [rotation, reflection], ["r", "s"]


def _regular(elements: List[tuple], multiply, generators: Sequence[tuple]) -> List[Permutation]:
    """Right regular representation: element p goes to p*g."""
    index = {e: i for i, e in enumerate(elements)}
    return [_from_images([index[multiply(e, g)] for e in elements]) for g in generators]


def _dicyclic(n: int):
    if n < 2:
        raise GroupSpecError(f"dicyclic parameter must be at least 2, got {n}")
    m = 2 * n

    # x^i y^j with y x = x^-1 y and y^2 = x^n
    def multiply(e, f):
        i, j = e
        k, l = f
        i = (i + (k if j == 0 else -k)) % m
        if j + l == 2:
            return (i + n) % m, 0
        return i, j + l

    elements = [(i, j) for j in (0, 1) for i in range(m)]
    return _regular(elements, multiply, [(1, 0), (0, 1)]), ["x", "y"]


def _symmetric(n: int):
    if not 1 <= n <= 6:
        raise GroupSpecError(f"symmetric degree must be in 1..6, got {n}")
    if n == 1:
        return [_cycle([], 1)], ["a"]
    if n == 2:
        return [_cycle([1, 2], 2)], ["a"]
    return [_cycle([1, 2], n), _cycle(range(1, n + 1), n)], ["a", "b"]


def _alternating(n: int):
    if not 1 <= n <= 6:
        raise GroupSpecError(f"alternating degree must be in 1..6, got {n}")
    if n < 3:
        return [_cycle([], max(n, 1))], ["a"]
    if n == 3:
        return [_cycle([1, 2, 3], 3)], ["a"]
    second = range(1, n + 1) if n % 2 else range(2, n + 1)
    return [_cycle([1, 2, 3], n), _cycle(second, n)], ["a", "b"]


def _heisenberg(p: int):
    if not isprime(p):
        raise GroupSpecError(f"Heisenberg group needs a prime, got {p}")

    # upper unitriangular 3x3 over F_p as triples (a, b, c)
    def multiply(e, f):
        return (e[0] + f[0]) % p, (e[1] + f[1]) % p, (e[2] + f[2] + e[0] * f[1]) % p

    elements = list(product(range(p), repeat=3))
    return _regular(elements, multiply, [(1, 0, 0), (0, 1, 0)]), ["x", "y"]


def _elementary_abelian(p: int, k: int):
    if not isprime(p) or k < 1:
        raise GroupSpecError(f"elementary abelian group needs prime p and k >= 1, got {p}^{k}")
    degree = p * k
    gens = [_cycle(range(i * p + 1, (i + 1) * p + 1), degree) for i in range(k)]
    return gens, [f"e{i + 1}" for i in range(k)]


def _unitriangular(n: int, p: int):
    if not 2 <= n <= 4 or not isprime(p):
        raise GroupSpecError(f"unitriangular group needs 2 <= n <= 4 and prime p, got UT{n}({p})")
    vectors = np.array(list(product(range(p), repeat=n)))
    weights = p ** np.arange(n)[::-1]
    gens = []
    for i in range(n - 1):
        m = np.eye(n, dtype=np.int64)
        m[i, i + 1] = 1
        images = ((vectors @ m) % p) @ weights
        gens.append(_from_images(images))
    return gens, [f"t{i + 1}" for i in range(n - 1)]


_BUILDERS = {
    "cyclic": _cyclic,
    "dihedral": _dihedral,
    "dicyclic": _dicyclic,
    "symmetric": _symmetric,
    "alternating": _alternating,
    "heisenberg": _heisenberg,
    "elementary-abelian": _elementary_abelian,
    "unitriangular": _unitriangular,
}


def _generators_of(spec: GroupSpec):
    if spec.family == "product":
        if len(spec.factors) < 2:
            raise GroupSpecError("a direct product needs at least two factors")
        parts = [_generators_of(f) for f in spec.factors]
        degree = sum(g[0].size for g, _ in parts)
        gens, labels = [], []
        offset = 0
        for k, (factor_gens, factor_labels) in enumerate(parts, start=1):
            size = factor_gens[0].size
            for g, label in zip(factor_gens, factor_labels):
                images = list(range(degree))
                images[offset:offset + size] = [offset + i for i in g.array_form]
                gens.append(_from_images(images))
                labels.append(f"{label}{k}")
            offset += size
        return gens, labels

    if spec.family == "file":
        group = load_permutation_file(spec.path, name=spec.name)
        gens = [Permutation(group.points[g].tolist()) for _, g in group.generators]
        return gens, [label for label, _ in group.generators]

    builder = _BUILDERS.get(spec.family)
    if builder is None:
        raise GroupSpecError(f"unknown family {spec.family!r}")
    return builder(*spec.params)


def build(spec: GroupSpec, cap: Optional[int] = None) -> FiniteGroup:
    """Build a group from its family spec via permutation closure."""
    gens, labels = _generators_of(spec)
    return close_group(gens, cap=cap, name=spec.name, labels=labels)


# ---------------------------------------------------------------------------
# Names
# ---------------------------------------------------------------------------

_NAME_PATTERNS = [
    (re.compile(r"C(\d+)\^(\d+)"), lambda m: GroupSpec("elementary-abelian", (int(m[1]), int(m[2])))),
    (re.compile(r"C(\d+)"), lambda m: GroupSpec("cyclic", (int(m[1]),))),
    (re.compile(r"D(\d+)"), lambda m: GroupSpec("dihedral", (int(m[1]),))),
    (re.compile(r"Dic(\d+)"), lambda m: GroupSpec("dicyclic", (int(m[1]),))),
    (re.compile(r"S(\d+)"), lambda m: GroupSpec("symmetric", (int(m[1]),))),
    (re.compile(r"A(\d+)"), lambda m: GroupSpec("alternating", (int(m[1]),))),
    (re.compile(r"Heis(\d+)"), lambda m: GroupSpec("heisenberg", (int(m[1]),))),
    (re.compile(r"UT(\d+)\((\d+)\)"), lambda m: GroupSpec("unitriangular", (int(m[1]), int(m[2])))),
]


def _quaternion_spec(order: int) -> GroupSpec:
    n = order // 4
    if order % 4 or n < 2 or n & (n - 1):
        raise GroupSpecError(f"Q{order}: generalized quaternion orders are 8, 16, 32, ...")
    return GroupSpec("dicyclic", (n,))


def spec_from_name(name: str) -> GroupSpec:
    """Inverse of GroupSpec.name for built-in families."""
    factors = name.split("x")
    if len(factors) > 1:
        return GroupSpec("product", factors=tuple(spec_from_name(f) for f in factors))

    match = re.fullmatch(r"Q(\d+)", name)
    if match:
        return _quaternion_spec(int(match[1]))
    if name == "F21":
        return GroupSpec("file", path=str(DATA_DIR / "f21.perms"))
    for pattern, make in _NAME_PATTERNS:
        match = pattern.fullmatch(name)
        if match:
            return make(match)
    raise UnknownGroupError(f"unknown group {name!r}")


# ---------------------------------------------------------------------------
# Cayley tables
# ---------------------------------------------------------------------------


def parse_cayley_table(text: str, name: str = "G") -> FiniteGroup:
    """
    Parse and validate a Cayley table.

    Line 1 holds n, the next n lines hold the rows of 0-based indices.
    '#' comment lines are allowed only before line 1.
    """
    lines = text.splitlines()
    pos = 0
    while pos < len(lines) and (lines[pos].strip().startswith("#") or not lines[pos].strip()):
        pos += 1
    if pos == len(lines):
        raise CayleyFormatError(f"{name}: missing order line")

    header = lines[pos].strip()
    if not header.isdigit() or int(header) < 1:
        raise CayleyFormatError(f"{name}: order line must be a positive integer, got {header!r}")
    n = int(header)

    rows = []
    for lineno, line in enumerate(lines[pos + 1:], start=pos + 2):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            raise CayleyFormatError(f"{name}: line {lineno}: comments are only allowed before the order line")
        try:
            rows.append([int(tok) for tok in stripped.split()])
        except ValueError:
            raise CayleyFormatError(f"{name}: line {lineno}: non-integer entry in {stripped!r}")

    if len(rows) != n or any(len(row) != n for row in rows):
        widths = sorted({len(row) for row in rows})
        raise NonSquareTableError(f"{name}: expected {n} rows of {n} entries, got {len(rows)} rows of widths {widths}")

    mul = np.array(rows, dtype=np.int64)
    if mul.min() < 0 or mul.max() >= n:
        raise CayleyFormatError(f"{name}: entries must lie in 0..{n - 1}")

    expected = np.arange(n)
    if not (np.sort(mul, axis=1) == expected).all() or not (np.sort(mul, axis=0) == expected[:, None]).all():
        raise LatinSquareError(f"{name}: table is not a Latin square")
    if not (mul[0] == expected).all() or not (mul[:, 0] == expected).all():
        raise IdentityError(f"{name}: element 0 is not the identity")

    triple = check_associative(mul)
    if triple is not None:
        a, b, c = triple
        raise AssociativityError(f"{name}: ({a}*{b})*{c} != {a}*({b}*{c})")

    return group_from_table(mul, name=name)


def load_cayley_table(path, name: Optional[str] = None) -> FiniteGroup:
    """
    Load a Cayley table file.

    Args:
        path: file in the Cayley format
        name: group name; defaults to the file stem

    Returns:
        The validated FiniteGroup
    """
    path = Path(path)
    group = parse_cayley_table(path.read_text(encoding="utf-8"), name=name or path.stem)
    logger.info(f"Loaded Cayley table {path} as {group.name} (order {group.order})")
    return group


def dump_cayley_table(group: FiniteGroup) -> str:
    lines = [f"# {group.name}", str(group.order)]
    lines.extend(" ".join(str(int(v)) for v in row) for row in group.mul_table)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Default corpus
# ---------------------------------------------------------------------------

DEFAULT_CORPUS_NAMES = [
    # abelian
    "C1", "C2", "C3", "C4", "C5", "C6", "C8", "C12", "C2^2", "C2^3", "C3^2", "C4xC2",
    # nilpotent 2-groups
    "D4", "Q8", "Heis2", "D8", "Q16", "C2xD4", "C2xQ8", "D16", "Q32", "C4xD4",
    "D32", "Q64", "UT4(2)", "D4xD4", "Q8xQ8", "D64", "Q128",
    # odd p-groups
    "Heis3", "C3^3", "C3xHeis3", "Heis5", "Heis7",
    # soluble, not nilpotent
    "S3", "D5", "D6", "Dic3", "A4", "D9", "S3xC3", "D10", "Dic5", "F21",
    "S4", "Dic6", "D12", "S3xC4", "A4xC2", "S3xS3", "A4xC3", "S3xD4", "S4xC2", "S3xQ8", "S4xC3",
    # not soluble
    "A5", "S5", "A5xC2",
]


@lru_cache(maxsize=None)
def get_group(name: str) -> FiniteGroup:
    """Build (once per process) a group from its canonical name."""
    group = build(spec_from_name(name))
    if group.name != name:
        # aliases such as Dic4 (= Q16) keep the requested name
        group = FiniteGroup(name=name, mul_table=group.mul_table, inv_table=group.inv_table,
                            generators=group.generators, points=group.points)
    return group


def default_corpus(jobs: Optional[int] = None) -> List[FiniteGroup]:
    """The fixed verification corpus, in a fixed order."""
    jobs = settings.jobs if jobs is None else jobs
    logger.info(f"Building default corpus ({len(DEFAULT_CORPUS_NAMES)} groups)")
    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as executor:
        futures = [executor.submit(get_group, name) for name in DEFAULT_CORPUS_NAMES]
        groups = [f.result() for f in futures]

    for group in groups:
        if group.order > settings.corpus_order_cap:
            raise GroupSpecError(f"{group.name} has order {group.order} above the corpus cap {settings.corpus_order_cap}")
    return groups


def corpus_names() -> List[str]:
    return list(DEFAULT_CORPUS_NAMES)
