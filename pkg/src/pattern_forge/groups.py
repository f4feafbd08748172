"""Exact arithmetic for finite-rank abelian groups given as direct sums.

A group is described by an ordered list of factors:

* ``Cyclic(m)``      residues modulo m,
* ``IntegerBox(B)``  the integers, with enumeration clipped to [-B, B],
* ``PrimePower(p,k)`` the subgroup {a/p^k mod 1} of the circle group,
  stored as integer numerators a in [0, p^k),
* ``RationalBox(D,B)`` exact rationals a/D with |a| <= B*D; enumeration
  is clipped to the box but arithmetic is closed and exact.

Elements are immutable coordinate vectors over such a spec.  On top of
the plain arithmetic this module provides support/nonzero-entry maps,
per-prime projections, finite-sum enumeration for sets and for indexed
matrices, subgroup closures and greedy independent-sequence extraction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .tokens import ColourToken, canonical_json


class StructureError(ValueError):
    """Raised on malformed specs, foreign elements or invalid coordinates."""


class PreconditionError(ValueError):
    """An operation's stated precondition does not hold for these inputs."""


class SizeLimitError(ValueError):
    """Raised when an enumeration request exceeds its configured limit."""


class ClosureOverflow(RuntimeError):
    """Subgroup closure exceeded its cap (subgroup infinite or too large)."""

    def __init__(self, cap: int):
        super().__init__(f"subgroup closure exceeded cap {cap}")
        self.cap = cap


class IndependenceFailure(Exception):
    """Greedy independent-sequence extraction ran out of pool."""

    def __init__(self, kept, target):
        super().__init__(
            f"pool exhausted with {len(kept)} of {target} independent elements")
        self.kept = kept
        self.achieved = len(kept)
        self.target = target


def smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise ValueError(f"no prime factor of {n}")
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def is_prime(n: int) -> bool:
    return n >= 2 and smallest_prime_factor(n) == n


# ---------------------------------------------------------------------------
# factors


@dataclass(frozen=True)
class Cyclic:
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise StructureError(f"cyclic modulus must be >= 2, got {self.m}")

    def normalize(self, v):
        if not isinstance(v, int) or isinstance(v, bool):
            raise StructureError(f"cyclic coordinate must be int, got {v!r}")
        return v % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def scale(self, k, a):
        return (k * a) % self.m

    def value_order(self, a):
        return self.m // math.gcd(a, self.m)

    def values(self):
        return range(self.m)

    @property
    def finite(self):
        return True

    @property
    def prime_class(self):
        # bookkeeping home for the per-prime projection
        return smallest_prime_factor(self.m)

    def jsonable(self):
        return {"kind": "cyclic", "m": self.m}


@dataclass(frozen=True)
class IntegerBox:
    bound: int

    def __post_init__(self):
        if self.bound < 1:
            raise StructureError(f"box bound must be >= 1, got {self.bound}")

    def normalize(self, v):
        if not isinstance(v, int) or isinstance(v, bool):
            raise StructureError(f"integer coordinate must be int, got {v!r}")
        return v

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def scale(self, k, a):
        return k * a

    def value_order(self, a):
        return 1 if a == 0 else math.inf

    def values(self):
        return range(-self.bound, self.bound + 1)

    @property
    def finite(self):
        return False

    @property
    def prime_class(self):
        return 0

    def jsonable(self):
        return {"kind": "int_box", "bound": self.bound}


@dataclass(frozen=True)
class PrimePower:
    p: int
    k: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise StructureError(f"{self.p} is not prime")
        if self.k < 1:
            raise StructureError(f"exponent must be >= 1, got {self.k}")

    @property
    def modulus(self):
        return self.p ** self.k

    def normalize(self, v):
        if not isinstance(v, int) or isinstance(v, bool):
            raise StructureError(
                f"prime-power coordinate must be an int numerator, got {v!r}")
        return v % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def scale(self, k, a):
        return (k * a) % self.modulus

    def value_order(self, a):
        return self.modulus // math.gcd(a, self.modulus)

    def values(self):
        return range(self.modulus)

    @property
    def finite(self):
        return True

    @property
    def prime_class(self):
        return self.p

    def as_rational(self, a) -> Fraction:
        """The representative of a/p^k in [0, 1)."""
        return Fraction(a, self.modulus)

    def jsonable(self):
        return {"kind": "prime_power", "p": self.p, "k": self.k}


@dataclass(frozen=True)
class RationalBox:
    den: int
    bound: int

    def __post_init__(self):
        if self.den < 1:
            raise StructureError(f"denominator must be >= 1, got {self.den}")
        if self.bound < 1:
            raise StructureError(f"box bound must be >= 1, got {self.bound}")

    def normalize(self, v):
        if isinstance(v, bool):
            raise StructureError("rational coordinate must be a number")
        if isinstance(v, int):
            v = Fraction(v)
        if not isinstance(v, Fraction):
            raise StructureError(f"rational coordinate must be exact, got {v!r}")
        if (v * self.den).denominator != 1:
            raise StructureError(
                f"{v} is not a multiple of 1/{self.den}")
        return v

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def scale(self, k, a):
        return k * a

    def value_order(self, a):
        return 1 if a == 0 else math.inf

    def values(self):
        d = self.den
        return (Fraction(a, d) for a in range(-self.bound * d, self.bound * d + 1))

    @property
    def finite(self):
        return False

    @property
    def prime_class(self):
        return 0

    def jsonable(self):
        return {"kind": "rat_box", "den": self.den, "bound": self.bound}


FACTOR_KINDS = {
    "cyclic": lambda d: Cyclic(d["m"]),
    "int_box": lambda d: IntegerBox(d["bound"]),
    "prime_power": lambda d: PrimePower(d["p"], d["k"]),
    "rat_box": lambda d: RationalBox(d["den"], d["bound"]),
}


# ---------------------------------------------------------------------------
# group spec and elements


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise StructureError("a group spec needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))

    # construction helpers

    @classmethod
    def cyclic_power(cls, m: int, l: int) -> "GroupSpec":
        return cls(tuple(Cyclic(m) for _ in range(l)))

    @classmethod
    def integer_box(cls, bound: int, dim: int) -> "GroupSpec":
        return cls(tuple(IntegerBox(bound) for _ in range(dim)))

    def element(self, coords) -> "Element":
        coords = tuple(coords)
        if len(coords) != len(self.factors):
            raise StructureError(
                f"expected {len(self.factors)} coordinates, got {len(coords)}")
        return Element(self, tuple(f.normalize(v)
                                   for f, v in zip(self.factors, coords)))

    def zero(self) -> "Element":
        return self.element([0] * len(self.factors))

    def basis(self) -> list["Element"]:
        """Standard basis vectors e_i (coordinate 1 at position i)."""
        n = len(self.factors)
        out = []
        for i in range(n):
            coords = [0] * n
            coords[i] = 1
            out.append(self.element(coords))
        return out

    @property
    def is_finite(self) -> bool:
        return all(f.finite for f in self.factors)

    def size(self) -> int:
        """Number of enumerated elements (exact group order when finite)."""
        n = 1
        for f in self.factors:
            if isinstance(f, Cyclic):
                n *= f.m
            elif isinstance(f, PrimePower):
                n *= f.modulus
            elif isinstance(f, IntegerBox):
                n *= 2 * f.bound + 1
            else:
                n *= 2 * f.bound * f.den + 1
        return n

    def enumerate(self) -> Iterator["Element"]:
        """All elements (box-clipped for infinite factors) in lexicographic
        order of canonical coordinate tuples.  'First found' semantics
        elsewhere always refer to this order."""
        for coords in itertools.product(*(f.values() for f in self.factors)):
            yield Element(self, coords)

    def prime_classes(self) -> list[int]:
        """The distinct projection classes present, ascending (0 first)."""
        return sorted({f.prime_class for f in self.factors})

    def jsonable(self):
        return {"factors": [f.jsonable() for f in self.factors]}

    def to_json(self) -> str:
        return canonical_json(self.jsonable())

    @classmethod
    def from_jsonable(cls, data) -> "GroupSpec":
        try:
            factors = tuple(FACTOR_KINDS[d["kind"]](d) for d in data["factors"])
        except (KeyError, TypeError) as exc:
            raise StructureError(f"bad group JSON: {exc}") from exc
        return cls(factors)


@dataclass(frozen=True)
class Element:
    parent: GroupSpec
    coords: tuple

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if other.parent != self.parent:
            raise StructureError("elements belong to different groups")
        fs = self.parent.factors
        return Element(self.parent, tuple(
            f.add(a, b) for f, a, b in zip(fs, self.coords, other.coords)))

    def __neg__(self):
        fs = self.parent.factors
        return Element(self.parent,
                       tuple(f.neg(a) for f, a in zip(fs, self.coords)))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        fs = self.parent.factors
        return Element(self.parent,
                       tuple(f.scale(k, a) for f, a in zip(fs, self.coords)))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def jsonable(self):
        out = []
        for f, a in zip(self.parent.factors, self.coords):
            if isinstance(f, RationalBox):
                out.append([a.numerator, a.denominator])
            else:
                out.append(a)
        return out

    def to_json(self) -> str:
        return canonical_json(self.jsonable())


def element_from_jsonable(spec: GroupSpec, data) -> Element:
    coords = []
    for f, v in zip(spec.factors, data):
        if isinstance(f, RationalBox) and isinstance(v, list):
            v = Fraction(v[0], v[1])
        coords.append(v)
    return spec.element(coords)


# ---------------------------------------------------------------------------
# support, sigma, projections, order


def supp(x: Element) -> frozenset:
    """Indices of the nonzero canonical coordinates."""
    return frozenset(i for i, a in enumerate(x.coords) if a != 0)


def sigma(x: Element) -> ColourToken:
    """The sequence of nonzero coordinates in increasing index order."""
    return ColourToken.seq(a for a in x.coords if a != 0)


def project_p(x: Element, p: int) -> Element:
    """Zero out every coordinate whose factor does not sit in class p
    (p = 0 collects the torsion-free factors)."""
    fs = x.parent.factors
    coords = tuple(a if f.prime_class == p else f.normalize(0)
                   for f, a in zip(fs, x.coords))
    return Element(x.parent, coords)


def order(x: Element):
    """Least k >= 1 with k*x = 0, or math.inf for torsion-free support."""
    result = 1
    for f, a in zip(x.parent.factors, x.coords):
        o = f.value_order(a)
        if o is math.inf:
            return math.inf
        result = result * o // math.gcd(result, o)
    return result


# ---------------------------------------------------------------------------
# finite sums


DEFAULT_FS_LIMIT = 20


def fs_set_formal(xs: Sequence[Element], limit: int = DEFAULT_FS_LIMIT):
    """All nonempty-subset sums as (index frozenset, sum) pairs, in
    increasing bitmask order.  The formal view matters when an argument
    inspects which subset produced which value."""
    xs = list(xs)
    if len(xs) > limit:
        raise SizeLimitError(f"{len(xs)} generators exceed fs limit {limit}")
    if len(set(xs)) != len(xs):
        raise StructureError("fs_set generators must be distinct")
    for x in xs[1:]:
        if x.parent != xs[0].parent:
            raise StructureError("fs_set generators must share a group")
    out = []
    for mask in range(1, 1 << len(xs)):
        total = None
        idxs = []
        for i in range(len(xs)):
            if mask >> i & 1:
                idxs.append(i)
                total = xs[i] if total is None else total + xs[i]
        out.append((frozenset(idxs), total))
    return out


def fs_set(xs: Sequence[Element], limit: int = DEFAULT_FS_LIMIT) -> set:
    """The 2^|X| - 1 subset sums, as a set (collisions merge)."""
    return {s for _, s in fs_set_formal(xs, limit)}


@dataclass(frozen=True)
class IndexedMatrix:
    """A rows x cols matrix of elements of one group, row index first."""

    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        if not rows or not rows[0]:
            raise StructureError("indexed matrix must be nonempty")
        width = len(rows[0])
        spec = rows[0][0].parent
        for r in rows:
            if len(r) != width:
                raise StructureError("ragged indexed matrix")
            for e in r:
                if e.parent != spec:
                    raise StructureError("matrix entries must share a group")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def entries_distinct(self) -> bool:
        flat = [e for row in self.entries for e in row]
        return len(set(flat)) == len(flat)


def fs_matrix(m: IndexedMatrix, limit: int = 1 << 20) -> set:
    """All sums over strictly increasing column choices with one free row
    index per chosen column: { sum_j m[a_j, i_j] : i_1 < ... < i_k }."""
    formal = (m.rows + 1) ** m.cols - 1
    if formal > limit:
        raise SizeLimitError(
            f"{formal} formal matrix sums exceed limit {limit}")
    out = set()
    cols = range(m.cols)
    for k in range(1, m.cols + 1):
        for col_choice in itertools.combinations(cols, k):
            for row_choice in itertools.product(range(m.rows), repeat=k):
                total = None
                for a, i in zip(row_choice, col_choice):
                    e = m.entries[a][i]
                    total = e if total is None else total + e
                out.add(total)
    return out


# ---------------------------------------------------------------------------
# subgroups and independence


DEFAULT_CLOSURE_CAP = 100_000

_closure_cache: dict = {}


def subgroup_closure(gens: Sequence[Element], cap: int = DEFAULT_CLOSURE_CAP,
                     spec: GroupSpec | None = None) -> frozenset:
    """Smallest subset containing gens and 0, closed under + and -.

    Aborts with ClosureOverflow past `cap` elements, which is how an
    infinite (or merely oversized) subgroup announces itself here.
    """
    gens = list(gens)
    if spec is None:
        if not gens:
            raise StructureError(
                "empty generator list needs an explicit spec for its zero")
        spec = gens[0].parent
    for g in gens:
        if g.parent != spec:
            raise StructureError("generators must share a group")

    key = (spec, frozenset(gens), cap)
    cached = _closure_cache.get(key)
    if cached is not None:
        return cached

    closed = {spec.zero()}
    frontier = []
    for g in gens:
        for h in (g, -g):
            if h not in closed:
                closed.add(h)
                frontier.append(h)
    gens_pm = [h for g in gens for h in (g, -g)]
    while frontier:
        if len(closed) > cap:
            raise ClosureOverflow(cap)
        x = frontier.pop()
        for g in gens_pm:
            y = x + g
            if y not in closed:
                closed.add(y)
                frontier.append(y)
    if len(closed) > cap:
        raise ClosureOverflow(cap)
    result = frozenset(closed)
    if len(_closure_cache) < 1024:
        _closure_cache[key] = result
    return result


def independent_sequence(pool: Sequence[Element], target: int,
                         cap: int = DEFAULT_CLOSURE_CAP) -> list[Element]:
    """Scan `pool` in order, keeping each element that lies outside the
    subgroup generated by those already kept, until `target` are kept.

    Deterministic in pool order.  Raises IndependenceFailure (carrying
    the partial result) if the pool runs out first; ClosureOverflow
    propagates from the membership tests.
    """
    if target == 0:
        return []
    kept: list[Element] = []
    spec = pool[0].parent if pool else None
    for x in pool:
        closed = subgroup_closure(kept, cap, spec=spec or x.parent)
        if x not in closed:
            kept.append(x)
            if len(kept) == target:
                return kept
    raise IndependenceFailure(kept, target)


def is_independent(seq: Sequence[Element], cap: int = DEFAULT_CLOSURE_CAP) -> bool:
    """Check the defining property directly: each term avoids the subgroup
    generated by its predecessors."""
    for i, x in enumerate(seq):
        spec = x.parent
        if x in subgroup_closure(seq[:i], cap, spec=spec):
            return False
    return True
