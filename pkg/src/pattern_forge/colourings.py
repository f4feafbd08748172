"""The explicit colourings used in the negative partition results.

Each colouring is a pure function into ColourToken:

* ``delta_colouring``       branch-distance matrix of a finite set of
                            binary branches (the Boolean-group colouring),
* ``sum_squares_colouring`` exact sum of squared coordinates over
                            torsion-free factors,
* ``product_sigma_colouring`` per-prime-class nonzero-entry sequences,
* ``subgroup_colouring``    parity of the 2-adic order of the leading
                            coordinate away from the 2-part,
* ``valuation_colouring``   parity of the a-adic valuation of the first
                            nonzero integer coordinate.

String ids ("delta", "sum_squares", "product_sigma", "subgroup_parity",
"valuation:a=<prime>") address the colourings from certificates and the
command line.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .groups import (Cyclic, Element, IntegerBox, PreconditionError,
                     PrimePower, RationalBox, StructureError, is_prime,
                     project_p, sigma, supp)
from .tokens import TOP, ColourToken

__all__ = [
    "BinaryBranch", "BranchSet", "delta", "delta_colouring",
    "sum_squares_colouring", "product_sigma_colouring",
    "subgroup_colouring", "valuation_colouring", "resolve_colouring",
    "COLOURING_IDS",
]


# ---------------------------------------------------------------------------
# binary branches and finite branch sets


@dataclass(frozen=True, order=True)
class BinaryBranch:
    """A 0/1 word of fixed length, ordered lexicographically."""

    bits: tuple

    def __post_init__(self):
        bits = tuple(self.bits)
        object.__setattr__(self, "bits", bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"branch bits must be 0/1: {bits!r}")

    @classmethod
    def from_string(cls, s: str) -> "BinaryBranch":
        return cls(tuple(int(ch) for ch in s))

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class BranchSet:
    """A finite set of equal-length branches; the elements of the Boolean
    group of branch sets under symmetric difference.  Stored sorted."""

    branches: tuple

    def __post_init__(self):
        branches = tuple(sorted(set(self.branches)))
        object.__setattr__(self, "branches", branches)
        lengths = {len(b) for b in branches}
        if len(lengths) > 1:
            raise ValueError("branches in one set must share a length")

    @classmethod
    def from_strings(cls, strings: Iterable[str]) -> "BranchSet":
        return cls(tuple(BinaryBranch.from_string(s) for s in strings))

    def symmetric_difference(self, other: "BranchSet") -> "BranchSet":
        return BranchSet(tuple(
            set(self.branches) ^ set(other.branches)))

    def __len__(self):
        return len(self.branches)

    def is_zero(self) -> bool:
        return not self.branches

    def jsonable(self):
        return [str(b) for b in self.branches]


def delta(f: BinaryBranch, g: BinaryBranch):
    """Index of the first disagreement of two equal-length branches, or
    the TOP sentinel when they are equal."""
    if len(f) != len(g):
        raise StructureError("branches have different lengths")
    for i, (a, b) in enumerate(zip(f.bits, g.bits)):
        if a != b:
            return i
    return TOP


def delta_colouring(x: BranchSet) -> ColourToken:
    """The symmetric matrix of pairwise first-disagreement indices of the
    branches of x (sorted lexicographically), TOP on the diagonal."""
    bs = x.branches
    return ColourToken.matrix(
        [[delta(f, g) for g in bs] for f in bs])


# ---------------------------------------------------------------------------
# colourings of group elements


def sum_squares_colouring(x: Element) -> ColourToken:
    """Exact sum of squared coordinates; only defined over torsion-free
    factors, where equal colour means equal Euclidean norm."""
    for f in x.parent.factors:
        if not isinstance(f, (IntegerBox, RationalBox)):
            raise PreconditionError(
                "sum of squares needs torsion-free factors only")
    total = sum((a * a for a in x.coords), start=Fraction(0))
    return ColourToken.int_(total)


def product_sigma_colouring(x: Element) -> ColourToken:
    """Tuple, over the projection classes present in the group (0 first,
    then primes ascending), of the nonzero-entry sequence of the
    projection onto that class."""
    return ColourToken.tuple_(
        sigma(project_p(x, p)) for p in x.parent.prime_classes())


def ord2(q: Fraction) -> int:
    """Exponent i with q = 2^i * a/b, a and b odd.  q must be nonzero."""
    if q == 0:
        raise ValueError("ord2(0) is undefined")
    num, den = q.numerator, q.denominator
    i = 0
    while num % 2 == 0:
        num //= 2
        i += 1
    while den % 2 == 0:
        den //= 2
        i -= 1
    return i


def _coordinate_as_rational(x: Element, index: int) -> Fraction:
    factor = x.parent.factors[index]
    value = x.coords[index]
    if isinstance(factor, PrimePower):
        return factor.as_rational(value)
    if isinstance(factor, Cyclic):
        # same circle-group reading as a prime-power factor
        return Fraction(value, factor.m)
    return Fraction(value)


def subgroup_colouring(x: Element) -> ColourToken:
    """Bit colouring that no nontrivial subgroup avoids (in groups with no
    order-2 elements): locate the least projection class other than 2
    where x is nonzero, read the leading coordinate there as a rational
    in (0, 1) (or as itself on torsion-free factors), and take the parity
    of its 2-adic order.  Zero gets bit 0 by convention.
    """
    if x.is_zero():
        return ColourToken.bit(0)
    classes = [p for p in x.parent.prime_classes() if p != 2]
    for p in classes:
        proj = project_p(x, p)
        if not proj.is_zero():
            lead = min(supp(proj))
            q = _coordinate_as_rational(x, lead)
            return ColourToken.bit(ord2(q) & 1)
    raise PreconditionError(
        "element is supported entirely on the 2-part")


def valuation_colouring(x: Element, a: int) -> ColourToken:
    """Parity of the a-adic valuation of the first nonzero coordinate of
    an integer vector.  Multiplying by a flips the bit, which is what
    makes every nontrivial span bichromatic."""
    if not is_prime(a):
        raise ValueError(f"valuation base must be prime, got {a}")
    for f in x.parent.factors:
        if not isinstance(f, IntegerBox):
            raise PreconditionError("valuation colouring needs integer factors")
    if x.is_zero():
        raise PreconditionError("valuation colouring is undefined at 0")
    lead = x.coords[min(supp(x))]
    val = 0
    while lead % a == 0:
        lead //= a
        val += 1
    return ColourToken.bit(val & 1)


# ---------------------------------------------------------------------------
# registry


COLOURING_IDS = ("delta", "sum_squares", "product_sigma", "subgroup_parity",
                 "valuation:a=<prime>")


def resolve_colouring(colouring_id: str) -> Callable[[Element], ColourToken]:
    """Look up an element colouring by string id.  ("delta" lives on
    branch sets, not group elements, and is resolved by the caller.)"""
    if colouring_id == "sum_squares":
        return sum_squares_colouring
    if colouring_id == "product_sigma":
        return product_sigma_colouring
    if colouring_id == "subgroup_parity":
        return subgroup_colouring
    if colouring_id.startswith("valuation:a="):
        a = int(colouring_id.removeprefix("valuation:a="))
        return lambda x: valuation_colouring(x, a)
    raise ValueError(f"unknown colouring id {colouring_id!r}")
