"""Structured colour values with a canonical byte representation.

Every colouring in this package maps into ColourToken, so that colours
coming from very different constructions (integers, residue sequences,
branch-distance matrices, tuples of those) can be compared, hashed and
serialized uniformly.  Two tokens are equal exactly when their canonical
JSON serializations are byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Iterable


class _Top:
    """Sentinel for the distinguished diagonal entry of a distance matrix."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TOP"


#: Diagonal sentinel, serialized as the JSON string "TOP".
TOP = _Top()


def canonical_scalar(value):
    """Normalize a numeric entry: exact integers stay ints, proper
    fractions become Fraction.  Floats are rejected (arithmetic here is
    exact by design)."""
    if isinstance(value, bool):
        raise TypeError("booleans are not token scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return value
    raise TypeError(f"not an exact scalar: {value!r}")


def scalar_to_jsonable(value):
    """int -> int, Fraction -> [numerator, denominator]."""
    if isinstance(value, int):
        return value
    return [value.numerator, value.denominator]


class ColourToken:
    """Tagged colour value: one of int, bit, seq, matrix, tuple.

    Equality and hashing go through the canonical serialization, which
    is also what the CLI prints and what certificates embed.
    """

    __slots__ = ("kind", "payload", "_canon")

    def __init__(self, kind: str, payload):
        self.kind = kind
        self.payload = payload
        self._canon = json.dumps(self._jsonable(), separators=(",", ":"))

    # -- constructors ---------------------------------------------------

    @classmethod
    def int_(cls, value) -> "ColourToken":
        return cls("int", canonical_scalar(value))

    @classmethod
    def bit(cls, value: int) -> "ColourToken":
        if value not in (0, 1):
            raise ValueError(f"bit must be 0 or 1, got {value!r}")
        return cls("bit", value)

    @classmethod
    def seq(cls, values: Iterable) -> "ColourToken":
        return cls("seq", tuple(canonical_scalar(v) for v in values))

    @classmethod
    def matrix(cls, rows: Iterable[Iterable]) -> "ColourToken":
        norm = []
        for row in rows:
            norm.append(tuple(
                e if e is TOP else canonical_scalar(e) for e in row))
        norm_t = tuple(norm)
        size = len(norm_t)
        for row in norm_t:
            if len(row) != size:
                raise ValueError("matrix token must be square")
        return cls("matrix", norm_t)

    @classmethod
    def tuple_(cls, tokens: Iterable["ColourToken"]) -> "ColourToken":
        toks = tuple(tokens)
        for t in toks:
            if not isinstance(t, ColourToken):
                raise TypeError("tuple token holds ColourTokens only")
        return cls("tuple", toks)

    # -- canonical form -------------------------------------------------

    def _jsonable(self) -> Any:
        if self.kind in ("int", "bit"):
            return scalar_to_jsonable(self.payload)
        if self.kind == "seq":
            return [scalar_to_jsonable(v) for v in self.payload]
        if self.kind == "matrix":
            return [["TOP" if e is TOP else scalar_to_jsonable(e) for e in row]
                    for row in self.payload]
        if self.kind == "tuple":
            return [t._jsonable() for t in self.payload]
        raise AssertionError(f"unknown token kind {self.kind}")

    def to_json(self) -> str:
        """Canonical serialization: compact JSON, no whitespace."""
        return self._canon

    def jsonable(self) -> Any:
        return self._jsonable()

    def __eq__(self, other):
        if not isinstance(other, ColourToken):
            return NotImplemented
        return self._canon == other._canon

    def __hash__(self):
        return hash(self._canon)

    def __repr__(self):
        return f"ColourToken({self.kind}:{self._canon})"


def canonical_json(obj) -> str:
    """Compact JSON with stable key order (insertion order), the hashing
    form used for every serialized structure in this package."""
    return json.dumps(obj, separators=(",", ":"))
