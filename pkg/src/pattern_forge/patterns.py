"""Residue-matrix patterns whose subset sums all share one nonzero-entry
sequence, together with an exhaustive, certificate-grade search for them.

A pattern is an n x l matrix over Z/mZ (m = 0 means exact integers).  It
is *adequate* when the nonzero-entry sequences of all 2^n - 1 nonempty
row-subset sums coincide.  The search enumerates candidate column
sequences depth-first, maintaining for every row subset the prefix of
the common signature it has produced so far; branches die as soon as the
prefixes disagree or simple counting bounds rule out completion.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .groups import (Element, GroupSpec, Cyclic, PreconditionError,
                     fs_set, is_independent, order, sigma)
from .tokens import canonical_json

__all__ = [
    "Pattern", "AdequacyReport", "AdequacyWitness", "SearchConfig",
    "SearchOutcome", "is_adequate", "canonical_2_adequate", "search",
    "lift", "sigma_colouring_check",
]


@dataclass(frozen=True)
class Pattern:
    """n nonzero, pairwise distinct row vectors of length l over Z/mZ."""

    n: int
    m: int
    l: int
    rows: tuple

    def __post_init__(self):
        if self.n < 1 or self.l < 1:
            raise ValueError("pattern needs n >= 1 rows and l >= 1 columns")
        if self.m == 1 or self.m < 0:
            raise ValueError("modulus must be >= 2, or 0 for integer entries")
        rows = tuple(tuple(int(e) % self.m if self.m else int(e) for e in r)
                     for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(rows)}")
        for r in rows:
            if len(r) != self.l:
                raise ValueError("ragged pattern rows")
            if all(e == 0 for e in r):
                raise ValueError("pattern rows must be nonzero")
        if len(set(rows)) != self.n:
            raise ValueError("pattern rows must be pairwise distinct")

    def row_sum(self, mask: int) -> tuple:
        """Entrywise sum of the rows selected by bitmask (mod m)."""
        acc = [0] * self.l
        for i in range(self.n):
            if mask >> i & 1:
                r = self.rows[i]
                for j in range(self.l):
                    acc[j] += r[j]
        if self.m:
            return tuple(e % self.m for e in acc)
        return tuple(acc)

    def jsonable(self):
        return {"n": self.n, "m": self.m, "l": self.l,
                "rows": [list(r) for r in self.rows]}

    def to_json(self) -> str:
        return canonical_json(self.jsonable())

    @classmethod
    def from_jsonable(cls, data) -> "Pattern":
        return cls(data["n"], data["m"], data["l"],
                   tuple(tuple(r) for r in data["rows"]))


def _nonzero_entries(vec: Sequence[int]) -> tuple:
    return tuple(e for e in vec if e != 0)


@dataclass(frozen=True)
class AdequacyWitness:
    """Two row-subset sums whose nonzero-entry sequences differ."""

    mask_a: int
    sum_a: tuple
    sigma_a: tuple
    mask_b: int
    sum_b: tuple
    sigma_b: tuple


@dataclass(frozen=True)
class AdequacyReport:
    adequate: bool
    signature: Optional[tuple] = None
    witness: Optional[AdequacyWitness] = None


def is_adequate(pattern: Pattern) -> AdequacyReport:
    """Check all 2^n - 1 subset sums for a common nonzero-entry sequence.

    Returns the shared signature when adequate, otherwise the first
    disagreeing pair in subset-bitmask order.
    """
    ref_sum = pattern.row_sum(1)
    ref = _nonzero_entries(ref_sum)
    for mask in range(2, 1 << pattern.n):
        s = pattern.row_sum(mask)
        sig = _nonzero_entries(s)
        if sig != ref:
            return AdequacyReport(False, witness=AdequacyWitness(
                1, ref_sum, ref, mask, s, sig))
    return AdequacyReport(True, signature=ref)


def canonical_2_adequate(m: int) -> Pattern:
    """The two-row pattern ((1, -1, 0), (0, 1, -1)) over Z/mZ, which is
    adequate for every modulus (and for exact integers at m = 0)."""
    minus_one = m - 1 if m >= 2 else -1
    return Pattern(2, m, 3, ((1, minus_one, 0), (0, 1, minus_one)))


# ---------------------------------------------------------------------------
# exhaustive search


@dataclass(frozen=True)
class SearchConfig:
    n: int
    m: int
    l_max: int
    l_min: int = 1
    entry_bound: Optional[int] = None
    deterministic: bool = True
    threads: int = 1
    node_cap: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.m == 1 or self.m < 0:
            raise ValueError("modulus must be >= 2, or 0 for integer entries")
        if not 1 <= self.l_min <= self.l_max:
            raise ValueError("need 1 <= l_min <= l_max")
        if self.m == 0:
            if self.entry_bound is None or self.entry_bound < 1:
                raise ValueError("integer search needs entry_bound >= 1")
        elif self.entry_bound is not None:
            raise ValueError("entry_bound only applies at m = 0")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def region(self) -> dict:
        out = {"n": self.n, "m": self.m,
               "l_min": self.l_min, "l_max": self.l_max}
        if self.m == 0:
            out["entry_bound"] = self.entry_bound
        return out


@dataclass(frozen=True)
class SearchOutcome:
    status: str  # "found" | "exhausted" | "inconclusive"
    nodes: int
    region: dict
    pattern: Optional[Pattern] = None

    def jsonable(self):
        out = {"status": self.status, "nodes": self.nodes,
               "region": self.region}
        if self.pattern is not None:
            out["pattern"] = self.pattern.jsonable()
        return out

    def to_json(self) -> str:
        return canonical_json(self.jsonable())


class _NodeBudget:
    __slots__ = ("used", "cap")

    def __init__(self, cap):
        self.used = 0
        self.cap = cap

    def spend(self) -> bool:
        self.used += 1
        return self.cap is None or self.used <= self.cap


def _column_alphabet(n: int, m: int, entry_bound: Optional[int]) -> list:
    if m >= 2:
        entries = range(m)
    else:
        entries = range(-entry_bound, entry_bound + 1)
    zero = (0,) * n
    return [c for c in itertools.product(entries, repeat=n) if c != zero]


def _column_profile(c: tuple, n: int, m: int) -> tuple:
    """(mask, value) for every nonempty row subset with nonzero sum."""
    hits = []
    for mask in range(1, 1 << n):
        s = 0
        for i in range(n):
            if mask >> i & 1:
                s += c[i]
        if m:
            s %= m
        if s != 0:
            hits.append((mask, s))
    return tuple(hits)


def _constraint_groups(n: int, profiles: list) -> list:
    """Counting constraints the demand vector must satisfy.

    For a small set T of row subsets, every column raises the total
    progress of T by one of a fixed set A of amounts (precomputed from
    the alphabet).  Over r remaining columns the total T-demand must lie
    in [r*min A, r*max A] and be congruent to r*min A modulo the gcd of
    (a - min A).  Groups for which that test can never fire are dropped.
    The group of all subsets is always kept; it pins down the possible
    signature lengths.
    """
    n_masks = (1 << n) - 1
    all_masks = tuple(range(1, n_masks + 1))
    groups = []

    def a_set(masks: tuple) -> tuple:
        mask_set = set(masks)
        amounts = set()
        for hits in profiles:
            amounts.add(sum(1 for mk, _ in hits if mk in mask_set))
        lo = min(amounts)
        hi = max(amounts)
        g = math.gcd(*(a - lo for a in amounts)) if len(amounts) > 1 else 0
        return lo, hi, g

    lo, hi, g = a_set(all_masks)
    groups.append((all_masks, lo, hi, g))
    for size in (2, 3):
        for masks in itertools.combinations(all_masks, size):
            lo, hi, g = a_set(masks)
            if lo == 0 and hi == size and g == 1:
                continue  # can never exclude anything
            groups.append((masks, lo, hi, g))
    return groups


def _group_feasible(demand: int, r: int, lo: int, hi: int, g: int) -> bool:
    if not r * lo <= demand <= r * hi:
        return False
    if g > 1 and (demand - r * lo) % g:
        return False
    return True


_FOUND, _EXHAUSTED, _ABORTED = 0, 1, 2


class _LengthSearch:
    """Depth-first search over column sequences of one fixed length."""

    def __init__(self, n: int, m: int, l: int, entry_bound, budget: _NodeBudget):
        self.n = n
        self.m = m
        self.l = l
        self.budget = budget
        self.n_masks = (1 << n) - 1
        alphabet = _column_alphabet(n, m, entry_bound)
        self.columns = alphabet
        self.profiles = [_column_profile(c, n, m) for c in alphabet]
        self.groups = _constraint_groups(n, self.profiles)
        self.progress = [0] * (self.n_masks + 1)  # index by mask, slot 0 unused
        self.signature: list = []
        self.chosen: list = []
        self.memo: set = set()
        self.result: Optional[Pattern] = None

    # feasibility of completing from the current state with r more columns
    def _feasible(self, r: int) -> bool:
        p = self.progress
        k_lo = max(1, max(p[1:]))
        k_hi = min(p[1:]) + r
        if k_lo > k_hi:
            return False
        for k in range(k_lo, k_hi + 1):
            ok = True
            for masks, lo, hi, g in self.groups:
                demand = len(masks) * k - sum(p[mk] for mk in masks)
                if demand < 0 or not _group_feasible(demand, r, lo, hi, g):
                    ok = False
                    break
            if ok:
                return True
        return False

    def _rows(self) -> tuple:
        return tuple(tuple(col[i] for col in self.chosen)
                     for i in range(self.n))

    def run(self) -> int:
        if not self._feasible(self.l):
            return _EXHAUSTED
        return self._dfs(0)

    def _dfs(self, depth: int) -> int:
        if depth == self.l:
            p = self.progress
            k = p[1]
            if any(p[mk] != k for mk in range(2, self.n_masks + 1)):
                return _EXHAUSTED
            rows = self._rows()
            if len(set(rows)) != self.n:
                return _EXHAUSTED
            self.result = Pattern(self.n, self.m, self.l, rows)
            return _FOUND

        key = (depth, tuple(self.progress), tuple(self.signature))
        if key in self.memo:
            return _EXHAUSTED

        p = self.progress
        sig = self.signature
        rest = self.l - depth - 1
        for c, hits in zip(self.columns, self.profiles):
            if not self.budget.spend():
                return _ABORTED
            # check value consistency against the signature built so far
            ext = None
            sig_len = len(sig)
            ok = True
            for mask, v in hits:
                pos = p[mask]
                if pos < sig_len:
                    if sig[pos] != v:
                        ok = False
                        break
                elif ext is None:
                    ext = v
                elif ext != v:
                    ok = False
                    break
            if not ok:
                continue
            for mask, _ in hits:
                p[mask] += 1
            if ext is not None:
                sig.append(ext)
            if self._feasible(rest):
                self.chosen.append(c)
                status = self._dfs(depth + 1)
                self.chosen.pop()
                if status != _EXHAUSTED:
                    # undo before unwinding so callers see a clean state
                    for mask, _ in hits:
                        p[mask] -= 1
                    if ext is not None:
                        sig.pop()
                    return status
            for mask, _ in hits:
                p[mask] -= 1
            if ext is not None:
                sig.pop()

        if len(self.memo) < (1 << 20):
            self.memo.add(key)
        return _EXHAUSTED


def search(cfg: SearchConfig) -> SearchOutcome:
    """Exhaustively search the configured region for an adequate pattern.

    Lengths are swept in ascending order starting from 1; candidate
    columns are tried in lexicographic order, so the reported pattern is
    deterministic for a given region regardless of thread budget.  An
    all-zero column never appears in a minimal pattern (dropping it
    preserves adequacy), so columns are drawn from the nonzero alphabet;
    a witness shorter than l_min is zero-padded back into the region.

    "exhausted" certifies that no adequate pattern with the given (n, m)
    exists at any length <= l_max (entries within the bound when m = 0).
    """
    budget = _NodeBudget(cfg.node_cap)
    for l in range(1, cfg.l_max + 1):
        engine = _LengthSearch(cfg.n, cfg.m, l, cfg.entry_bound, budget)
        status = engine.run()
        if status == _ABORTED:
            return SearchOutcome("inconclusive", budget.used, cfg.region())
        if status == _FOUND:
            pattern = engine.result
            if pattern.l < cfg.l_min:
                pad = cfg.l_min - pattern.l
                rows = tuple(r + (0,) * pad for r in pattern.rows)
                pattern = Pattern(cfg.n, cfg.m, cfg.l_min, rows)
            # self-verification, decoupled from the pruning logic
            if not is_adequate(pattern).adequate:
                raise AssertionError(
                    "search produced a pattern that fails the definitional "
                    "adequacy check; this is a bug")
            return SearchOutcome("found", budget.used, cfg.region(), pattern)
    return SearchOutcome("exhausted", budget.used, cfg.region())


# ---------------------------------------------------------------------------
# lifting a pattern into a group


def lift(pattern: Pattern, gens: Sequence[Element],
         positions: Sequence[int]) -> list[Element]:
    """Realize the pattern inside a group: y_i = sum_j rows[i][j] * g[positions[j]].

    `positions` names one generator per column; when it is longer than
    the pattern the rows are right-padded with zeros.  For m >= 2 every
    used generator must have order exactly m, and the generator list
    must be independent.
    """
    positions = list(positions)
    width = len(positions)
    if width < pattern.l:
        raise PreconditionError(
            f"need at least {pattern.l} positions, got {width}")
    used = [gens[j] for j in positions]
    if pattern.m >= 2:
        for g in used:
            o = order(g)
            if o != pattern.m:
                raise PreconditionError(
                    f"generator has order {o}, pattern modulus is {pattern.m}")
    if not is_independent(list(gens)):
        raise PreconditionError("generators are not independent")
    out = []
    for row in pattern.rows:
        padded = row + (0,) * (width - pattern.l)
        y = None
        for coeff, g in zip(padded, used):
            term = coeff * g
            y = term if y is None else y + term
        out.append(y)
    return out


# ---------------------------------------------------------------------------
# the nonzero-entry-sequence colouring as a pattern detector


def sigma_colouring_check(spec: GroupSpec, n: int) -> Optional[Pattern]:
    """Search a finite power of Z/mZ for n distinct nonzero elements whose
    finite-sum set is monochromatic under the nonzero-entry-sequence
    colouring; package any witness as a Pattern (which is then adequate
    by construction and re-checked here).
    """
    moduli = {f.m for f in spec.factors if isinstance(f, Cyclic)}
    if len(moduli) != 1 or len(spec.factors) != len(
            [f for f in spec.factors if isinstance(f, Cyclic)]):
        raise PreconditionError("need a finite power of a single Z/mZ")
    m = moduli.pop()
    l = len(spec.factors)

    nonzero = [x for x in spec.enumerate() if not x.is_zero()]
    # singleton sums already force a common nonzero-entry sequence, so
    # only subsets drawn from one sigma class can qualify
    classes: dict = {}
    for x in nonzero:
        classes.setdefault(sigma(x), []).append(x)
    for _, members in sorted(classes.items(),
                             key=lambda kv: kv[1][0].coords):
        if len(members) < n:
            continue
        for combo in itertools.combinations(members, n):
            colours = {sigma(s) for s in fs_set(combo)}
            if len(colours) == 1:
                pattern = Pattern(n, m, l, tuple(x.coords for x in combo))
                report = is_adequate(pattern)
                if not report.adequate:
                    raise AssertionError(
                        "monochromatic witness failed the adequacy re-check")
                return pattern
    return None
