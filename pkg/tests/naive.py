"""Independent brute-force oracles used to cross-check the main routines.

These deliberately share no logic with the search engine: they generate
candidate row tuples directly and test each one with the definitional
adequacy check.  Rows are grouped by their nonzero-entry sequence first,
which is sound because the singleton subset sums already force all rows
of a qualifying tuple into one class.
"""

import itertools

from pattern_forge.patterns import Pattern, is_adequate


def all_rows(m, l, bound=None):
    entries = range(m) if m else range(-bound, bound + 1)
    return [r for r in itertools.product(entries, repeat=l) if any(r)]


def naive_find_adequate(n, m, l_max, bound=None):
    """First adequate pattern by plain generate-and-test, or None."""
    for l in range(1, l_max + 1):
        classes = {}
        for r in all_rows(m, l, bound):
            classes.setdefault(tuple(e for e in r if e), []).append(r)
        for _, members in sorted(classes.items()):
            if len(members) < n:
                continue
            for combo in itertools.combinations(members, n):
                p = Pattern(n, m, l, combo)
                if is_adequate(p).adequate:
                    return p
    return None


def naive_subset_sums(xs):
    """All nonempty-subset sums of a list of elements, no shared helpers."""
    out = []
    for k in range(1, len(xs) + 1):
        for combo in itertools.combinations(xs, k):
            total = combo[0]
            for x in combo[1:]:
                total = total + x
            out.append(total)
    return out
