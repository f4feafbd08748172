import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pattern_forge.groups import (ClosureOverflow, Cyclic, GroupSpec,
                                  IndependenceFailure, IndexedMatrix,
                                  IntegerBox, PrimePower, RationalBox,
                                  SizeLimitError, StructureError,
                                  element_from_jsonable, fs_matrix, fs_set,
                                  fs_set_formal, independent_sequence,
                                  is_independent, order, project_p,
                                  sigma, subgroup_closure, supp)
from pattern_forge.tokens import ColourToken

from naive import naive_subset_sums

Z3_2 = GroupSpec.cyclic_power(3, 2)
Z3_4 = GroupSpec.cyclic_power(3, 4)
Z2_2 = GroupSpec.cyclic_power(2, 2)
Z2_3 = GroupSpec.cyclic_power(2, 3)


# -- factor and spec validation ---------------------------------------------

def test_factor_validation():
    with pytest.raises(StructureError):
        Cyclic(1)
    with pytest.raises(StructureError):
        IntegerBox(0)
    with pytest.raises(StructureError):
        PrimePower(4, 1)
    with pytest.raises(StructureError):
        PrimePower(3, 0)
    with pytest.raises(StructureError):
        RationalBox(0, 1)
    with pytest.raises(StructureError):
        GroupSpec(())


def test_coordinates_reduce_to_canonical_form():
    x = Z3_2.element([4, -1])
    assert x.coords == (1, 2)
    pp = GroupSpec((PrimePower(3, 2),))
    assert pp.element([11]).coords == (2,)


def test_rational_box_rejects_off_grid_values():
    spec = GroupSpec((RationalBox(6, 2),))
    assert spec.element([Fraction(1, 2)]).coords == (Fraction(1, 2),)
    with pytest.raises(StructureError):
        spec.element([Fraction(1, 7)])


# -- add / neg / zero --------------------------------------------------------

def test_modular_addition():
    assert (Z3_2.element([1, 2]) + Z3_2.element([2, 2])).coords == (0, 1)


def test_box_addition_is_exact_beyond_the_bound():
    spec = GroupSpec.integer_box(2, 2)
    s = spec.element([2, 0]) + spec.element([2, 0])
    assert s.coords == (4, 0)


def test_inverse_law():
    x = Z3_2.element([1, 2])
    assert (x + (-x)) == Z3_2.zero()


def test_mismatched_specs_raise():
    with pytest.raises(StructureError):
        Z3_2.element([1, 1]) + Z2_2.element([1, 1])


def test_group_laws_exhaustive_on_small_spec():
    elems = list(Z3_2.enumerate())
    for x, y in itertools.product(elems, repeat=2):
        assert x + y == y + x
    for x, y, z in itertools.product(elems[:4], elems[:4], elems[:4]):
        assert (x + y) + z == x + (y + z)
    for x in elems:
        assert x + (-x) == Z3_2.zero()


# -- supp and sigma -----------------------------------------------------------

def test_supp_examples():
    assert supp(Z3_4.element([0, 2, 0, 1])) == {1, 3}
    assert supp(Z3_4.zero()) == frozenset()
    assert supp(Z2_2.element([1, 1])) == {0, 1}


def test_sigma_examples():
    assert sigma(Z3_4.element([0, 2, 0, 1])) == ColourToken.seq([2, 1])
    assert sigma(Z3_4.zero()) == ColourToken.seq([])
    spec = GroupSpec.integer_box(3, 3)
    assert sigma(spec.element([1, 0, -1])) == ColourToken.seq([1, -1])


@given(st.lists(st.integers(0, 2), min_size=1, max_size=6))
def test_sigma_laws(coords):
    spec = GroupSpec.cyclic_power(3, len(coords))
    x = spec.element(coords)
    assert (sigma(x) == ColourToken.seq([])) == x.is_zero()
    assert len(sigma(x).payload) == len(supp(x))


# -- projections --------------------------------------------------------------

def test_projection_examples():
    spec = GroupSpec((PrimePower(3, 2), PrimePower(5, 1)))
    x = spec.element([4, 3])
    assert project_p(x, 3).coords == (4, 0)
    assert project_p(x, 5).coords == (0, 3)
    assert project_p(x, 7) == spec.zero()


def test_projection_partition_of_unity():
    spec = GroupSpec((PrimePower(2, 1), IntegerBox(2), PrimePower(3, 1),
                      RationalBox(2, 1)))
    x = spec.element([1, 2, 2, Fraction(1, 2)])
    total = spec.zero()
    for p in spec.prime_classes():
        total = total + project_p(x, p)
    assert total == x
    for p, q in itertools.combinations(spec.prime_classes(), 2):
        assert project_p(project_p(x, p), q) == spec.zero()


def test_cyclic_factors_project_by_smallest_prime_divisor():
    spec = GroupSpec((Cyclic(6), Cyclic(15)))
    x = spec.element([1, 1])
    assert project_p(x, 2).coords == (1, 0)
    assert project_p(x, 3).coords == (0, 1)


# -- finite sums --------------------------------------------------------------

def test_fs_set_pair():
    x, y = Z3_2.element([1, 0]), Z3_2.element([0, 1])
    assert fs_set([x, y]) == {x, y, x + y}
    assert fs_set([x]) == {x}


def test_fs_set_merges_collisions():
    xs = [Z2_2.element(c) for c in ((1, 0), (0, 1), (1, 1))]
    values = fs_set(xs)
    assert len(values) == 4
    assert values == {Z2_2.element(c)
                      for c in ((1, 0), (0, 1), (1, 1), (0, 0))}


def test_fs_set_matches_naive_oracle_on_small_sets():
    elems = [x for x in Z3_2.enumerate() if not x.is_zero()]
    for size in (2, 3, 4):
        for xs in itertools.combinations(elems, size):
            assert fs_set(list(xs)) == set(naive_subset_sums(list(xs)))


def test_fs_set_limits_and_distinctness():
    x = Z3_2.element([1, 0])
    with pytest.raises(StructureError):
        fs_set([x, x])
    many = [GroupSpec.integer_box(1, 1).element([i]) for i in range(25)]
    with pytest.raises(SizeLimitError):
        fs_set(many)


def test_fs_set_formal_tracks_index_sets():
    x, y = Z3_2.element([1, 0]), Z3_2.element([0, 1])
    formal = fs_set_formal([x, y])
    assert (frozenset([0, 1]), x + y) in formal
    assert len(formal) == 3


def test_fs_matrix_singleton_and_single_row():
    x = Z3_2.element([1, 0])
    m = IndexedMatrix(((x,),))
    assert fs_matrix(m) == {x}
    row = [Z3_2.element([1, 0]), Z3_2.element([0, 1]), Z3_2.element([1, 1])]
    m = IndexedMatrix((tuple(row),))
    assert fs_matrix(m) == fs_set(row)


def test_fs_matrix_two_by_two():
    spec = GroupSpec.integer_box(9, 1)
    e = lambda v: spec.element([v])
    m = IndexedMatrix(((e(1), e(10)), (e(2), e(20))))
    expected = {e(v) for v in
                (1, 2, 10, 20, 11, 21, 12, 22)}
    assert fs_matrix(m) == expected


def test_fs_matrix_formal_sum_limit():
    spec = GroupSpec.integer_box(9, 1)
    row = tuple(spec.element([v]) for v in range(1, 6))
    m = IndexedMatrix((row, row[::-1]))
    with pytest.raises(SizeLimitError):
        fs_matrix(m, limit=10)


def test_indexed_matrix_validation():
    spec = GroupSpec.integer_box(9, 1)
    e = lambda v: spec.element([v])
    with pytest.raises(StructureError):
        IndexedMatrix(())
    with pytest.raises(StructureError):
        IndexedMatrix(((e(1), e(2)), (e(3),)))
    assert IndexedMatrix(((e(1), e(2)),)).entries_distinct()
    assert not IndexedMatrix(((e(1), e(1)),)).entries_distinct()


def test_fs_set_matches_naive_oracle_on_mixed_factors():
    spec = GroupSpec((PrimePower(2, 1), Cyclic(3)))
    elems = [x for x in spec.enumerate() if not x.is_zero()]
    for xs in itertools.combinations(elems, 3):
        assert fs_set(list(xs)) == set(naive_subset_sums(list(xs)))


# -- subgroup closure and independence ---------------------------------------

def test_closure_trivial_and_cyclic():
    assert subgroup_closure([], spec=Z3_2) == {Z3_2.zero()}
    got = subgroup_closure([Z3_2.element([1, 0])])
    assert got == {Z3_2.element([a, 0]) for a in range(3)}


def test_closure_overflow_on_integers():
    spec = GroupSpec.integer_box(5, 1)
    with pytest.raises(ClosureOverflow):
        subgroup_closure([spec.element([1])], cap=100)


def test_independent_sequence_lex_pool():
    pool = [x for x in Z2_3.enumerate() if not x.is_zero()]
    got = independent_sequence(pool, 3)
    assert [x.coords for x in got] == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_independent_sequence_failure_reports_progress():
    z5 = GroupSpec.cyclic_power(5, 1)
    x = z5.element([1])
    with pytest.raises(IndependenceFailure) as err:
        independent_sequence([x, 2 * x], 2)
    assert err.value.achieved == 1
    assert independent_sequence([], 0) == []


def test_independence_defining_property_holds():
    pool = [x for x in GroupSpec.cyclic_power(5, 3).enumerate()
            if not x.is_zero()]
    seq = independent_sequence(pool, 3)
    for i in range(len(seq)):
        assert seq[i] not in subgroup_closure(seq[:i], spec=seq[i].parent)
    assert is_independent(seq)


def test_difference_injectivity_of_independent_sequences():
    # distinct index pairs give distinct differences g_b - g_a
    pool = [x for x in GroupSpec.cyclic_power(5, 3).enumerate()
            if not x.is_zero()]
    g = independent_sequence(pool, 3)
    seen = {}
    for a, b in itertools.combinations(range(len(g)), 2):
        diff = g[b] - g[a]
        assert diff not in seen, (seen[diff], (a, b))
        seen[diff] = (a, b)


# -- order ---------------------------------------------------------------------

def test_order_examples():
    spec = GroupSpec((PrimePower(3, 2), PrimePower(5, 1)))
    assert order(spec.element([3, 0])) == 3
    assert order(spec.zero()) == 1
    boxed = GroupSpec((IntegerBox(2), IntegerBox(2)))
    assert order(boxed.element([1, 0])) is math.inf


def test_order_lcm_across_factors():
    spec = GroupSpec((PrimePower(2, 1), PrimePower(3, 1)))
    assert order(spec.element([1, 1])) == 6


# -- enumeration and JSON ------------------------------------------------------

def test_enumeration_is_lexicographic():
    coords = [x.coords for x in Z2_2.enumerate()]
    assert coords == [(0, 0), (0, 1), (1, 0), (1, 1)]
    box = GroupSpec.integer_box(1, 1)
    assert [x.coords for x in box.enumerate()] == [(-1,), (0,), (1,)]


def test_group_json_round_trip():
    spec = GroupSpec((Cyclic(3), PrimePower(3, 2), IntegerBox(2),
                      RationalBox(6, 2)))
    blob = spec.to_json()
    assert blob == ('{"factors":[{"kind":"cyclic","m":3},'
                    '{"kind":"prime_power","p":3,"k":2},'
                    '{"kind":"int_box","bound":2},'
                    '{"kind":"rat_box","den":6,"bound":2}]}')
    import json
    assert GroupSpec.from_jsonable(json.loads(blob)) == spec


def test_element_json_round_trip():
    spec = GroupSpec((Cyclic(3), RationalBox(6, 2)))
    x = spec.element([2, Fraction(5, 6)])
    data = x.jsonable()
    assert data == [2, [5, 6]]
    assert element_from_jsonable(spec, data) == x
