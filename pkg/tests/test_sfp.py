"""Membership predicates, oracle/fast enumeration agreement, grid maxima."""

import itertools

import pytest

from paforge.field import Field
from paforge.fracpoly import make, value_count
from paforge.poly import Poly
from paforge.sfp import (
    OFFSET_CHOICES,
    SfpQuery,
    Variant,
    best_count,
    enumerate_fast,
    enumerate_oracle,
    field_for_order,
    grid_queries,
    is_member,
    member_q,
    member_q1,
    pp_count,
)

F5 = Field(5)
F7 = Field(7)


def frac(field, num, den=(1,)):
    return make(Poly.of(field, num), Poly.of(field, den))


def test_field_for_order():
    assert field_for_order(19).q == 19
    assert field_for_order(8).q == 8 and field_for_order(8).p == 2
    with pytest.raises(ValueError):
        field_for_order(12)


def test_query_validation():
    with pytest.raises(ValueError):
        SfpQuery(F5, Variant.Q, 2, 2)  # s+t > q-2
    with pytest.raises(ValueError):
        SfpQuery(F5, Variant.Q, 1, 0, a=1)  # offsets need the q+1 variant
    with pytest.raises(ValueError):
        SfpQuery(F5, Variant.Q_PLUS_1, 2, 1, 1, -1)  # s+t+a > q-2
    with pytest.raises(ValueError):
        SfpQuery(F7, Variant.Q_PLUS_1, 0, 2, -1, 1)  # s+a < 0


def test_distance_formula():
    assert SfpQuery(F7, Variant.Q, 1, 2).distance() == 4
    q = SfpQuery(F5, Variant.Q_PLUS_1, 1, 0, 0, 0)
    assert q.distance() == 4  # min(4, 4, 5)
    q = SfpQuery(F7, Variant.Q_PLUS_1, 2, 1, 1, -1)
    assert q.distance() == 4  # min(4, 4, 4)


def test_member_q_examples():
    assert member_q(frac(F5, (0, 1)), 1, 0)
    assert not member_q(frac(F5, (1,), (0, 1)), 1, 1)
    assert member_q(frac(F5, (0, 0, 0, 1)), 3, 0)  # x^3 permutes GF(5)


def test_member_q1_examples():
    assert member_q1(frac(F5, (0, 1)), 1, 0, 0, 0)
    assert member_q1(frac(F5, (1,), (0, 1)), 1, 1, 0, 0)  # pole slack
    assert not member_q1(frac(F5, (0, 0, 1)), 1, 1, 1, -1)


def test_member_rejects_zero_numerator():
    zero = make(Poly.zero(F5), Poly.one(F5))
    for s in range(4):
        for t in range(4 - s):
            assert not member_q(zero, s, t)


def test_oracle_examples():
    assert enumerate_oracle(SfpQuery(F5, Variant.Q, 1, 0)).count == 20
    assert enumerate_oracle(SfpQuery(F5, Variant.Q, 0, 0)).count == 0
    result = enumerate_oracle(SfpQuery(F7, Variant.Q, 1, 1))
    assert result.count == 42
    # All 42 degree-one maps are present.
    affine_keys = {
        frac(F7, (b, a)).sort_key() for a in range(1, 7) for b in range(7)
    }
    assert affine_keys <= {m.sort_key() for m in result.members}


def test_oracle_cap():
    F19 = field_for_order(19)
    with pytest.raises(ValueError):
        enumerate_oracle(SfpQuery(F19, Variant.Q, 9, 8))


def test_fast_members_are_members_and_sorted():
    result = enumerate_fast(SfpQuery(F7, Variant.Q_PLUS_1, 2, 1, 1, -1))
    keys = [m.sort_key() for m in result.members]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys) == result.count
    for member in result.members[:: max(1, result.count // 40)]:
        assert is_member(member, result.query)


@pytest.mark.parametrize("q", [5, 7, 11])
def test_oracle_fast_equivalence_length_q(q):
    F = field_for_order(q)
    for k in range(0, 4):
        for s in range(0, k + 1):
            query = SfpQuery(F, Variant.Q, s, k - s)
            oracle = enumerate_oracle(query)
            fast = enumerate_fast(query)
            assert [m.sort_key() for m in oracle.members] == [
                m.sort_key() for m in fast.members
            ], f"mismatch at {query.describe()}"


@pytest.mark.parametrize("q", [5, 7, 11])
def test_oracle_fast_equivalence_length_q_plus_1(q):
    F = field_for_order(q)
    for k in range(0, 4):
        for s in range(0, k + 1):
            for a, b in OFFSET_CHOICES:
                try:
                    query = SfpQuery(F, Variant.Q_PLUS_1, s, k - s, a, b)
                except ValueError:
                    continue
                oracle = enumerate_oracle(query)
                fast = enumerate_fast(query)
                assert [m.sort_key() for m in oracle.members] == [
                    m.sort_key() for m in fast.members
                ], f"mismatch at {query.describe()}"


def test_normalized_blocks_match_predicate():
    from paforge.fracpoly import FracPoly, is_normalized
    from paforge.sfp import _normalized_num_block

    for field in (F5, Field(2, 2), Field(3, 2)):
        one = Poly.one(field)
        for s2 in range(0, 4):
            block = {
                tuple(int(c) for c in row) for row in _normalized_num_block(field, s2)
            }
            expected = set()
            for coeffs in itertools.product(range(field.q), repeat=s2):
                f = Poly.of(field, coeffs + (1,))
                if is_normalized(FracPoly(f, one)):
                    expected.add(f.coeffs)
            assert block == expected


@pytest.mark.parametrize("q", [4, 9])
def test_oracle_fast_equivalence_extension_fields(q):
    F = field_for_order(q)
    for k in range(0, 3):
        for s in range(0, k + 1):
            for variant, offsets in (
                (Variant.Q, [(0, 0)]),
                (Variant.Q_PLUS_1, OFFSET_CHOICES),
            ):
                for a, b in offsets:
                    try:
                        query = SfpQuery(F, variant, s, k - s, a, b)
                    except ValueError:
                        continue
                    oracle = enumerate_oracle(query)
                    fast = enumerate_fast(query)
                    assert [m.sort_key() for m in oracle.members] == [
                        m.sort_key() for m in fast.members
                    ], f"mismatch at {query.describe()}"


def test_membership_monotone_in_budgets():
    for field in (F5, F7):
        q = field.q
        fractions = []
        for fc in itertools.product(range(q), repeat=3):
            for tail in itertools.product(range(q), repeat=1):
                f = Poly.of(field, fc)
                if f.is_zero():
                    continue
                phi = make(f, Poly.of(field, tail + (1,)))
                fractions.append(phi)
        budgets = [(s, t) for s in range(4) for t in range(4) if s + t <= q - 3]
        for phi in fractions[:: max(1, len(fractions) // 500)]:
            for s, t in budgets:
                if member_q(phi, s, t):
                    assert member_q(phi, s + 1, t)
                    assert member_q(phi, s, t + 1)


def test_membership_invariant_under_transform():
    # Exhaustive at q = 5: every fraction with degrees <= 2, every (alpha,
    # beta), every admissible budget in both variants.
    from paforge.fracpoly import transform

    field = F5
    fractions = set()
    for fc in itertools.product(range(5), repeat=3):
        f = Poly.of(field, fc)
        if f.is_zero():
            continue
        for d in range(3):
            for tail in itertools.product(range(5), repeat=d):
                phi = make(f, Poly.of(field, tail + (1,)))
                fractions.add(phi)
    queries = []
    for s in range(0, 4):
        for t in range(0, 4 - s):
            queries.append(SfpQuery(field, Variant.Q, s, t))
            for a, b in OFFSET_CHOICES:
                try:
                    queries.append(SfpQuery(field, Variant.Q_PLUS_1, s, t, a, b))
                except ValueError:
                    pass
    for phi in fractions:
        prof = value_count(phi)
        flags = [is_member(phi, query, prof) for query in queries]
        for alpha in range(1, 5):
            for beta in range(5):
                img = transform(phi, alpha, beta)
                img_prof = value_count(img)
                assert [is_member(img, query, img_prof) for query in queries] == flags


def test_inequality_lemma_exhaustive():
    for s in range(7):
        for t in range(7):
            for s1 in range(s + 1):
                for s2 in range(s + 1):
                    for t1 in range(t + 1):
                        for t2 in range(t + 1):
                            lhs = (
                                min(s - s1, t - t1)
                                + min(s - s2, t - t2)
                                + max(s1 + t2, s2 + t1)
                            )
                            assert lhs <= s + t


def test_pp_count_examples():
    assert pp_count(5, 1) == 20
    assert pp_count(5, 3) == 120
    assert pp_count(5, 4) == 120
    with pytest.raises(ValueError):
        pp_count(5, 5)


def test_length_q_family_with_zero_denominator_budget_is_pp_set():
    for q in (5, 7):
        F = field_for_order(q)
        for s in range(1, 4):
            count = enumerate_fast(SfpQuery(F, Variant.Q, s, 0)).count
            assert count == pp_count(q, s)


def test_best_count_beats_pp_baseline():
    for q in (5, 7):
        for k in range(1, 4):
            bc = best_count(q, k, Variant.Q)
            assert bc.count >= pp_count(q, k)


def test_q_family_inside_q1_family():
    for q in (5, 7):
        F = field_for_order(q)
        for s in range(0, 3):
            for t in range(0, 3 - s):
                base = enumerate_fast(SfpQuery(F, Variant.Q, s, t))
                ext = enumerate_fast(SfpQuery(F, Variant.Q_PLUS_1, s, t, 0, 0))
                assert {m.sort_key() for m in base.members} <= {
                    m.sort_key() for m in ext.members
                }


def test_best_count_cells_match_per_cell_enumeration():
    # The shared union scan must agree with independent per-cell runs.
    for q, k, variant in [(7, 2, Variant.Q), (7, 2, Variant.Q_PLUS_1), (11, 3, Variant.Q_PLUS_1)]:
        bc = best_count(q, k, variant)
        for (s, t, a, b), count in bc.cell_counts:
            F = field_for_order(q)
            single = enumerate_fast(SfpQuery(F, variant, s, t, a, b))
            assert single.count == count, (q, k, variant, s, t, a, b)


def test_grid_queries_and_tie_break():
    queries = grid_queries(7, 2, Variant.Q_PLUS_1)
    assert all(qq.s + qq.t == 2 for qq in queries)
    bc = best_count(7, 1, Variant.Q)
    assert (bc.s, bc.t) == (1, 0)  # 42 at (1,0); (0,1) has none
    assert bc.count == 42
    with pytest.raises(ValueError):
        best_count(7, 6, Variant.Q)
    with pytest.raises(ValueError):
        best_count(7, 5, Variant.Q_PLUS_1)


def test_manifest_fields():
    res = enumerate_fast(SfpQuery(F5, Variant.Q, 1, 0))
    m = res.manifest(tool_version="x")
    assert m["q"] == 5 and m["count"] == 20 and m["tool_version"] == "x"
    bc = best_count(5, 1, Variant.Q)
    m2 = bc.manifest()
    assert m2["argmax"] == {"s": 1, "t": 0, "a": 0, "b": 0}
