import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgroups.errors import InputError, ParseError, PreconditionError, ValidationError
from bgroups.groups import (
    BGroup,
    InvariantData,
    PrimeType,
    RigidPiece,
    direct_sum,
    frame_of,
    gcd_base,
    group_from_json,
    group_to_json,
    invariant_data,
    is_clipped,
    is_indecomposable,
    merge_overlap,
    mu_invariants,
    near_iso_equal,
    realize_from_invariants,
    validate_group,
    validate_rigid,
)

from oracles import brute_order, make_types, order_masks, rigid_pieces

T = make_types(8)
t1, t2, t3, t4, t5, t6, t7, t8 = T

E_EXAMPLE = 3 ** 2 * 5 * 7 ** 3
EXAMPLE_PIECE = RigidPiece((t1, t2, t3, t4, t5), E_EXAMPLE, (9, 7, 3, 5, 1))
EXAMPLE_MU = (5 * 7 ** 3, 3 ** 2 * 5 * 7 ** 2, 3 * 5 * 7 ** 3, 3 ** 2 * 7 ** 3, 3 ** 2 * 5 * 7 ** 3)


def codes(report):
    return [v.code for v in report.violations]


class TestGcdBase:
    def test_examples(self):
        assert gcd_base(15435, [9, 7, 3, 5, 1]) == 1
        assert gcd_base(12, [4, 6]) == 2
        assert gcd_base(30, [30, 30, 30]) == 30
        assert gcd_base(30, []) == 30

    def test_oracle_on_examples(self):
        assert 15435 // brute_order(15435, [9, 7, 3, 5, 1]) == 1
        assert 12 // brute_order(12, [4, 6]) == 2

    def test_exhaustive_pairs(self):
        # every coefficient pair for every e <= 200
        for e in range(1, 201):
            masks = order_masks(e)
            both = masks[:, None, :] & masks[None, :, :]
            order = both.argmax(axis=2) + 1
            g = np.gcd(np.gcd(np.arange(e)[:, None], np.arange(e)[None, :]), e)
            assert np.array_equal(e // order, g), e

    @settings(max_examples=300, derandomize=True, deadline=None)
    @given(st.integers(1, 200), st.lists(st.integers(0, 400), min_size=0, max_size=4))
    def test_random_vectors(self, e, coeffs):
        assert gcd_base(e, coeffs) == e // brute_order(e, coeffs)

    def test_rejects_bad_input(self):
        with pytest.raises(InputError):
            gcd_base(0, [1])
        with pytest.raises(InputError):
            gcd_base(6, [-1])


class TestValidateRigid:
    def test_example_piece_valid(self):
        assert validate_rigid(EXAMPLE_PIECE).valid

    def test_rank2_needs_unit_coefficients(self):
        report = validate_rigid(RigidPiece((t1, t2), 15, (3, 1)))
        assert codes(report) == ["REGULATOR_CRITERION"]
        assert report.first.detail["type"] == "t2"

    def test_rank1(self):
        assert validate_rigid(RigidPiece((t1,))).valid
        assert codes(validate_rigid(RigidPiece((t1,), 5))) == ["RANK1_INDEX"]

    def test_structural_errors(self):
        assert codes(validate_rigid(RigidPiece(()))) == ["EMPTY_TYPESET"]
        assert codes(validate_rigid(RigidPiece((t1, t2), 0))) == ["BAD_INDEX"]
        assert codes(validate_rigid(RigidPiece((t1, t2), 5, (1, 1, 1)))) == ["COEFF_COUNT"]
        assert "REPEATED_TYPE" in codes(validate_rigid(RigidPiece((t1, t1), 5)))
        assert codes(validate_rigid(RigidPiece((t1, t2), 6, (4, 1))))[0] == "COEFF_NOT_DIVISOR"

    def test_e_free(self):
        bad = PrimeType("b", frozenset({5}))
        report = validate_rigid(RigidPiece((t1, bad), 15))
        assert codes(report) == ["NOT_E_FREE"]
        assert report.first.detail["primes"] == [5]

    def test_comparable_types(self):
        small = PrimeType("s", frozenset({101}))
        big = PrimeType("b", frozenset({101, 103}))
        assert "NOT_ANTICHAIN" in codes(validate_rigid(RigidPiece((small, big), 5)))

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(rigid_pieces())
    def test_rank2_pieces_have_unit_coefficients(self, piece):
        if piece.rank == 2:
            assert piece.coefficients == (1, 1)
            assert set(mu_invariants(piece).values()) == {piece.index}


class TestMu:
    def test_example(self):
        mu = mu_invariants(EXAMPLE_PIECE)
        assert tuple(mu.values()) == EXAMPLE_MU
        assert EXAMPLE_MU == (1715, 2205, 5145, 3087, 15435)

    def test_rank2_and_rank1(self):
        assert tuple(mu_invariants(RigidPiece((t1, t2), 77)).values()) == (77, 77)
        assert tuple(mu_invariants(RigidPiece((t1,))).values()) == (1,)

    def test_invalid_piece_raises(self):
        with pytest.raises(ValidationError):
            mu_invariants(RigidPiece((t1, t2), 15, (3, 1)))


class TestInvariantData:
    def test_s64_group(self):
        x = direct_sum([RigidPiece((t1, t2), 55), RigidPiece((t1, t3), 7), RigidPiece((t2, t4), 3)])
        d = invariant_data(x)
        assert d.mu == {t1: 385, t2: 165, t3: 7, t4: 3}
        assert d.ranks == {t1: 2, t2: 2, t3: 1, t4: 1}
        assert (d.n, d.e) == (6, 1155)

    def test_rank1(self):
        d = invariant_data(direct_sum([RigidPiece((t1,))]))
        assert d.entries == ((t1, 1, 1),)

    def test_regulator_criterion(self):
        d = InvariantData(((t1, 1, 15), (t2, 1, 5)))
        report = d.validate()
        assert report.first.code == "REGULATOR_CRITERION"
        assert report.first.detail == {"prime": 3, "type": "t1"}

    def test_near_iso(self):
        a = direct_sum([RigidPiece((t1, t2), 5)])
        b = direct_sum([RigidPiece((t1, t2), 7)])
        assert near_iso_equal(invariant_data(a), invariant_data(a))
        assert not near_iso_equal(invariant_data(a), invariant_data(b))

    def test_clipped(self):
        assert is_clipped(invariant_data(direct_sum([RigidPiece((t1, t2), 15)])))
        assert not is_clipped(invariant_data(direct_sum([RigidPiece((t1, t2), 15), RigidPiece((t3,))])))
        assert not is_clipped(invariant_data(direct_sum([RigidPiece((t1, t2), 15), RigidPiece((t1, t2), 7)])))

    @settings(max_examples=300, derandomize=True, deadline=None)
    @given(rigid_pieces(types=T[:4], primes=(3, 5, 7)), rigid_pieces(types=T[2:], primes=(11, 13)))
    def test_product_formula(self, x1, x2):
        d = invariant_data(direct_sum([x1, x2]))
        m1, m2 = mu_invariants(x1), mu_invariants(x2)
        for t in d.types:
            assert d.mu[t] == m1.get(t, 1) * m2.get(t, 1)
        assert d.e == x1.index * x2.index


class TestFrames:
    def test_example_connected(self):
        frame = frame_of(dict(zip(T[:5], EXAMPLE_MU)))
        assert len(frame.edges) == 10
        assert frame.is_connected()
        assert is_indecomposable(EXAMPLE_PIECE)

    def test_no_edge(self):
        assert not frame_of({t1: 3, t2: 5}).is_connected()

    def test_path(self):
        frame = frame_of({t1: 3, t2: 15, t3: 5})
        assert frame.edge_list() == [("t1", "t2"), ("t2", "t3")]
        assert frame.is_connected()

    def test_two_component_piece(self):
        # alpha = (q, q, p, p) on e = pq satisfies the criterion but splits
        piece = RigidPiece((t1, t2, t3, t4), 15, (5, 5, 3, 3))
        assert validate_rigid(piece).valid
        assert not is_indecomposable(piece)
        assert sorted(len(c) for c in frame_of(mu_invariants(piece)).components()) == [2, 2]

    def test_rank1_indecomposable(self):
        assert is_indecomposable(RigidPiece((t1,)))


class TestDirectSum:
    def test_valid(self):
        g = direct_sum([RigidPiece((t1, t2), 5), RigidPiece((t1, t2), 7)])
        assert isinstance(g, BGroup)
        assert g.rank == 4

    def test_index_not_coprime(self):
        with pytest.raises(ValidationError) as info:
            direct_sum([RigidPiece((t1, t2), 6), RigidPiece((t2, t3), 10)])
        assert info.value.code == "INDEX_NOT_COPRIME"

    def test_comparable_types(self):
        small = PrimeType("s", frozenset({101}))
        big = PrimeType("b", frozenset({101, 103}))
        report = validate_group([RigidPiece((small,)), RigidPiece((big,))])
        assert codes(report) == ["NOT_ANTICHAIN"]

    def test_global_e_freeness(self):
        bad = PrimeType("b", frozenset({5}))
        report = validate_group([RigidPiece((t1, t2), 5), RigidPiece((bad,))])
        assert codes(report) == ["NOT_E_FREE"]


class TestMerge:
    def test_two_parallel(self):
        y, shared = merge_overlap(RigidPiece((t1, t2), 5), RigidPiece((t1, t2), 7))
        assert (y.typeset, y.index, y.coefficients) == ((t1, t2), 35, (1, 1))
        assert shared == (t1, t2)

    def test_s64_step(self):
        y, shared = merge_overlap(RigidPiece((t1, t2), 55), RigidPiece((t1, t3), 7))
        assert (y.typeset, y.index, y.coefficients) == ((t1, t2, t3), 385, (1, 7, 55))
        assert shared == (t1,)
        assert tuple(mu_invariants(y).values()) == (385, 55, 7)

    def test_disjoint(self):
        with pytest.raises(PreconditionError) as info:
            merge_overlap(RigidPiece((t1, t2), 5), RigidPiece((t3, t4), 7))
        assert info.value.code == "no_overlap"

    @settings(max_examples=300, derandomize=True, deadline=None)
    @given(rigid_pieces(types=T[:5], primes=(3, 5, 7)), rigid_pieces(types=T[:5], primes=(11, 13)))
    def test_conservation(self, x1, x2):
        if not set(x1.typeset) & set(x2.typeset):
            return
        y, shared = merge_overlap(x1, x2)
        merged = direct_sum([y] + [RigidPiece((t,)) for t in shared])
        assert near_iso_equal(invariant_data(direct_sum([x1, x2])), invariant_data(merged))
        if is_indecomposable(x1) and is_indecomposable(x2):
            assert is_indecomposable(y)


class TestRealize:
    def test_example(self):
        piece = realize_from_invariants(T[:5], dict(zip(T[:5], EXAMPLE_MU)))
        assert piece.index == E_EXAMPLE
        assert piece.coefficients == (9, 7, 3, 5, 1)

    def test_rank2(self):
        piece = realize_from_invariants([t1, t2], {t1: 15, t2: 15})
        assert (piece.index, piece.coefficients) == (15, (1, 1))

    def test_lone_prime(self):
        with pytest.raises(ValidationError) as info:
            realize_from_invariants([t1, t2], {t1: 3, t2: 5})
        assert info.value.code == "REGULATOR_CRITERION"
        assert info.value.report.first.detail == {"prime": 3, "type": "t1"}

    def test_rank1_with_mu(self):
        with pytest.raises(ValidationError) as info:
            realize_from_invariants([t1], {t1: 3})
        assert info.value.code in ("RANK1_INDEX", "REGULATOR_CRITERION")

    @settings(max_examples=300, derandomize=True, deadline=None)
    @given(rigid_pieces())
    def test_inverse_of_mu(self, piece):
        again = realize_from_invariants(piece.typeset, mu_invariants(piece))
        assert (again.index, again.coefficients) == (piece.index, piece.coefficients)


class TestJson:
    def test_round_trip(self):
        g = direct_sum([EXAMPLE_PIECE, RigidPiece((t6, t7), 22), RigidPiece((t8,))])
        doc = group_to_json(g)
        assert doc["pieces"][0]["index"] == {"3": 2, "5": 1, "7": 3}
        assert group_from_json(doc) == g

    def test_rank2_coefficients_optional(self):
        doc = {"type_defs": {"a": {"inverted_primes": [101]}, "b": {"inverted_primes": [103]}},
               "pieces": [{"types": ["a", "b"], "index": {"5": 1}}]}
        g = group_from_json(doc)
        assert g.pieces[0].coefficients == (1, 1)

    def test_schema_error_location(self):
        with pytest.raises(ParseError) as info:
            group_from_json({"type_defs": {}, "pieces": [{"types": []}]})
        assert info.value.location == "$.pieces[0].types"

    def test_undefined_type(self):
        doc = {"type_defs": {"a": {"inverted_primes": [101]}}, "pieces": [{"types": ["a", "z"], "index": {"5": 1}}]}
        with pytest.raises(ParseError) as info:
            group_from_json(doc)
        assert info.value.location == "pieces[0].types"

    def test_non_prime_key(self):
        doc = {"type_defs": {"a": {"inverted_primes": [101]}, "b": {"inverted_primes": [103]}},
               "pieces": [{"types": ["a", "b"], "index": {"6": 1}}]}
        with pytest.raises(ParseError):
            group_from_json(doc)

    def test_e_freeness_reported(self):
        doc = {"type_defs": {"a": {"inverted_primes": [5]}, "b": {"inverted_primes": [103]}},
               "pieces": [{"types": ["a", "b"], "index": {"5": 1}}]}
        with pytest.raises(ValidationError) as info:
            group_from_json(doc)
        assert info.value.code == "NOT_E_FREE"


def test_types_are_frozen_sets_of_primes():
    with pytest.raises(InputError):
        PrimeType("x", frozenset({4}))
    assert PrimeType("a", frozenset({2})) <= PrimeType("b", frozenset({2, 3}))
    assert math.prod(next(iter(t.inverted_primes)) for t in T[:2]) == 101 * 103
