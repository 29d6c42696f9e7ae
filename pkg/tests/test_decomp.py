import itertools

import pytest
from hypothesis import given, settings

from bgroups.constructions import chain_group, corner_group, named_example
from bgroups.decomp import enumerate_decompositions, partition_spectrum, realizes
from bgroups.errors import InputError, ResourceError
from bgroups.groups import InvariantData, RigidPiece, direct_sum, invariant_data
from bgroups.partitions import Partition, PartitionFamily, family_C, family_S, family_product, hook_report
from bgroups.search import blago_pair_check

from oracles import b_groups, brute_spectrum, make_types

T = make_types(6)
t1, t2, t3, t4, t5, t6 = T


def spectrum(g):
    return partition_spectrum(invariant_data(g))


class TestDecompositions:
    def test_chain_of_two(self):
        g = direct_sum([RigidPiece((t1, t2), 3), RigidPiece((t2, t3), 5)])
        decs = enumerate_decompositions(invariant_data(g))
        shapes = sorted(tuple(sorted(len(s.types) for s in d.summands)) for d in decs)
        assert shapes == [(1, 3), (2, 2)]
        for d in decs:
            assert invariant_data(d.as_group()).mu == invariant_data(g).mu

    def test_completely_decomposable(self):
        g = direct_sum([RigidPiece((t1,)), RigidPiece((t2,)), RigidPiece((t1,))])
        decs = enumerate_decompositions(invariant_data(g))
        assert len(decs) == 1
        assert decs[0].partition == Partition((1, 1, 1))

    def test_clipped_piece_is_unique(self):
        piece = RigidPiece((t1, t2, t3), 105, (1, 3, 5))
        decs = enumerate_decompositions(invariant_data(direct_sum([piece])))
        assert len(decs) == 1
        assert decs[0].partition == Partition((3,))

    def test_s64_has_eight(self):
        decs = enumerate_decompositions(invariant_data(named_example("s64").group))
        assert len(decs) == 8
        assert len({d.key() for d in decs}) == 8

    def test_to_dict(self):
        g = direct_sum([RigidPiece((t1, t2), 3), RigidPiece((t2, t3), 5)])
        doc = enumerate_decompositions(invariant_data(g))[0].to_dict()
        assert doc["partition"] == [3, 1]
        assert doc["summands"][0]["index"] == 15


class TestSpectrum:
    def test_named_spectra(self):
        assert spectrum(named_example("s64").group) == family_S(6, 4)
        assert spectrum(named_example("s42").group) == family_S(4, 2)
        assert spectrum(corner_group(4, 2, (3, 5))) == family_C(4, 2)

    def test_realizes(self):
        d = invariant_data(named_example("s42").group)
        assert realizes(d, Partition((2, 1, 1)))
        assert not realizes(d, Partition((1, 1, 1, 1)))
        with pytest.raises(InputError):
            realizes(d, Partition((2, 1)))

    def test_caps(self):
        g = direct_sum([RigidPiece((t1,))] * 13)
        with pytest.raises(ResourceError) as info:
            spectrum(g)
        assert info.value.detail["dimension"] == "rank"
        h = direct_sum([RigidPiece((t1, t2), p) for p in (3, 5, 7, 11, 13)])
        with pytest.raises(ResourceError) as info:
            partition_spectrum(invariant_data(h), prime_cap=4)
        assert info.value.detail["dimension"] == "primes"

    def test_invalid_data(self):
        d = InvariantData(((t1, 1, 15), (t2, 1, 5)))
        with pytest.raises(Exception) as info:
            partition_spectrum(d)
        assert getattr(info.value, "code", None) == "REGULATOR_CRITERION"

    def test_chain_x4(self):
        assert spectrum(chain_group(2, (3, 5))) == family_C(4, 2)

    @settings(max_examples=300, derandomize=True, deadline=None)
    @given(b_groups())
    def test_matches_brute_force(self, g):
        assert spectrum(g) == brute_spectrum(g)

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(b_groups(max_rank=6, max_exponent=3))
    def test_exponents_do_not_matter(self, g):
        # replacing every index prime power by the bare prime keeps the spectrum
        from bgroups.groups import factor, realize_from_invariants

        pieces = []
        for piece in g.pieces:
            if piece.rank == 1:
                pieces.append(piece)
                continue
            mu = {t: 1 for t in piece.typeset}
            for t, a in zip(piece.typeset, piece.coefficients):
                for p in factor(piece.index // a):
                    mu[t] *= p
            pieces.append(realize_from_invariants(piece.typeset, mu))
        assert spectrum(direct_sum(pieces)) == spectrum(g)

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(b_groups())
    def test_rank_bound(self, g):
        d = invariant_data(g)
        shortest = min(len(p) for p in partition_spectrum(d))
        assert max(d.ranks.values()) <= shortest

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(b_groups())
    def test_main_properties(self, g):
        family = spectrum(g)
        report = hook_report(family)
        assert report.hooked
        assert len(report.hooks) <= 1
        for a, b in itertools.combinations(family, 2):
            assert blago_pair_check(a, b)

    @settings(max_examples=150, derandomize=True, deadline=None)
    @given(b_groups(max_rank=5, max_types=3, max_primes=3), b_groups(max_rank=5, max_types=6, max_primes=6))
    def test_disjoint_product(self, g1, g2):
        # move g2 onto fresh types and primes so the typesets are disjoint
        relabel = dict(zip(make_types(6), make_types(6, start=200, prefix="u")))
        prime_map = {2: 17, 3: 19, 5: 23, 7: 29, 11: 31, 13: 37}
        from bgroups.groups import factor

        def move(n):
            out = 1
            for p, k in factor(n).items():
                out *= prime_map[p] ** k
            return out

        g2 = direct_sum(RigidPiece(tuple(relabel[t] for t in p.typeset), move(p.index),
                                   tuple(move(a) for a in p.coefficients)) for p in g2.pieces)
        joined = direct_sum(g1.pieces + g2.pieces)
        assert spectrum(joined) == family_product(spectrum(g1), spectrum(g2))


def test_family_type_of_spectrum():
    fam = spectrum(named_example("s53").group)
    assert isinstance(fam, PartitionFamily)
    assert fam.n == 5
