import pytest

from bgroups.constructions import (
    EXAMPLE_NAMES,
    chain_group,
    corner_group,
    default_primes,
    homogeneous_free,
    named_example,
    rigid_indecomposable,
    sn2_realizer,
)
from bgroups.decomp import partition_spectrum
from bgroups.errors import InputError
from bgroups.groups import invariant_data, is_indecomposable, near_iso_equal, validate_group
from bgroups.partitions import Partition, PartitionFamily, family_C, family_S

from oracles import brute_spectrum

CORNER_PRIMES = (3, 5, 7, 11)


def spectrum(g):
    return partition_spectrum(invariant_data(g))


def test_default_primes():
    assert default_primes(4) == (3, 5, 7, 11)
    assert default_primes(3, start=2) == (2, 3, 5)


class TestCorner:
    def test_data(self):
        d = invariant_data(corner_group(4, 2, (3, 5)))
        t0, t1, t2 = d.types
        assert [(d.ranks[t], d.mu[t]) for t in (t0, t1, t2)] == [(2, 15), (1, 3), (1, 5)]

    @pytest.mark.parametrize("n,k", [(n, k) for n in range(3, 7) for k in range(2, n)])
    def test_spectrum(self, n, k):
        g = corner_group(n, k, CORNER_PRIMES[:n - k])
        assert spectrum(g) == family_C(n, k)
        assert brute_spectrum(g) == family_C(n, k)

    def test_extremes(self):
        assert spectrum(corner_group(4, 4, ())) == PartitionFamily([(1, 1, 1, 1)])
        assert spectrum(corner_group(3, 1, (2, 3))) == family_C(3, 1)

    def test_errors(self):
        with pytest.raises(InputError):
            corner_group(4, 2, (3, 9))
        with pytest.raises(InputError):
            corner_group(4, 2, (3,))
        with pytest.raises(InputError):
            corner_group(4, 5)
        with pytest.raises(InputError):
            corner_group(4, 2, (1, 3))


class TestChain:
    def test_single(self):
        assert spectrum(chain_group(1)) == PartitionFamily([(2,)])

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_spectrum(self, n):
        assert spectrum(chain_group(n)) == family_C(2 * n, n)

    def test_c63(self):
        assert spectrum(chain_group(3, (3, 5, 7))) == PartitionFamily([(4, 1, 1), (3, 2, 1), (2, 2, 2)])

    def test_errors(self):
        with pytest.raises(InputError):
            chain_group(2, (3, 6))
        with pytest.raises(InputError):
            chain_group(0)


class TestSn2:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_spectrum(self, n):
        assert spectrum(sn2_realizer(n)) == family_S(n, 2)

    def test_small(self):
        assert spectrum(sn2_realizer(4)) == PartitionFamily([(2, 2), (2, 1, 1)])
        assert spectrum(sn2_realizer(5)) == PartitionFamily([(2, 2, 1), (2, 1, 1, 1)])
        assert spectrum(sn2_realizer(2)) == PartitionFamily([(2,)])

    def test_errors(self):
        with pytest.raises(InputError):
            sn2_realizer(1)
        with pytest.raises(InputError):
            sn2_realizer(4, (3, 9))


def test_trivial_realizers():
    for n in range(1, 8):
        assert spectrum(homogeneous_free(n)) == family_S(n, 1)
        assert spectrum(rigid_indecomposable(n)) == family_S(n, n)


class TestNamed:
    @pytest.mark.parametrize("name", EXAMPLE_NAMES)
    def test_validates_and_matches(self, name):
        ex = named_example(name)
        assert validate_group(ex.group.pieces).valid
        fam = spectrum(ex.group)
        if ex.expected_spectrum is not None:
            assert fam == ex.expected_spectrum
        for p in ex.expected_contains:
            assert p in fam
        for companion in ex.companions.values():
            assert near_iso_equal(invariant_data(companion), invariant_data(ex.group))
        assert ex.provenance

    def test_s64_mu(self):
        ex = named_example("s64")
        assert tuple(invariant_data(ex.group).mu.values()) == (5 * 7 * 11, 5 * 11 * 3, 7, 3)
        assert sorted(ex.companions) == ["Y", "Z"]

    def test_s53_mu(self):
        p1, p2, p3 = 3, 5, 7
        ex = named_example("s53")
        assert tuple(invariant_data(ex.group).mu.values()) == (p1 * p2 * p3, p2 * p3, p1)
        assert near_iso_equal(invariant_data(ex.group), invariant_data(ex.companions["Y"]))

    def test_final_example(self):
        ex = named_example("ex_522_432")
        fam = spectrum(ex.group)
        for parts in [(5, 2, 2), (4, 3, 2), (5, 3, 1), (6, 2, 1), (7, 1, 1)]:
            assert Partition(parts) in fam
        assert [p.index for p in ex.group.pieces] == [15, 7, 11]
        assert [p.index for p in ex.companions["Y"].pieces] == [35, 3, 11]

    @pytest.mark.parametrize("name", ["s53", "s53_alt", "s64_42", "s64_33", "ex_522_432"])
    def test_pieces_indecomposable(self, name):
        ex = named_example(name)
        for g in [ex.group, *ex.companions.values()]:
            assert all(is_indecomposable(p) for p in g.pieces)

    def test_s64_companion_y_splits(self):
        y = named_example("s64").companions["Y"]
        big = y.pieces[0]
        assert big.index == 21 and not is_indecomposable(big)
        fam = spectrum(y)
        assert fam == family_S(6, 4)

    def test_s64_42_shape(self):
        ex = named_example("s64_42")
        assert sorted(p.rank for p in ex.group.pieces) == [2, 4]

    def test_unknown(self):
        with pytest.raises(InputError):
            named_example("s99")
