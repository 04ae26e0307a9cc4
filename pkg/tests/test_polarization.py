"""Polarization types, index sets and closed-form criteria."""
import math

import pytest

from thetanorm.core.polarization import (
    PolarizationType, enumerate_types, fail1_predicate, fail2_predicate, in_K1, index_sets,
    iyer_bound, necessary_condition, predicate_flags, row_orbit_bound,
)
from thetanorm.core.rational import RationalVector
from thetanorm.utils.exceptions import DomainError


def brute_force_types(g, min_h0, max_h0):
    """Grow chains downward from every last entry through its divisors, then filter on h0."""
    def ending_at(last, length):
        if length == 1:
            yield (last,)
            return
        for a in range(1, last + 1):
            if last % a == 0:
                for chain in ending_at(a, length - 1):
                    yield chain + (last,)

    return {
        chain for last in range(1, max_h0 + 1) for chain in ending_at(last, g)
        if min_h0 <= math.prod(chain) <= max_h0
    }


class TestPolarizationType:

    @pytest.mark.parametrize("text", ["1,2,8", "(1,2,8)", "1 2 8", " [1, 2, 8] "])
    def test_parse(self, text):
        D = PolarizationType.parse(text)
        assert D.d == (1, 2, 8)
        assert D.g == 3 and D.h0 == 16
        assert str(D) == "(1,2,8)"

    @pytest.mark.parametrize("text", ["1,3,4", "0,2", "", "1,x"])
    def test_parse_rejects(self, text):
        with pytest.raises(DomainError):
            PolarizationType.parse(text)

    def test_first_two(self):
        assert PolarizationType((1, 2, 8)).first_two() == 1
        assert PolarizationType((2, 2, 4)).first_two() == 0
        assert PolarizationType((1, 3, 6)).first_two() is None


class TestIndexSets:

    def test_sizes(self):
        sets = index_sets(PolarizationType((1, 2, 8)))
        assert len(sets.I) == 16
        assert len(sets.Iprime) == 4
        assert len(sets.J) == 8

    def test_lexicographic_order(self):
        sets = index_sets(PolarizationType((2, 4)))
        assert sets.I[:3] == [RationalVector.parse(s) for s in ("0,0", "0,1/4", "0,1/2")]
        assert sets.Iprime == [RationalVector.parse(s) for s in ("0,0", "0,1/4", "1/2,0", "1/2,1/4")]
        assert sets.J == [RationalVector.parse(s) for s in ("0,0", "0,1/2", "1/2,0", "1/2,1/2")]

    def test_odd_entries_have_single_representative(self):
        assert index_sets(PolarizationType((1, 3, 9))).Iprime == [RationalVector.zeros(3)]

    def test_in_K1(self):
        D = PolarizationType((1, 2, 8))
        assert in_K1(D, RationalVector.parse("0,1/2,3/8"))
        assert not in_K1(D, RationalVector.parse("0,1/4,0"))
        assert not in_K1(D, RationalVector.parse("1/2,0,0"))
        assert not in_K1(D, RationalVector.parse("0,0"))

    @pytest.mark.parametrize("d,w,bound", [
        ((1, 1, 14), "0,0,0", 8),
        ((1, 1, 14), "0,0,1/14", 7),
        ((1, 7), "0,0", 4),
        ((1, 6), "0,1/6", 3),
        ((2,), "1/2", 1),
    ])
    def test_row_orbit_bound(self, d, w, bound):
        assert row_orbit_bound(PolarizationType(d), RationalVector.parse(w)) == bound


class TestPredicates:

    @pytest.mark.parametrize("d,flags", [
        ((1, 2, 8), {"necessary": True, "fail1": False, "fail2": True, "iyer": False}),
        ((2, 2, 4), {"necessary": True, "fail1": True, "fail2": True, "iyer": False}),
        ((2, 4, 4), {"necessary": True, "fail1": True, "fail2": False, "iyer": False}),
        ((1, 1, 8), {"necessary": False, "fail1": False, "fail2": False, "iyer": False}),
        ((1, 3, 6), {"necessary": True, "fail1": False, "fail2": False, "iyer": False}),
        ((1, 7, 7), {"necessary": True, "fail1": False, "fail2": False, "iyer": True}),
        ((1, 2, 4, 4), {"necessary": True, "fail1": True, "fail2": True, "iyer": False}),
        ((1, 1, 2, 16), {"necessary": True, "fail1": False, "fail2": True, "iyer": False}),
    ])
    def test_flags(self, d, flags):
        assert predicate_flags(PolarizationType(d)) == flags

    def test_boundaries(self):
        assert necessary_condition(PolarizationType((1, 1, 15)))
        assert not necessary_condition(PolarizationType((1, 1, 14)))
        assert not iyer_bound(PolarizationType((1, 1, 48)))
        assert iyer_bound(PolarizationType((1, 1, 49)))

    def test_fail1_needs_a_two(self):
        assert not fail1_predicate(PolarizationType((1, 4, 4)))
        assert not fail2_predicate(PolarizationType((1, 4, 4)))


class TestEnumeration:

    def test_g3_table_range(self):
        types = enumerate_types(3, 15, 16)
        assert [str(D) for D in types] == ["(1,1,15)", "(1,1,16)", "(1,2,8)", "(1,4,4)", "(2,2,4)"]

    @pytest.mark.parametrize("g,low,high", [(1, 1, 30), (2, 1, 120), (3, 15, 48), (4, 31, 400)])
    def test_matches_brute_force(self, g, low, high):
        types = enumerate_types(g, low, high)
        assert {D.d for D in types} == brute_force_types(g, low, high)
        assert [D.sort_key for D in types] == sorted(D.sort_key for D in types)

    @pytest.mark.parametrize("g,low,high", [(0, 1, 5), (2, 0, 5), (2, 6, 5)])
    def test_rejects_bad_bounds(self, g, low, high):
        with pytest.raises(DomainError):
            enumerate_types(g, low, high)
