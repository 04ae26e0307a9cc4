"""Exact rational vectors."""
from fractions import Fraction

import numpy as np
import pytest

from thetanorm.core.rational import RationalVector


class TestRationalVector:

    def test_parse_accepts_parentheses_and_spaces(self):
        v = RationalVector.parse("( 1/2, 0 ,-1/3)")
        assert v.entries == (Fraction(1, 2), Fraction(0), Fraction(-1, 3))
        assert str(v) == "(1/2,0,-1/3)"

    def test_parse_rejects_empty(self):
        with pytest.raises(ValueError):
            RationalVector.parse("()")

    @pytest.mark.parametrize("text,expected", [
        ("1/2", "-1/2"),
        ("-1/2", "-1/2"),
        ("3/4", "-1/4"),
        ("7/3", "1/3"),
        ("-5/2", "-1/2"),
        ("2", "0"),
    ])
    def test_reduced_lies_in_half_open_cube(self, text, expected):
        assert RationalVector.parse(text).reduced() == RationalVector.parse(expected)

    def test_reduced_with_shift_recovers_vector(self):
        v = RationalVector.parse("7/3,-5/2,9/4")
        r, m = v.reduced_with_shift()
        assert r + RationalVector(m) == v
        assert all(Fraction(-1, 2) <= x < Fraction(1, 2) for x in r)

    def test_reduced_unit(self):
        assert RationalVector.parse("-1/3,5/4").reduced_unit() == RationalVector.parse("2/3,1/4")

    def test_congruence_and_integrality(self):
        a = RationalVector.parse("1/3,1/2")
        assert a.congruent(a + RationalVector([4, -1]))
        assert not a.congruent(-a)
        assert a.scale(6).is_integral()

    def test_exact_products_with_integer_matrix(self):
        X = np.array([[0, 1], [1, 2]])
        c = RationalVector.parse("1/2,1/3")
        assert c.dot_int_matrix(X) == RationalVector.parse("1/3,7/6")
        assert c.quadratic_int(X) == Fraction(1, 6) + Fraction(7, 18)

    def test_hash_and_order_are_exact(self):
        a = RationalVector.parse("1/2,0")
        b = RationalVector([Fraction(2, 4), 0])
        assert a == b and hash(a) == hash(b)
        assert min(a, RationalVector.parse("-1/2,0")) == RationalVector.parse("-1/2,0")

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            RationalVector.zeros(2) + RationalVector.zeros(3)

    def test_unit(self):
        assert RationalVector.unit(3, 1, Fraction(1, 2)) == RationalVector.parse("0,1/2,0")
