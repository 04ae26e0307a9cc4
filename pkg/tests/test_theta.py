"""Theta series evaluation: truncation, characteristics, fast path, extended precision."""
import itertools
from fractions import Fraction

import numpy as np
import pytest

from thetanorm.core.period import PeriodPoint
from thetanorm.core.rational import RationalVector
from thetanorm.core.theta import (
    budget_for, siegel_theta, tail_bound, theta_char, theta_null, theta_null_fast,
    theta_null_many, truncation_radius,
)
from thetanorm.utils.exceptions import DomainError, PreconditionError

from conftest import THETA3_AT_I


def direct_1d(c: float, tau: complex, terms: int = 60) -> complex:
    return sum(np.exp(1j * np.pi * tau * (n + c) ** 2) for n in range(-terms, terms + 1))


class TestTruncation:

    def test_radius_at_tau_i(self):
        # B(2) = 2 exp(-6.25π) ≈ 6e-9 and B(3) ≈ 4e-17
        budget = truncation_radius(np.eye(1), 1e-12)
        assert budget.radius == 3
        assert budget.lambda_min == pytest.approx(1.0)

    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_radius_is_minimal(self, g):
        imZ = 0.7 * np.eye(g)
        budget = truncation_radius(imZ, 1e-12)
        assert tail_bound(budget.radius, g, 0.7) <= 1e-12
        if budget.radius > 1:
            assert tail_bound(budget.radius - 1, g, 0.7) > 1e-12

    def test_tail_bound_decreases(self):
        values = [tail_bound(R, 3, 0.5) for R in range(1, 8)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_tighter_tolerance_never_shrinks_radius(self):
        assert truncation_radius(np.eye(2), 1e-15).radius >= truncation_radius(np.eye(2), 1e-6).radius

    @pytest.mark.parametrize("imZ,tol", [
        (np.array([[1.0, 0.0], [0.0, -1.0]]), 1e-12),   # not positive definite
        (np.array([[0.01]]), 1e-12),                       # below the supported λ_min
        (np.eye(2), 0.0),
        (np.eye(2), 1.5),
    ])
    def test_rejects_bad_inputs(self, imZ, tol):
        with pytest.raises(DomainError):
            truncation_radius(imZ, tol)


class TestThetaNull:

    def test_one_dimensional_anchor(self, tau_i):
        budget = budget_for(tau_i, 1e-12)
        assert abs(theta_null(RationalVector.zeros(1), tau_i, budget) - THETA3_AT_I) < 1e-12
        assert abs(siegel_theta(tau_i, [0.0], budget) - THETA3_AT_I) < 1e-12

    @pytest.mark.parametrize("c", [Fraction(1, 2), Fraction(1, 3), Fraction(-2, 7), Fraction(5, 4)])
    def test_matches_direct_summation(self, c):
        tau = complex(0.3, 0.8)
        period = PeriodPoint(Z=np.array([[tau]]))
        budget = budget_for(period, 1e-12)
        value = theta_null(RationalVector([c]), period, budget)
        assert abs(value - direct_1d(float(c), tau)) < 1e-11

    def test_even_and_periodic(self, random_point):
        period = random_point(3)
        budget = budget_for(period, 1e-12)
        c = RationalVector.parse("1/3,-1/8,1/2")
        value = theta_null(c, period, budget)
        assert abs(value - theta_null(-c, period, budget)) < 1e-11
        assert abs(value - theta_null(c + RationalVector([1, -2, 3]), period, budget)) < 1e-11

    def test_relation_to_siegel_theta(self, random_point):
        period = random_point(2, seed=3)
        budget = budget_for(period, 1e-12)
        c = RationalVector.parse("1/4,-1/3")
        cf = c.to_floats()
        composite = np.exp(1j * np.pi * cf @ period.Z @ cf) * siegel_theta(period, period.Z @ cf, budget)
        assert abs(composite - theta_null(c, period, budget)) < 1e-10

    def test_dimension_mismatch(self, tau_i):
        budget = budget_for(tau_i, 1e-12)
        with pytest.raises(DomainError):
            theta_null(RationalVector.zeros(2), tau_i, budget)


class TestThetaChar:

    def test_reduction_with_nonzero_b(self, random_point):
        period = random_point(2, seed=5)
        budget = budget_for(period, 1e-12)
        a = RationalVector.parse("3/2,-5/3")
        b = RationalVector.parse("1/3,1/4")
        zero = np.zeros(2)
        reduced = theta_char(a, b, zero, period, budget, reduce=True)
        direct = theta_char(a, b, zero, period, budget, reduce=False)
        assert abs(reduced - direct) < 1e-11

    def test_zero_b_is_theta_null(self, random_point):
        period = random_point(2, seed=6)
        budget = budget_for(period, 1e-12)
        a = RationalVector.parse("1/5,1/2")
        value = theta_char(a, RationalVector.zeros(2), np.zeros(2), period, budget)
        assert abs(value - theta_null(a, period, budget)) < 1e-12

    def test_dimension_mismatch(self, tau_i):
        budget = budget_for(tau_i, 1e-12)
        with pytest.raises(DomainError):
            theta_char(RationalVector.zeros(2), RationalVector.zeros(2), [0, 0], tau_i, budget)


class TestFastPath:

    @pytest.mark.parametrize("c", ["0,0,0", "1/2,1/3,1/8", "-1/4,1/2,5/6", "7/3,-1/2,0"])
    def test_agrees_with_lattice_sum(self, paper_g3, c):
        budget = budget_for(paper_g3, 1e-12)
        c1 = RationalVector.parse(c)
        fast = theta_null_fast(c1, paper_g3.X, paper_g3.k, budget)
        assert abs(fast - theta_null(c1, paper_g3, budget)) < 1e-11

    def test_odd_diagonal_rejected(self):
        budget = truncation_radius(np.eye(1), 1e-12)
        with pytest.raises(PreconditionError):
            theta_null_fast(RationalVector.zeros(1), np.array([[1]]), 1j, budget)

    def test_many_uses_fast_path_for_split_points(self, paper_g3):
        budget = budget_for(paper_g3, 1e-12)
        cs = [RationalVector.parse(s) for s in ("0,0,0", "1/2,0,1/4", "1/3,1/3,1/3")]
        batched = theta_null_many(cs, paper_g3, budget)
        direct = theta_null_many(cs, paper_g3, budget, fast=False)
        assert isinstance(batched, np.ndarray) and batched.shape == (3,)
        assert np.max(np.abs(batched - direct)) < 1e-11

    def test_forcing_fast_path_without_split(self, random_point):
        period = random_point(2)
        with pytest.raises(PreconditionError):
            theta_null_many([RationalVector.zeros(2)], period, budget_for(period, 1e-12), fast=True)


class TestExtendedPrecision:

    def test_matches_double_precision(self, tau_i):
        c = RationalVector.parse("1/3")
        value = theta_null(c, tau_i, budget_for(tau_i, 1e-12, dps=30))
        assert hasattr(value, "_mpc_")
        assert abs(complex(value) - theta_null(c, tau_i, budget_for(tau_i, 1e-12))) < 1e-12

    def test_fast_path_in_extended_precision(self, paper_g3):
        budget = budget_for(paper_g3, 1e-15, dps=32)
        cs = [RationalVector.parse("1/2,1/3,1/8")]
        values = theta_null_many(cs, paper_g3, budget)
        assert isinstance(values, list)
        reference = theta_null(cs[0], paper_g3, budget_for(paper_g3, 1e-12))
        assert abs(complex(values[0]) - reference) < 1e-11


class TestSpecialValues:

    def test_diagonal_period_factorises(self):
        period = PeriodPoint(Z=1j * np.eye(2))
        assert abs(siegel_theta(period, [0, 0], budget_for(period, 1e-12)) - THETA3_AT_I ** 2) < 1e-11

    def test_odd_characteristic_vanishes(self, random_point):
        period = random_point(1, seed=9)
        half = RationalVector.parse("1/2")
        assert abs(theta_char(half, half, [0.0], period, budget_for(period, 1e-12))) < 1e-12


def brute_char(a, b, v, Z, terms: int) -> complex:
    """Plain lattice sum of θ[a;b](v,Z) over the cube |n_i| ≤ terms."""
    a, b, v, Z = (np.asarray(x, dtype=complex) for x in (a, b, v, Z))
    total = 0j
    for n in itertools.product(range(-terms, terms + 1), repeat=len(a)):
        x = np.asarray(n) + a
        total += np.exp(1j * np.pi * x @ Z @ x + 2j * np.pi * x @ (v + b))
    return complex(total)


class TestLatticeSumOracle:

    def test_char_at_tau_i(self, tau_i):
        # two dominant terms: 2 exp(-π/4) cos(π/3) - 2 exp(-9π/4)
        budget = budget_for(tau_i, 1e-12)
        a, b = RationalVector.parse("3/2"), RationalVector.parse("1/3")
        value = theta_char(a, b, [0], tau_i, budget)
        assert abs(value - 0.4542357) < 1e-6
        assert abs(value - brute_char([1.5], [1 / 3], [0], tau_i.Z, 40)) < 1e-12

    @pytest.mark.parametrize("a,b", [("1/3", "1/5"), ("7/4", "-2/3"), ("-5/6", "3/8")])
    def test_char_g1(self, a, b):
        period = PeriodPoint(Z=np.array([[0.3 + 0.8j]]))
        budget = budget_for(period, 1e-12)
        av, bv = RationalVector.parse(a), RationalVector.parse(b)
        v = [0.1 - 0.05j]
        expected = brute_char(av.to_floats(), bv.to_floats(), v, period.Z, 40)
        assert abs(theta_char(av, bv, v, period, budget) - expected) < 1e-10
        assert abs(theta_char(av, bv, v, period, budget, reduce=False) - expected) < 1e-10

    @pytest.mark.parametrize("a,b", [("1/3,-1/4", "1/5,2/3"), ("5/3,3/4", "-1/6,1/8")])
    def test_char_g2(self, random_point, a, b):
        period = random_point(2, seed=8)
        budget = budget_for(period, 1e-12)
        av, bv = RationalVector.parse(a), RationalVector.parse(b)
        v = [0.2, -0.1 + 0.05j]
        expected = brute_char(av.to_floats(), bv.to_floats(), v, period.Z, 12)
        assert abs(theta_char(av, bv, v, period, budget) - expected) < 1e-10

    @pytest.mark.parametrize("g", [1, 2])
    def test_siegel_theta(self, random_point, g):
        period = random_point(g, seed=9)
        budget = budget_for(period, 1e-12)
        v = np.array([0.3 + 0.1j, -0.2][:g])
        expected = brute_char(np.zeros(g), np.zeros(g), v, period.Z, 12)
        assert abs(siegel_theta(period, v, budget) - expected) < 1e-10
