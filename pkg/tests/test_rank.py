"""Numeric rank certificates."""
from dataclasses import replace

import mpmath
import numpy as np
import pytest

from thetanorm.core.rank import (
    RankStatus, identity_floor, needs_confirmation, numeric_rank, singular_values,
)
from thetanorm.core.rational import RationalVector
from thetanorm.core.tolerances import Tolerances
from thetanorm.utils.exceptions import DomainError


class TestNumericRank:

    def test_identity_is_full(self):
        report = numeric_rank(np.eye(3))
        assert report.status is RankStatus.FULL
        assert report.rank == 3
        assert report.gap == pytest.approx(1.0)

    def test_repeated_columns_are_deficient(self):
        report = numeric_rank(np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]))
        assert report.status is RankStatus.DEFICIENT
        assert report.rank == 1

    def test_zero_matrix(self):
        report = numeric_rank(np.zeros((3, 2)))
        assert report.rank == 0
        assert report.gap == 0.0
        assert report.status is RankStatus.DEFICIENT

    def test_gap_between_thresholds_is_ambiguous(self):
        report = numeric_rank(np.diag([1.0, 1e-7]))
        assert report.status is RankStatus.AMBIGUOUS
        assert report.rank == 2

    def test_fewer_rows_than_columns_pads_with_zeros(self):
        report = numeric_rank(np.array([[1.0, 1.0]]))
        assert report.sigma[1] == 0.0
        assert report.rank == 1
        assert report.status is RankStatus.DEFICIENT

    def test_noise_floor_counts_as_zero(self):
        M = np.diag([1.0, 1e-9])
        assert numeric_rank(M).status is RankStatus.AMBIGUOUS
        floored = numeric_rank(M, noise_floor=1e-8)
        assert floored.status is RankStatus.DEFICIENT
        assert floored.rank == 1

    def test_custom_thresholds(self):
        loose = Tolerances(accept=1e-8, reject=1e-12, rank_tol=1e-11)
        assert numeric_rank(np.diag([1.0, 1e-7]), loose).status is RankStatus.FULL

    def test_report_dict(self):
        w = RationalVector.parse("1/2")
        data = numeric_rank(np.eye(2, dtype=complex), w=w).as_dict()
        assert data["w"] == ["1/2"]
        assert data["shape"] == [2, 2]
        assert data["status"] == "full"
        assert list(data) == ["w", "shape", "sigma", "rank", "gap", "status"]


class TestSingularValues:

    def test_descending(self):
        assert singular_values(np.diag([1.0, 3.0, 2.0])) == pytest.approx([3.0, 2.0, 1.0])

    def test_extended_precision_object_array(self):
        M = np.array([[mpmath.mpc(1, 0), 0], [0, mpmath.mpc(0, 2)]], dtype=object)
        assert singular_values(M, dps=30) == pytest.approx([2.0, 1.0])
        assert numeric_rank(M, Tolerances(dps=30)).status is RankStatus.FULL

    def test_extended_precision_tall_and_wide(self):
        tall = np.array([[mpmath.mpc(3, 0), 0], [0, mpmath.mpc(0, 1)], [0, 0]], dtype=object)
        assert singular_values(tall, dps=30) == pytest.approx([3.0, 1.0])
        assert singular_values(tall.T, dps=30) == pytest.approx([3.0, 1.0])

    def test_empty(self):
        assert singular_values(np.zeros((0, 2))) == []


class TestTolerances:

    def test_escalated(self):
        tighter = Tolerances().escalated()
        assert tighter.series_tol == pytest.approx(1e-15)
        assert tighter.dps == 32
        assert tighter.accept == Tolerances().accept
        assert tighter.certify and not Tolerances().certify

    def test_identity_floor(self):
        assert identity_floor(Tolerances(), 2, 8) == pytest.approx(10 * 2e-12 * 4)

    @pytest.mark.parametrize("kwargs", [
        {"series_tol": 0.0},
        {"accept": 1e-10, "reject": 1e-6},
        {"rank_tol": 1.0},
        {"zero_slack": -1.0},
        {"dps": 8},
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(DomainError):
            Tolerances(**kwargs)


class TestCertifiedRank:

    @pytest.fixture
    def certified(self) -> Tolerances:
        return Tolerances().escalated()

    def test_small_gap_above_error_bound_is_full(self, certified):
        report = numeric_rank(np.diag([1.0, 1e-7]), certified)
        assert report.error_bound == pytest.approx(10 * 2e-15 * 2)
        assert report.status is RankStatus.FULL
        assert report.rank == 2
        assert report.as_dict()["error_bound"] == report.error_bound

    def test_deficient_inside_error_bound(self, certified):
        report = numeric_rank(np.diag([1.0, 1e-14]), certified)
        assert report.status is RankStatus.DEFICIENT

    def test_ambiguous_inside_error_bound(self, certified):
        report = numeric_rank(np.diag([1e-8, 1e-15]), certified)
        assert report.status is RankStatus.AMBIGUOUS

    def test_uncertified_pass_keeps_the_gap_rule(self):
        report = numeric_rank(np.diag([1.0, 1e-11]))
        assert report.status is RankStatus.DEFICIENT
        assert report.error_bound is None

    @pytest.mark.parametrize("diagonal,expected", [
        ([1.0, 1e-12], True),
        ([1.0, 1e-15], False),
        ([1.0, 0.0], False),
        ([1.0, 0.5], False),
    ])
    def test_needs_confirmation(self, diagonal, expected):
        assert needs_confirmation(numeric_rank(np.diag(diagonal))) is expected

    def test_certified_tolerances_need_no_confirmation(self, certified):
        report = numeric_rank(np.diag([1.0, 1e-12]))
        assert needs_confirmation(report)
        assert not needs_confirmation(report, certified)

    def test_certified_double_precision(self, certified):
        report = numeric_rank(np.diag([1.0, 1e-12]), replace(certified, dps=None))
        assert report.status is RankStatus.FULL
