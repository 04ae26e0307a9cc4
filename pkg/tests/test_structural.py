"""Coset decompositions behind the fail1 and fail2 criteria."""
import numpy as np
import pytest

from thetanorm.core.normality import assemble_matrix
from thetanorm.core.polarization import PolarizationType, index_sets
from thetanorm.core.rank import identity_floor
from thetanorm.core.rational import RationalVector
from thetanorm.core.structural import (
    build_Q, fail1_structural_witness, fail2_structural_witness, reduced_rank_equality,
    reduced_spectrum_residual, split_index_sets,
)
from thetanorm.core.tolerances import Tolerances
from thetanorm.utils.exceptions import PreconditionError


class TestSplitIndexSets:

    def test_fail2_type(self):
        split = split_index_sets(PolarizationType((1, 2, 8)))
        assert split.i0 == 1
        assert split.w == RationalVector.parse("0,1/2,0")
        assert len(split.K12) == 8
        assert split.K12_0 == [RationalVector.parse("0,0,0"), RationalVector.parse("0,0,1/2")]
        assert len(split.K12_1) == 6
        assert split.Z22 == [RationalVector.parse(s) for s in ("0,0,0", "0,0,1/2", "1/2,0,0", "1/2,0,1/2")]

    def test_two_in_first_position(self):
        split = split_index_sets(PolarizationType((2, 2, 4)))
        assert split.i0 == 0
        assert len(split.K12) == 8
        assert len(split.K12_0) == 4
        assert all(u[0] == 0 for u in split.K12)

    def test_no_two(self):
        with pytest.raises(PreconditionError):
            split_index_sets(PolarizationType((1, 3, 6)))


class TestBuildQ:

    @pytest.mark.parametrize("d,shape", [((1, 2, 8), (8, 4)), ((2, 2, 4), (8, 4)), ((2, 4, 4), (16, 4))])
    def test_shapes(self, paper_g3, d, shape):
        Q1, Q2 = build_Q(paper_g3, PolarizationType(d))
        assert Q1.shape == Q2.shape == shape

    def test_Q1_is_a_block_of_the_full_matrix(self, paper_g3):
        D = PolarizationType((1, 2, 8))
        split = split_index_sets(D)
        sets = index_sets(D)
        M = assemble_matrix(paper_g3, D, split.w)
        Q1, _ = build_Q(paper_g3, D)
        for a, u in enumerate(split.K12):
            for b, z in enumerate(split.Z22):
                assert abs(Q1[a, b] - M[sets.I.index(u), sets.J.index(z)]) < 1e-13

    def test_Q2_rows_are_Q1_rows_at_minus_u(self, random_point):
        D = PolarizationType((1, 2, 8))
        split = split_index_sets(D)
        Q1, Q2 = build_Q(random_point(3), D)
        position = {u: n for n, u in enumerate(split.K12)}
        for a, u in enumerate(split.K12):
            assert np.max(np.abs(Q2[a] - Q1[position[(-u).reduced_unit()]])) < 1e-13

    def test_corruption_rotates_Q2(self, paper_g3):
        D = PolarizationType((1, 2, 8))
        _, Q2 = build_Q(paper_g3, D)
        _, corrupted = build_Q(paper_g3, D, corrupt_index_order=True)
        assert np.array_equal(np.roll(Q2, 1, axis=0), corrupted)


class TestWitnesses:

    @pytest.mark.parametrize("d", [(2, 2, 4), (2, 4, 4)])
    def test_fail1_at_preset(self, paper_g3, d):
        witness = fail1_structural_witness(paper_g3, PolarizationType(d))
        assert witness
        assert witness.residual < 1e-10

    def test_fail1_at_random_point(self, random_point):
        assert fail1_structural_witness(random_point(3, seed=2), PolarizationType((2, 2, 4)))

    def test_fail1_in_dimension_four(self, paper_g4):
        assert fail1_structural_witness(paper_g4, PolarizationType((2, 2, 2, 4)))

    def test_fail1_precondition(self, paper_g3):
        with pytest.raises(PreconditionError):
            fail1_structural_witness(paper_g3, PolarizationType((1, 2, 8)))

    @pytest.mark.parametrize("seed", [1, 2])
    def test_fail2_at_random_point(self, random_point, seed):
        witness = fail2_structural_witness(random_point(3, seed=seed), PolarizationType((1, 2, 8)))
        assert witness, witness.detail
        assert witness.detail["rank_bound"] == 3
        assert witness.detail["rank"] <= 3

    def test_fail2_in_dimension_four(self, paper_g4):
        witness = fail2_structural_witness(paper_g4, PolarizationType((1, 1, 2, 16)))
        assert witness, witness.detail
        assert witness.detail["shape"] == [16, 8]
        assert witness.detail["rank_bound"] == 7

    def test_row_threshold_scales_with_row_length(self, paper_g3, paper_g4):
        tolerances = Tolerances()
        per_entry = tolerances.zero_slack * tolerances.entry_budget()
        g3 = fail2_structural_witness(paper_g3, PolarizationType((1, 2, 8)), tolerances)
        g4 = fail2_structural_witness(paper_g4, PolarizationType((1, 1, 2, 16)), tolerances)
        assert g3.detail["threshold"] == pytest.approx(per_entry * 4)
        assert g4.detail["threshold"] == pytest.approx(per_entry * 8)
        assert g3.detail["zero_residual"] <= g3.detail["threshold"]

    def test_corrupted_order_is_caught(self, paper_g3):
        witness = fail2_structural_witness(paper_g3, PolarizationType((1, 2, 8)), corrupt_index_order=True)
        assert not witness
        assert witness.detail["checks"]["zero_rows"] is False


class TestReducedRank:

    @pytest.mark.parametrize("d", [(1, 2, 8), (2, 2, 4), (1, 2, 12)])
    def test_equal_ranks(self, paper_g3, d):
        assert reduced_rank_equality(paper_g3, PolarizationType(d)) is True

    def test_elliptic(self, tau_i):
        assert reduced_rank_equality(tau_i, PolarizationType((2,))) is True

    @pytest.mark.parametrize("seed", [20240101, 20240103])
    @pytest.mark.parametrize("d", [(1, 2, 10), (1, 2, 14), (1, 2, 18)])
    def test_spectra_agree_at_random_points(self, random_point, seed, d):
        period = random_point(3, seed=seed)
        residual, threshold = reduced_spectrum_residual(period, PolarizationType(d))
        assert residual <= threshold
        assert reduced_rank_equality(period, PolarizationType(d)) is not False

    def test_spectrum_threshold(self, paper_g3):
        residual, threshold = reduced_spectrum_residual(paper_g3, PolarizationType((1, 2, 8)))
        assert threshold == pytest.approx(2 * identity_floor(Tolerances(), 16, 8))
        assert residual <= threshold
