"""
Executable versions of the coset decompositions behind the fail1/fail2 theorems.

Let i0 be the first position with d_i0 = 2 and put λ = e_i0, w = λ/2.
K₁ splits as K₁₁ (coordinate i0) × K₁₂ (coordinates after i0; the ones
before i0 are trivial since d_i | 2 and d_i ≠ 2), and Z₂ as Z₂₁ × Z₂₂
with Z₂₂ the half-periods vanishing at i0. The rank matrix at w reduces to
Q = (Q₁ Q₂) with rows u ∈ K₁₂ and columns z ∈ Z₂₂:

    Q₁[u, z] = θ[u + z − w/2; 0](0, Z)
    Q₂[u, z] = θ[u + z + λ/2 − w/2; 0](0, Z)

Evenness of theta constants then forces zero rows of Q₁ − Q₂ on the
2-torsion K₁₂⁰, opposite rows at ±u elsewhere, and, when every d_j ≤ 4,
equal column sums of Q₁ and Q₂.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from thetanorm.core.normality import assemble_matrix, theta_null_matrix
from thetanorm.core.period import PeriodPoint
from thetanorm.core.polarization import PolarizationType, fail1_predicate
from thetanorm.core.rank import RankStatus, identity_floor, numeric_rank, singular_values
from thetanorm.core.rational import RationalVector
from thetanorm.core.theta import budget_for
from thetanorm.core.tolerances import Tolerances
from thetanorm.utils.exceptions import PreconditionError


@dataclass(frozen=True)
class SplitIndexSets:
    i0: int
    K12: List[RationalVector]
    K12_0: List[RationalVector]
    Z22: List[RationalVector]
    w: RationalVector

    @property
    def K12_1(self) -> List[RationalVector]:
        """K₁₂ minus its 2-torsion."""
        torsion = set(self.K12_0)
        return [u for u in self.K12 if u not in torsion]


@dataclass(frozen=True)
class Witness:
    """Outcome of a structural identity check at one period point."""

    passed: bool
    residual: float
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


def split_index_sets(D: PolarizationType) -> SplitIndexSets:
    i0 = D.first_two()
    if i0 is None:
        raise PreconditionError(f"type {D} has no d_i = 2")
    g = D.g
    tail = list(range(i0 + 1, g))

    K12 = []
    for ns in itertools.product(*(range(D.d[j]) for j in tail)):
        coords = [Fraction(0)] * g
        for j, n in zip(tail, ns):
            coords[j] = Fraction(n, D.d[j])
        K12.append(RationalVector(coords))
    K12_0 = [u for u in K12 if u.scale(2).is_integral()]

    others = [j for j in range(g) if j != i0]
    Z22 = []
    for bits in itertools.product((0, 1), repeat=len(others)):
        coords = [Fraction(0)] * g
        for j, b in zip(others, bits):
            coords[j] = Fraction(b, 2)
        Z22.append(RationalVector(coords))

    w = RationalVector.unit(g, i0, Fraction(1, 2))
    return SplitIndexSets(i0=i0, K12=K12, K12_0=K12_0, Z22=Z22, w=w)


def build_Q(period: PeriodPoint, D: PolarizationType, tolerances: Tolerances = Tolerances(),
            corrupt_index_order: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Q₁ and Q₂, each |K₁₂| × 2^(g−1), rows and columns in lexicographic order.

    corrupt_index_order rotates the rows of Q₂ by one; it exists so the
    opposite-row identity can be shown to catch a misplaced representative.
    """
    split = split_index_sets(D)
    budget = budget_for(period, tolerances.series_tol)
    lam_half = RationalVector.unit(D.g, split.i0, Fraction(1, 2))
    shift = split.w.scale(Fraction(-1, 2))
    Q1 = theta_null_matrix(period, split.K12, split.Z22, shift, budget)
    Q2 = theta_null_matrix(period, split.K12, split.Z22, shift + lam_half, budget)
    if corrupt_index_order:
        logging.warning("Building Q with corrupted row order (negative control)")
        Q2 = np.roll(Q2, 1, axis=0)
    return Q1, Q2


def _reduced_pair(period: PeriodPoint, D: PolarizationType,
                  tolerances: Tolerances) -> Tuple[SplitIndexSets, np.ndarray, np.ndarray]:
    split = split_index_sets(D)
    full = assemble_matrix(period, D, split.w, tolerances)
    Q1, Q2 = build_Q(period, D, tolerances)
    return split, full, np.hstack([Q1, Q2])


def reduced_rank_equality(period: PeriodPoint, D: PolarizationType,
                          tolerances: Tolerances = Tolerances()) -> Optional[bool]:
    """
    Whether the full K₁-indexed matrix at w = λ/2 and Q = (Q₁ Q₂) have the same rank.

    None when either rank report is ambiguous.
    """
    split, M, Q = _reduced_pair(period, D, tolerances)
    full = numeric_rank(M, tolerances, w=split.w)
    reduced = numeric_rank(Q, tolerances, w=split.w)
    if RankStatus.AMBIGUOUS in (full.status, reduced.status):
        logging.warning(f"{D}: reduced rank comparison inconclusive ({full.status.value} vs {reduced.status.value})")
        return None
    logging.debug(f"{D}: full rank {full.rank} ({full.shape}), reduced rank {reduced.rank} ({reduced.shape})")
    return full.rank == reduced.rank and full.status == reduced.status


def reduced_spectrum_residual(period: PeriodPoint, D: PolarizationType,
                              tolerances: Tolerances = Tolerances()) -> Tuple[float, float]:
    """
    (max_k |σ_k(M) − √2·σ_k(Q)|, threshold) for the full matrix M at w = λ/2.

    By evenness the row u + λ/2 of M is the row −u of Q, so MᴴM = 2QᴴQ and
    the spectra agree up to the factor √2 at any point, however ill-conditioned.
    """
    _, M, Q = _reduced_pair(period, D, tolerances)
    sigma_full = singular_values(M, tolerances.dps)
    sigma_reduced = singular_values(Q, tolerances.dps)
    sigma_reduced += [0.0] * (len(sigma_full) - len(sigma_reduced))
    residual = max((abs(a - np.sqrt(2.0) * b) for a, b in zip(sigma_full, sigma_reduced)), default=0.0)
    threshold = 2.0 * identity_floor(tolerances, *M.shape)
    if residual > threshold:
        logging.warning(f"{D}: spectra of M and sqrt(2)·Q differ by {residual:.3e} (threshold {threshold:.3e})")
    return float(residual), threshold


def fail1_structural_witness(period: PeriodPoint, D: PolarizationType, tolerances: Tolerances = Tolerances(),
                             corrupt_index_order: bool = False) -> Witness:
    """Column sums of Q₁ and Q₂ agree, so Q·(1,…,1,−1,…,−1)ᵀ = 0."""
    if not fail1_predicate(D):
        raise PreconditionError(f"type {D} does not satisfy the fail1 hypothesis")
    Q1, Q2 = build_Q(period, D, tolerances, corrupt_index_order)
    difference = Q1.sum(axis=1) - Q2.sum(axis=1)
    residual = float(np.max(np.abs(difference))) if difference.size else 0.0
    # each side sums |Z22| entries
    threshold = tolerances.zero_slack * tolerances.entry_budget() * 2 * Q1.shape[1]
    passed = residual <= threshold
    if not passed:
        logging.warning(f"{D}: fail1 column-sum residual {residual:.3e} exceeds {threshold:.3e}")
    return Witness(passed, residual, {"threshold": threshold, "shape": list(Q1.shape)})


def fail2_structural_witness(period: PeriodPoint, D: PolarizationType, tolerances: Tolerances = Tolerances(),
                             corrupt_index_order: bool = False) -> Witness:
    """
    Zero rows of Q₁ − Q₂ on K₁₂⁰, opposite rows at ±u on K₁₂¹, and
    rank(Q₁ − Q₂) ≤ #K₁₂¹ / 2.
    """
    split = split_index_sets(D)
    Q1, Q2 = build_Q(period, D, tolerances, corrupt_index_order)
    P = Q1 - Q2
    rows, cols = P.shape
    position = {u: n for n, u in enumerate(split.K12)}
    # residuals are l1 norms of whole rows; a row of P mixes two entries per column
    threshold = tolerances.zero_slack * tolerances.entry_budget() * cols

    zero_residual = max((float(np.sum(np.abs(P[position[u]]))) for u in split.K12_0), default=0.0)
    opposite_residual = 0.0
    for u in split.K12_1:
        partner = position[(-u).reduced_unit()]
        opposite_residual = max(opposite_residual, float(np.sum(np.abs(P[position[u]] + P[partner]))))

    bound = (len(split.K12) - len(split.K12_0)) // 2
    report = numeric_rank(P, tolerances, noise_floor=identity_floor(tolerances, rows, cols))

    checks = {
        "zero_rows": zero_residual <= threshold,
        "opposite_rows": opposite_residual <= 2 * threshold,
        "rank_bound": report.rank <= bound,
    }
    passed = all(checks.values())
    if not passed:
        failed = ", ".join(name for name, ok in checks.items() if not ok)
        logging.warning(f"{D}: fail2 witness failed ({failed}); residuals {zero_residual:.3e}/{opposite_residual:.3e}")
    detail = {
        "checks": checks,
        "zero_residual": zero_residual,
        "opposite_residual": opposite_residual,
        "threshold": threshold,
        "rank": report.rank,
        "rank_bound": bound,
        "shape": [rows, cols],
    }
    return Witness(passed, max(zero_residual, opposite_residual), detail)
