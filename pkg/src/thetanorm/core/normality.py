"""
Rank matrices of theta constants and the projective normality verdict.

For a type D and w in K₁ the matrix has rows indexed by I ≅ K₁, columns
by J ≅ Z₂ and entry θ[i + j − w/2; 0](0, Z). The line bundle is 2-normal
at Z iff every matrix for w in I′ has rank 2^g.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from thetanorm.config import settings
from thetanorm.core.period import PeriodPoint
from thetanorm.core.polarization import (
    PolarizationType, in_K1, index_sets, predicate_flags, row_orbit_bound,
)
from thetanorm.core.rank import RankReport, RankStatus, needs_confirmation, numeric_rank
from thetanorm.core.rational import RationalVector
from thetanorm.core.theta import SeriesBudget, budget_for, theta_null_many
from thetanorm.core.tolerances import Tolerances
from thetanorm.utils.exceptions import DomainError, UsageError
from thetanorm.utils.parallel import parallel_map


def _symmetric_key(c: RationalVector) -> RationalVector:
    """Shared representative of c and -c modulo ℤ^g."""
    return min(c.reduced(), (-c).reduced())


def theta_null_matrix(period: PeriodPoint, rows: Sequence[RationalVector], cols: Sequence[RationalVector],
                      shift: RationalVector, budget: SeriesBudget) -> np.ndarray:
    """
    Matrix with entry (r, c) = θ[r + c + shift; 0](0, Z).

    Each distinct characteristic (up to sign and ℤ^g) is evaluated once.
    Returns a complex array, or an object array of mpmath values when the
    budget asks for extended precision.
    """
    keys = [_symmetric_key(r + c + shift) for r in rows for c in cols]
    unique = sorted(set(keys))
    values = theta_null_many(unique, period, budget)
    lookup = dict(zip(unique, values))
    dtype = object if budget.dps is not None else complex
    out = np.empty(len(keys), dtype=dtype)
    for n, key in enumerate(keys):
        out[n] = lookup[key]
    return out.reshape(len(rows), len(cols))


def assemble_matrix(period: PeriodPoint, D: PolarizationType, w: RationalVector,
                    tolerances: Tolerances = Tolerances(), budget: Optional[SeriesBudget] = None) -> np.ndarray:
    """
    The |I| × 2^g matrix (θ[i + j − w/2; 0](0, Z)) for i ∈ I, j ∈ J.

    w may be any element of K₁, not only a representative in I′.
    """
    if D.g != period.g:
        raise DomainError(f"type {D} has g={D.g} but the period matrix is {period.g}×{period.g}")
    if not in_K1(D, w):
        raise DomainError(f"w={w} is not in K1 for type {D}")
    if budget is None:
        budget = budget_for(period, tolerances.series_tol, tolerances.dps)
    sets = index_sets(D)
    return theta_null_matrix(period, sets.I, sets.J, w.scale(Fraction(-1, 2)), budget)


def rank_at(period: PeriodPoint, D: PolarizationType, w: RationalVector,
            tolerances: Tolerances = Tolerances(), budget: Optional[SeriesBudget] = None) -> RankReport:
    """numeric_rank of the assembled matrix for w."""
    M = assemble_matrix(period, D, w, tolerances, budget)
    return numeric_rank(M, tolerances, w=w)


def is_two_normal(period: PeriodPoint, D: PolarizationType, tolerances: Tolerances = Tolerances(),
                  jobs: int = 1) -> Tuple[Optional[bool], List[RankReport]]:
    """
    Rank criterion over all w ∈ I′.

    Returns (True, reports) when every report is full, (False, reports) when
    at least one is deficient and (None, reports) otherwise. Reports follow
    the order of I′.
    """
    budget = budget_for(period, tolerances.series_tol, tolerances.dps)
    Iprime = index_sets(D).Iprime
    logging.debug(f"{D}: {len(Iprime)} matrix/matrices at radius {budget.radius} ({period.label})")
    reports = parallel_map(lambda w: rank_at(period, D, w, tolerances, budget), Iprime, max_workers=jobs)

    if any(r.status is RankStatus.DEFICIENT for r in reports):
        return False, reports
    if all(r.status is RankStatus.FULL for r in reports):
        return True, reports
    ambiguous = [str(r.w) for r in reports if r.status is RankStatus.AMBIGUOUS]
    logging.warning(f"{D}: ambiguous rank at w in {', '.join(ambiguous)} ({period.label})")
    return None, reports


# --- Verdict ---

class Conclusion(str, enum.Enum):
    NEVER = "never_normally_generated"
    GENERIC_EVIDENCE = "normally_generated_generic_evidence"
    TWO_NORMAL = "two_normal_at_point"
    NOT_TWO_NORMAL = "not_two_normal_at_point"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Reason:
    """One justification record: a predicate, a hypothesis or a numeric run."""

    kind: str
    name: str
    detail: str
    reports: List[RankReport] = field(default_factory=list)
    period: Optional[str] = None
    tolerances: Optional[Tolerances] = None
    radius: Optional[int] = None
    outcome: Optional[bool] = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "name": self.name, "detail": self.detail}
        if self.kind in ("numeric", "escalation"):
            out["outcome"] = {True: "two_normal", False: "not_two_normal", None: "ambiguous"}[self.outcome]
            out["period"] = self.period
            out["radius"] = self.radius
            out["tolerances"] = self.tolerances.as_dict() if self.tolerances else None
            out["reports"] = [r.as_dict() for r in self.reports]
        return out


@dataclass(frozen=True)
class Verdict:
    type: PolarizationType
    conclusion: Conclusion
    reasons: List[Reason]
    predicates: Dict[str, bool]
    notes: List[str] = field(default_factory=list)

    @property
    def reports(self) -> List[RankReport]:
        """RankReports of the last numeric run, if any."""
        numeric = [r for r in self.reasons if r.reports]
        return numeric[-1].reports if numeric else []

    @property
    def ran_numerics(self) -> bool:
        return any(r.kind in ("numeric", "escalation") for r in self.reasons)

    @property
    def is_exceptional(self) -> bool:
        """Not established as normal: never generated, or not 2-normal at the point."""
        return self.conclusion in (Conclusion.NEVER, Conclusion.NOT_TWO_NORMAL)

    @property
    def is_ambiguous(self) -> bool:
        return self.conclusion is Conclusion.INDETERMINATE


def _numeric_reason(kind: str, name: str, detail: str, period: PeriodPoint, D: PolarizationType,
                    tolerances: Tolerances, jobs: int) -> Reason:
    outcome, reports = is_two_normal(period, D, tolerances, jobs)
    radius = budget_for(period, tolerances.series_tol, tolerances.dps).radius
    return Reason(kind=kind, name=name, detail=detail, reports=reports, period=period.label,
                  tolerances=tolerances, radius=radius, outcome=outcome)


def _unconfirmed_deficiency(reason: Reason) -> bool:
    """Deficient only through reports whose gap is above rounding level."""
    deficient = [r for r in reason.reports if r.status is RankStatus.DEFICIENT]
    return (reason.outcome is False and bool(deficient)
            and all(needs_confirmation(r, reason.tolerances) for r in deficient))


def run_numerics(D: PolarizationType, period: PeriodPoint, tolerances: Tolerances = Tolerances(),
                 jobs: int = 1, escalate: bool = True) -> Tuple[Optional[bool], List[Reason]]:
    """
    is_two_normal with the escalation ladder.

    An ambiguous outcome, or a deficient one whose smallest gap is above
    settings.ROUNDING_GAP, is rerun with the series tolerance tightened,
    mpmath evaluation and certified rank decisions. A result that is still
    ambiguous is then (for seeded points) rerun at the point of the next seed.
    """
    reasons = [_numeric_reason("numeric", "rank_criterion", "rank 2^g for every w in I'",
                               period, D, tolerances, jobs)]
    first = reasons[-1]
    unconfirmed = _unconfirmed_deficiency(first)
    if not escalate or (first.outcome is not None and not unconfirmed):
        return first.outcome, reasons

    tighter = tolerances.escalated()
    if unconfirmed:
        name, detail = "confirm_deficient", "deficient gap above rounding level, rechecked in extended precision"
    else:
        name, detail = "tighter_series", "series tolerance tightened, extended precision"
    logging.info(f"{D}: escalating ({name}) to series_tol={tighter.series_tol:.1e} at {tighter.dps} digits")
    reasons.append(_numeric_reason("escalation", name, detail, period, D, tighter, jobs))
    if reasons[-1].outcome is not None:
        return reasons[-1].outcome, reasons

    if period.seed is not None:
        other = PeriodPoint.random(period.g, period.seed + 1)
        logging.info(f"{D}: escalating to period point {other.label}")
        reasons.append(_numeric_reason("escalation", "next_seed", "rerun at the next seeded period point",
                                       other, D, tighter, jobs))
    return reasons[-1].outcome, reasons


def verdict_notes(D: PolarizationType) -> List[str]:
    notes = []
    if D.d in settings.LISTING_DISCREPANCIES:
        notes.append(settings.LISTING_DISCREPANCIES[D.d])
    bound, w = min((row_orbit_bound(D, w), w) for w in index_sets(D).Iprime)
    if bound < 2 ** D.g:
        notes.append(f"at w={w} the matrix has at most {bound} distinct rows (< 2^g = {2 ** D.g}), "
                     f"so the rank criterion fails structurally")
    return notes


def verdict(D: PolarizationType, period: Optional[PeriodPoint] = None, tolerances: Tolerances = Tolerances(),
            force_numeric: bool = False, confirm_iyer: bool = False, jobs: int = 1,
            escalate: bool = True) -> Verdict:
    """
    Combine the closed-form criteria with the numeric rank criterion.

    Decision order: dimension count, then fail1/fail2, then the Iyer bound
    (generic evidence, A simple assumed), then numerics at the period point.
    Every triggered predicate is recorded, not just the first.
    """
    flags = predicate_flags(D)
    notes = verdict_notes(D)
    reasons = []
    if not flags["necessary"]:
        reasons.append(Reason("predicate", "necessary_condition",
                              f"h0={D.h0} < 2^(g+1)-1={2 ** (D.g + 1) - 1}"))
    if flags["fail1"]:
        reasons.append(Reason("predicate", "fail1", "some d_i = 2 and every d_j <= 4"))
    if flags["fail2"]:
        reasons.append(Reason("predicate", "fail2", f"some d_i = 2 and h0 = 2^(g+1) = {2 ** (D.g + 1)}"))

    if reasons:
        if force_numeric:
            if period is None:
                raise UsageError(f"--force-numeric for {D} needs a period point")
            reasons += run_numerics(D, period, tolerances, jobs, escalate)[1]
        logging.info(f"{D}: never normally generated ({', '.join(r.name for r in reasons if r.kind == 'predicate')})")
        return Verdict(D, Conclusion.NEVER, reasons, flags, notes)

    if flags["iyer"]:
        reasons.append(Reason("predicate", "iyer_bound", f"h0={D.h0} > 2^g*g!"))
        reasons.append(Reason("hypothesis", "A_simple",
                              "normal generation follows only when the abelian variety is simple"))
        if (confirm_iyer or force_numeric) and period is not None:
            reasons += run_numerics(D, period, tolerances, jobs, escalate)[1]
        return Verdict(D, Conclusion.GENERIC_EVIDENCE, reasons, flags, notes)

    if period is None:
        raise UsageError(f"type {D} is not decided by a closed-form criterion; a period point is required")
    outcome, numeric = run_numerics(D, period, tolerances, jobs, escalate)
    reasons += numeric
    conclusion = {True: Conclusion.TWO_NORMAL, False: Conclusion.NOT_TWO_NORMAL,
                  None: Conclusion.INDETERMINATE}[outcome]
    logging.info(f"{D}: {conclusion.value} at {period.label}")
    return Verdict(D, conclusion, reasons, flags, notes)
