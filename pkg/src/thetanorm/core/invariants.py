"""
Property suites over seeded random period points.

Each suite evaluates an exact identity of theta series (or of the rank
matrices built from them) on many samples and reports the largest
residual against the slack-scaled per-entry error budget.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from thetanorm.core.normality import is_two_normal
from thetanorm.core.period import PeriodPoint
from thetanorm.core.polarization import (
    PolarizationType, enumerate_types, fail1_predicate, fail2_predicate,
)
from thetanorm.core.rational import RationalVector
from thetanorm.core.theta import (
    budget_for, siegel_theta, theta_char, theta_null, theta_null_fast,
)
from thetanorm.core.tolerances import Tolerances
from thetanorm.core.structural import (
    fail1_structural_witness, fail2_structural_witness, reduced_rank_equality,
    reduced_spectrum_residual,
)


@dataclass
class SuiteResult:
    name: str
    g: int
    samples: int
    max_residual: float
    threshold: float
    passed: bool
    failures: List[str] = field(default_factory=list)
    # checks that could not decide (ambiguous rank reports)
    skipped: int = 0

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "g": self.g,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "threshold": self.threshold,
            "passed": self.passed,
            "failures": list(self.failures),
            "skipped": self.skipped,
        }


@dataclass(frozen=True)
class SuiteContext:
    """Inputs shared by every suite for one dimension g."""

    g: int
    seed: int
    samples: int
    structural_samples: int
    tolerances: Tolerances
    period: Optional[PeriodPoint] = None
    corrupt_index_order: bool = False

    @property
    def threshold(self) -> float:
        return self.tolerances.zero_slack * self.tolerances.entry_budget()

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, self.g, salt])

    def random_points(self, count: int) -> List[PeriodPoint]:
        return [PeriodPoint.random(self.g, self.seed + n) for n in range(count)]

    def structural_points(self) -> List[PeriodPoint]:
        points = self.random_points(self.structural_samples)
        if self.period is not None and self.period.g == self.g:
            points.insert(0, self.period)
        return points


def random_rational(rng: np.random.Generator, g: int, span: int = 1, max_den: int = 8) -> RationalVector:
    """Rationals n/q with q in 1..max_den and |n/q| ≤ span."""
    out = []
    for _ in range(g):
        q = int(rng.integers(1, max_den + 1))
        out.append(Fraction(int(rng.integers(-span * q, span * q + 1)), q))
    return RationalVector(out)


def random_even_split(rng: np.random.Generator, g: int) -> PeriodPoint:
    """Z = X + k·Id with X integer symmetric, even diagonal, and Im k in [0.5, 1.5]."""
    X = rng.integers(-3, 4, size=(g, g))
    X = np.triu(X, 1) + np.triu(X, 1).T + np.diag(2 * rng.integers(-2, 3, size=g))
    k = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 1.5))
    return PeriodPoint.from_split(X, k, label="random-split")


def _identity_suite(name: str, ctx: SuiteContext, residual: Callable[[int, np.random.Generator], float]) -> SuiteResult:
    rng = ctx.rng(sum(ord(ch) for ch in name))
    worst = 0.0
    failures = []
    for n in range(ctx.samples):
        r = residual(n, rng)
        worst = max(worst, r)
        if not r <= ctx.threshold:
            failures.append(f"sample {n}: residual {r:.3e}")
    result = SuiteResult(name, ctx.g, ctx.samples, worst, ctx.threshold, not failures, failures[:10])
    logging.info(f"{name} g={ctx.g}: {ctx.samples} samples, max residual {worst:.3e} "
                 f"({'pass' if result.passed else 'FAIL'})")
    return result


# --- Theta identities ---

def check_parity(ctx: SuiteContext) -> SuiteResult:
    """θ(Z, −v) = θ(Z, v)."""
    def residual(n, rng):
        period = PeriodPoint.random(ctx.g, ctx.seed + n)
        budget = budget_for(period, ctx.tolerances.series_tol)
        v = rng.uniform(-1.0, 1.0, size=ctx.g)
        return abs(siegel_theta(period, v, budget) - siegel_theta(period, -v, budget))
    return _identity_suite("parity", ctx, residual)


def check_lattice_periodicity(ctx: SuiteContext) -> SuiteResult:
    """θ(Z, v + m) = θ(Z, v) for m ∈ ℤ^g."""
    def residual(n, rng):
        period = PeriodPoint.random(ctx.g, ctx.seed + n)
        budget = budget_for(period, ctx.tolerances.series_tol)
        v = rng.uniform(-1.0, 1.0, size=ctx.g)
        m = rng.integers(-3, 4, size=ctx.g)
        return abs(siegel_theta(period, v + m, budget) - siegel_theta(period, v, budget))
    return _identity_suite("lattice_periodicity", ctx, residual)


def check_characteristic_reduction(ctx: SuiteContext) -> SuiteResult:
    """θ[a;b] summed around a directly agrees with the value at the reduced characteristic."""
    def residual(n, rng):
        period = PeriodPoint.random(ctx.g, ctx.seed + n)
        budget = budget_for(period, ctx.tolerances.series_tol)
        a = random_rational(rng, ctx.g, span=2)
        b = random_rational(rng, ctx.g).reduced_unit()
        zero = np.zeros(ctx.g)
        reduced = theta_char(a, b, zero, period, budget, reduce=True)
        direct = theta_char(a, b, zero, period, budget, reduce=False)
        return abs(reduced - direct)
    return _identity_suite("characteristic_reduction", ctx, residual)


def check_transformation_invariance(ctx: SuiteContext) -> SuiteResult:
    """θ(Z + X, v) = θ(Z, v) for X integer symmetric with even diagonal."""
    def residual(n, rng):
        period = PeriodPoint.random(ctx.g, ctx.seed + n)
        X = random_even_split(rng, ctx.g).X
        budget = budget_for(period, ctx.tolerances.series_tol)
        v = rng.uniform(-1.0, 1.0, size=ctx.g)
        return abs(siegel_theta(period.shifted(X), v, budget) - siegel_theta(period, v, budget))
    return _identity_suite("transformation_invariance", ctx, residual)


def check_fast_path(ctx: SuiteContext) -> SuiteResult:
    """Diagonal product formula against the full lattice sum."""
    def residual(n, rng):
        period = random_even_split(rng, ctx.g)
        budget = budget_for(period, ctx.tolerances.series_tol)
        c = random_rational(rng, ctx.g)
        fast = theta_null_fast(c, period.X, period.k, budget)
        return abs(fast - theta_null(c, period, budget))
    return _identity_suite("fast_path_equivalence", ctx, residual)


def check_null_symmetry(ctx: SuiteContext) -> SuiteResult:
    """θ[c;0](0,Z) = θ[−c;0](0,Z) = θ[c+m;0](0,Z)."""
    def residual(n, rng):
        period = PeriodPoint.random(ctx.g, ctx.seed + n)
        budget = budget_for(period, ctx.tolerances.series_tol)
        c = random_rational(rng, ctx.g)
        m = RationalVector(int(x) for x in rng.integers(-2, 3, size=ctx.g))
        value = theta_null(c, period, budget)
        return max(abs(value - theta_null(-c, period, budget)), abs(value - theta_null(c + m, period, budget)))
    return _identity_suite("null_symmetry", ctx, residual)


def check_convergence(ctx: SuiteContext) -> SuiteResult:
    """Values at the chosen radius R agree with R + 2 within the tolerance."""
    def residual(n, rng):
        period = PeriodPoint.random(ctx.g, ctx.seed + n)
        budget = budget_for(period, ctx.tolerances.series_tol)
        c = random_rational(rng, ctx.g)
        wider = budget.with_radius(budget.radius + 2)
        return abs(theta_null(c, period, budget) - theta_null(c, period, wider))
    return _identity_suite("convergence", ctx, residual)


# --- Structural suites ---

def _table_range(g: int) -> List[PolarizationType]:
    """Types between the dimension count and the Iyer bound (empty for g = 1)."""
    low, high = 2 ** (g + 1) - 1, 2 ** g * math.factorial(g)
    return enumerate_types(g, low, high) if low <= high else []


def structural_types(g: int) -> List[PolarizationType]:
    """fail1 or fail2 types between the dimension count and the Iyer bound."""
    return [D for D in _table_range(g) if fail1_predicate(D) or fail2_predicate(D)]


def _typed_suite(name: str, ctx: SuiteContext, types: Sequence[PolarizationType],
                 check: Callable[[PeriodPoint, PolarizationType], tuple]) -> SuiteResult:
    """check returns (passed, residual); passed=None counts as skipped, not failed."""
    worst = 0.0
    failures = []
    samples = 0
    skipped = 0
    for D in types:
        for period in ctx.structural_points():
            passed, r = check(period, D)
            samples += 1
            worst = max(worst, r)
            if passed is None:
                skipped += 1
            elif not passed:
                failures.append(f"{D} at {period.label}")
    result = SuiteResult(name, ctx.g, samples, worst, ctx.threshold, not failures, failures[:10], skipped)
    logging.info(f"{name} g={ctx.g}: {samples} checks over {len(types)} type(s), {skipped} skipped "
                 f"({'pass' if result.passed else 'FAIL'})")
    return result


def check_fail1_witnesses(ctx: SuiteContext) -> SuiteResult:
    types = [D for D in structural_types(ctx.g) if fail1_predicate(D)]

    def check(period, D):
        witness = fail1_structural_witness(period, D, ctx.tolerances, ctx.corrupt_index_order)
        return witness.passed, witness.residual
    return _typed_suite("fail1_witness", ctx, types, check)


def check_fail2_witnesses(ctx: SuiteContext) -> SuiteResult:
    """Zero/opposite rows on every type with a 2, the rank bound on fail2 types."""
    types = structural_types(ctx.g)

    def check(period, D):
        witness = fail2_structural_witness(period, D, ctx.tolerances, ctx.corrupt_index_order)
        if fail2_predicate(D):
            return witness.passed, witness.residual
        checks = witness.detail["checks"]
        return checks["zero_rows"] and checks["opposite_rows"], witness.residual
    return _typed_suite("fail2_witness", ctx, types, check)


def check_reduced_rank(ctx: SuiteContext) -> SuiteResult:
    """Every type with some d_i = 2 between the dimension count and the Iyer bound."""
    types = [D for D in _table_range(ctx.g) if D.first_two() is not None]

    def check(period, D):
        residual, threshold = reduced_spectrum_residual(period, D, ctx.tolerances)
        if residual > threshold:
            return False, residual
        return reduced_rank_equality(period, D, ctx.tolerances), residual
    return _typed_suite("reduced_rank_equality", ctx, types, check)


def check_dimension_count(ctx: SuiteContext) -> SuiteResult:
    """Below h0 = 2^(g+1) − 1 every sampled point has a deficient w."""
    low = 2 ** ctx.g - 1
    high = 2 ** (ctx.g + 1) - 2
    types = enumerate_types(ctx.g, max(low, 1), high) if high >= max(low, 1) else []

    def check(period, D):
        outcome, _ = is_two_normal(period, D, ctx.tolerances)
        return outcome is False, 0.0
    return _typed_suite("dimension_count", ctx, types, check)


THETA_SUITES: Dict[str, Callable[[SuiteContext], SuiteResult]] = {
    "parity": check_parity,
    "lattice_periodicity": check_lattice_periodicity,
    "characteristic_reduction": check_characteristic_reduction,
    "transformation_invariance": check_transformation_invariance,
    "fast_path_equivalence": check_fast_path,
    "null_symmetry": check_null_symmetry,
    "convergence": check_convergence,
}

STRUCTURAL_SUITES: Dict[str, Callable[[SuiteContext], SuiteResult]] = {
    "fail1_witness": check_fail1_witnesses,
    "fail2_witness": check_fail2_witnesses,
    "reduced_rank_equality": check_reduced_rank,
    "dimension_count": check_dimension_count,
}

# Rank-matrix suites assemble full K₁ matrices at random (direct path) points
MAX_RANK_SUITE_G = 3


def run_suites(ctx: SuiteContext, names: Optional[Sequence[str]] = None) -> List[SuiteResult]:
    """Run the named suites (all by default) for ctx.g, in a fixed order."""
    available = dict(THETA_SUITES)
    available.update(STRUCTURAL_SUITES)
    if names is None:
        names = list(THETA_SUITES) + ["fail1_witness", "fail2_witness"]
        if ctx.g <= MAX_RANK_SUITE_G:
            names += ["reduced_rank_equality", "dimension_count"]
    unknown = [n for n in names if n not in available]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    return [available[name](ctx) for name in names]
