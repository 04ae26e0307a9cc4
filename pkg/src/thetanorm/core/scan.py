"""
Commands behind the CLI: single-type check, table scan, invariant suites,
conjecture evidence and raw theta evaluation.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

from thetanorm import __version__
from thetanorm.config import settings
from thetanorm.config.run_config import RunConfig
from thetanorm.core import report
from thetanorm.core.invariants import SuiteContext, SuiteResult, run_suites
from thetanorm.core.normality import Conclusion, Verdict, run_numerics, verdict
from thetanorm.core.period import PeriodPoint
from thetanorm.core.polarization import (
    PolarizationType, enumerate_types, index_sets, predicate_flags,
)
from thetanorm.core.rank import RankReport
from thetanorm.core.rational import RationalVector
from thetanorm.core.theta import budget_for, theta_null, theta_null_fast
from thetanorm.utils.exceptions import UsageError, UserAbortError
from thetanorm.utils.helpers import format_types, human_duration
from thetanorm.utils.parallel import parallel_map


@dataclass
class ScanRow:
    """One line of a result table: a type, its predicates, numerics and verdict."""

    type: PolarizationType
    predicates: Dict[str, bool]
    verdict: Optional[Verdict] = None
    error: Optional[str] = None
    wall_time: float = 0.0

    @property
    def h0(self) -> int:
        return self.type.h0

    @property
    def numeric(self) -> List[RankReport]:
        return self.verdict.reports if self.verdict is not None else []

    @property
    def conclusion(self) -> Optional[Conclusion]:
        return self.verdict.conclusion if self.verdict is not None else None

    @property
    def is_exceptional(self) -> bool:
        return self.verdict is not None and self.verdict.is_exceptional

    @property
    def is_ambiguous(self) -> bool:
        return self.verdict is not None and self.verdict.is_ambiguous

    def as_dict(self, timings: bool = False) -> dict:
        out = {
            "type": str(self.type),
            "h0": self.h0,
            "predicates": dict(self.predicates),
            "numeric": [r.as_dict() for r in self.numeric],
            "verdict": self.conclusion.value if self.conclusion else None,
            "reasons": [r.as_dict() for r in self.verdict.reasons] if self.verdict else [],
            "notes": list(self.verdict.notes) if self.verdict else [],
            "error": self.error,
        }
        if timings:
            out["wall_time"] = self.wall_time
        return out


def check_type(D: PolarizationType, period: Optional[PeriodPoint], config: RunConfig, jobs: int = 1,
               capture_errors: bool = True) -> ScanRow:
    """Run the verdict pipeline for one type; errors land in the row when capture_errors is set."""
    start = time.perf_counter()
    row = ScanRow(type=D, predicates=predicate_flags(D))
    try:
        row.verdict = verdict(D, period, config.tolerances(), force_numeric=config.force_numeric,
                              confirm_iyer=config.confirm_iyer, jobs=jobs, escalate=config.escalate)
    except Exception as e:
        if not capture_errors:
            raise
        logging.error(f"{D}: {type(e).__name__}: {e}")
        row.error = f"{type(e).__name__}: {e}"
    row.wall_time = time.perf_counter() - start
    return row


def _header(command: str, config: RunConfig, period: Optional[PeriodPoint]) -> dict:
    return {
        "command": command,
        "version": __version__,
        "config": config.as_dict(),
        "period": period.describe() if period is not None else None,
    }


# --- check ---

def cmd_check(config: RunConfig) -> ScanRow:
    if config.type is None:
        raise UsageError("check needs --type")
    period = config.period_point()
    row = check_type(config.type, period, config, jobs=config.jobs, capture_errors=False)
    if config.format == "csv":
        text = report.rows_to_csv([row.as_dict(config.timings)], config.timings)
    else:
        doc = _header("check", config, period)
        doc["row"] = row.as_dict(config.timings)
        text = report.canonical_dumps(doc)
    report.write_output(text, config.out)
    return row


# --- scan ---

@dataclass
class ScanResult:
    rows: List[ScanRow]
    g: int
    min_h0: int
    max_h0: int

    @property
    def exceptional(self) -> List[PolarizationType]:
        return [row.type for row in self.rows if row.is_exceptional]

    @property
    def ambiguous(self) -> List[PolarizationType]:
        return [row.type for row in self.rows if row.is_ambiguous]

    @property
    def errors(self) -> List[PolarizationType]:
        return [row.type for row in self.rows if row.error]

    def summary(self) -> dict:
        return {
            "g": self.g,
            "min_h0": self.min_h0,
            "max_h0": self.max_h0,
            "types": len(self.rows),
            "exceptional": [str(D) for D in self.exceptional],
            "ambiguous": [str(D) for D in self.ambiguous],
            "errors": [str(D) for D in self.errors],
        }


def estimate_entries(types: Sequence[PolarizationType], config: RunConfig) -> int:
    """Theta values a scan will evaluate, before de-duplication."""
    total = 0
    for D in types:
        flags = predicate_flags(D)
        decided = not flags["necessary"] or flags["fail1"] or flags["fail2"] or flags["iyer"]
        if decided and not config.force_numeric:
            continue
        total += len(index_sets(D).Iprime) * D.h0 * 2 ** D.g
    return total


def cmd_scan(config: RunConfig, confirm: Optional[Callable[[str], bool]] = None) -> ScanResult:
    """
    Verdicts for every type in the configured h0 range, in (h0, type) order.
    An explicit config.type narrows the scan to that one type.

    confirm is asked before workloads above settings.CONFIRM_ENTRY_THRESHOLD.
    """
    g = config.dimension()
    period = config.period_point()
    if period is None:
        raise UsageError("scan needs a period point (--preset, --X-file/--k, a Z in --config, or --seed)")
    if config.type is not None:
        types = [config.type]
        low = high = config.type.h0
    else:
        low, high = config.bounds()
        types = enumerate_types(g, low, high)
    logging.info(f"Scanning {len(types)} type(s) of dimension {g} with {low} <= h0 <= {high} at {period.label}")

    entries = estimate_entries(types, config)
    if confirm is not None and entries > settings.CONFIRM_ENTRY_THRESHOLD:
        if not confirm(f"About {entries:,} theta values to evaluate. Proceed?"):
            raise UserAbortError("Scan cancelled at confirmation.")

    start = time.perf_counter()
    rows = parallel_map(lambda D: check_type(D, period, config), types,
                        max_workers=config.jobs, desc="Scanning types")
    result = ScanResult(rows=rows, g=g, min_h0=low, max_h0=high)
    logging.info(f"Scan finished in {human_duration(time.perf_counter() - start)}")
    logging.info(f"Exceptional set: {format_types(result.exceptional)}")
    if result.ambiguous:
        logging.warning(f"Ambiguous: {format_types(result.ambiguous)}")
    if result.errors:
        logging.error(f"Rows with errors: {format_types(result.errors)}")

    if config.format == "csv":
        text = report.rows_to_csv([row.as_dict(config.timings) for row in rows], config.timings)
    else:
        doc = _header("scan", config, period)
        doc["summary"] = result.summary()
        doc["rows"] = [row.as_dict(config.timings) for row in rows]
        text = report.canonical_dumps(doc)
    report.write_output(text, config.out)
    return result


# --- verify-invariants ---

def cmd_verify_invariants(config: RunConfig, g_values: Sequence[int], samples: int = settings.INVARIANT_SAMPLES,
                          structural_samples: int = settings.STRUCTURAL_SAMPLES,
                          suites: Optional[Sequence[str]] = None,
                          corrupt_index_order: bool = False) -> List[SuiteResult]:
    # --seed seeds the random samples here; other sources add a fixed structural point
    period = config.period_point() if config.has_period and config.seed is None else None
    seed = config.seed if config.seed is not None else settings.DEFAULT_SEED
    tolerances = config.tolerances()
    results = []
    for g in g_values:
        ctx = SuiteContext(g=g, seed=seed, samples=samples, structural_samples=structural_samples,
                           tolerances=tolerances, period=period, corrupt_index_order=corrupt_index_order)
        try:
            results += run_suites(ctx, suites)
        except KeyError as e:
            raise UsageError(str(e.args[0])) from e

    passed = all(r.passed for r in results)
    doc = {
        "command": "verify-invariants",
        "version": __version__,
        "seed": seed,
        "period": period.describe() if period is not None else None,
        "tolerances": tolerances.as_dict(),
        "corrupt_index_order": corrupt_index_order,
        "passed": passed,
        "suites": [r.as_dict() for r in results],
    }
    report.write_output(report.canonical_dumps(doc), config.out)
    failed = [f"{r.name} (g={r.g})" for r in results if not r.passed]
    if failed:
        logging.error(f"Invariant failures: {', '.join(failed)}")
    else:
        logging.info(f"All {len(results)} suite(s) passed")
    return results


# --- conjecture ---

def conjecture_types(which: int, g: int, d_cap: Optional[int] = None) -> List[PolarizationType]:
    """(1,3,…,3,6) for which=1; (1,…,1,d) with 2^(g+1)−1 ≤ d ≤ d_cap for which=2."""
    if which == 1:
        if g < 2:
            raise UsageError("conjecture 1 needs g >= 2")
        return [PolarizationType((1,) + (3,) * (g - 2) + (6,))]
    if which == 2:
        low = 2 ** (g + 1) - 1
        high = d_cap if d_cap is not None else low + settings.CONJECTURE_D_SPAN - 1
        if high < low:
            raise UsageError(f"d cap {high} is below 2^(g+1)-1 = {low}")
        return [PolarizationType((1,) * (g - 1) + (d,)) for d in range(low, high + 1)]
    raise UsageError(f"unknown conjecture {which}; expected 1 or 2")


def evidence_point(config: RunConfig, g: int) -> PeriodPoint:
    """
    A seeded random point when --seed is given; otherwise the configured point
    when its dimension matches, the preset for g, or the default seed.
    """
    if config.seed is not None:
        return PeriodPoint.random(g, config.seed)
    if config.has_period:
        period = config.period_point()
        if period.g == g:
            return period
    preset = f"paper-g{g}"
    if preset in settings.PRESETS:
        return PeriodPoint.from_preset(preset)
    return PeriodPoint.random(g, settings.DEFAULT_SEED)


def cmd_conjecture_evidence(config: RunConfig, which: int, g_values: Sequence[int],
                            d_cap: Optional[int] = None) -> dict:
    tolerances = config.tolerances()
    entries = []
    for g in g_values:
        if g > settings.CONJECTURE_MAX_G:
            raise UsageError(f"g={g} exceeds the supported maximum {settings.CONJECTURE_MAX_G} for evidence runs")
        period = evidence_point(config, g)
        for D in conjecture_types(which, g, d_cap):
            logging.info(f"Conjecture {which}: {D} at {period.label}")
            outcome, reasons = run_numerics(D, period, tolerances, config.jobs, config.escalate)
            entries.append({
                "g": g,
                "type": str(D),
                "period": period.describe(),
                "status": {True: "two_normal_at_point", False: "not_two_normal_at_point",
                           None: "indeterminate"}[outcome],
                "runs": [r.as_dict() for r in reasons],
            })
    doc = {
        "command": "conjecture",
        "version": __version__,
        "conjecture": which,
        "label": "numerical evidence at sampled period points; not a proof",
        "tolerances": tolerances.as_dict(),
        "entries": entries,
    }
    report.write_output(report.canonical_dumps(doc), config.out)
    return doc


# --- theta ---

def cmd_theta(config: RunConfig, c1: RationalVector, fast: Optional[bool] = None) -> dict:
    """θ[c¹;0](0,Z) at the configured point, with the radius used."""
    period = config.period_point()
    if period is None:
        raise UsageError("theta needs a period point")
    tolerances = config.tolerances()
    budget = budget_for(period, tolerances.series_tol, tolerances.dps)
    use_fast = period.has_fast_path if fast is None else fast
    if use_fast:
        if not period.has_fast_path:
            raise UsageError("--fast needs a split period point with an even diagonal")
        value = theta_null_fast(c1, period.X, period.k, budget)
    else:
        value = theta_null(c1, period, budget)
    value = complex(value)
    doc = {
        "command": "theta",
        "version": __version__,
        "period": period.describe(),
        "c1": c1.as_strings(),
        "path": "diagonal" if use_fast else "direct",
        "radius": budget.radius,
        "series_tol": budget.tol,
        "value": {"re": value.real, "im": value.imag},
    }
    report.write_output(report.canonical_dumps(doc), config.out)
    return doc
