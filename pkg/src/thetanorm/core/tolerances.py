"""
Tolerance bundle threaded through evaluation, rank certification and checks.
"""
from dataclasses import dataclass, replace
from typing import Optional

from thetanorm.config import settings
from thetanorm.utils.exceptions import DomainError


@dataclass(frozen=True)
class Tolerances:
    series_tol: float = settings.DEFAULT_SERIES_TOL
    rank_tol: float = settings.DEFAULT_RANK_TOL
    accept: float = settings.DEFAULT_ACCEPT_GAP
    reject: float = settings.DEFAULT_REJECT_GAP
    zero_slack: float = settings.DEFAULT_ZERO_SLACK
    # None: double precision; otherwise decimal digits for the mpmath backend
    dps: Optional[int] = None
    # Decide against the entry error bound as well as the gap (escalated passes)
    certify: bool = False

    def __post_init__(self):
        if not 0 < self.series_tol < 1:
            raise DomainError(f"series_tol must lie in (0, 1), got {self.series_tol}")
        if not 0 < self.reject < self.accept < 1:
            raise DomainError(
                f"rank thresholds must satisfy 0 < reject < accept < 1, got reject={self.reject}, accept={self.accept}")
        if not 0 < self.rank_tol < 1:
            raise DomainError(f"rank_tol must lie in (0, 1), got {self.rank_tol}")
        if self.zero_slack <= 0:
            raise DomainError(f"zero_slack must be positive, got {self.zero_slack}")
        if self.dps is not None and self.dps < 16:
            raise DomainError(f"dps must be at least 16, got {self.dps}")

    def escalated(self) -> "Tolerances":
        """Tighter series tolerance evaluated in extended precision, with certified rank decisions."""
        return replace(
            self,
            certify=True,
            series_tol=self.series_tol * settings.ESCALATION_TOL_FACTOR,
            dps=max(self.dps or 0, settings.ESCALATION_DPS),
        )

    def entry_budget(self) -> float:
        """Allowed discrepancy between two theta values that are equal in exact arithmetic."""
        return 2.0 * self.series_tol

    def as_dict(self) -> dict:
        return {
            "series_tol": self.series_tol,
            "rank_tol": self.rank_tol,
            "accept": self.accept,
            "reject": self.reject,
            "zero_slack": self.zero_slack,
            "dps": self.dps,
            "certify": self.certify,
        }
