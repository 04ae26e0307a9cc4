"""
Numeric rank certificates from singular value gaps.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from mpmath.ctx_mp import MPContext
from scipy import linalg

from thetanorm.config import settings
from thetanorm.core.rational import RationalVector
from thetanorm.core.tolerances import Tolerances


class RankStatus(str, enum.Enum):
    FULL = "full"
    DEFICIENT = "deficient"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class RankReport:
    """Singular value spectrum and rank decision for one assembled matrix."""

    sigma: List[float]
    rank: int
    gap: float
    status: RankStatus
    w: Optional[RationalVector] = None
    shape: tuple = field(default=(0, 0))
    # Spectral norm bound on the evaluation error; set on certified passes
    error_bound: Optional[float] = None

    @property
    def expected(self) -> int:
        return len(self.sigma)

    def as_dict(self) -> dict:
        out = {
            "w": self.w.as_strings() if self.w is not None else None,
            "shape": list(self.shape),
            "sigma": list(self.sigma),
            "rank": self.rank,
            "gap": self.gap,
            "status": self.status.value,
        }
        if self.error_bound is not None:
            out["error_bound"] = self.error_bound
        return out


def singular_values(M: np.ndarray, dps: Optional[int] = None) -> List[float]:
    """
    All min(rows, cols) singular values, descending.

    Object arrays (entries from the extended precision evaluator) go through
    mpmath: the eigenvalues of the smaller Gram matrix, formed at twice `dps`
    digits so that σ² keeps the resolution σ needs.
    """
    M = np.asarray(M)
    if M.dtype == object:
        if M.size == 0:
            return []
        ctx = MPContext()
        ctx.dps = 2 * (dps or settings.ESCALATION_DPS)
        A = ctx.matrix(M.tolist())
        gram = A.H * A if A.rows >= A.cols else A * A.H
        values = ctx.eigh(gram, eigvals_only=True)
        return sorted((float(ctx.sqrt(max(ctx.re(values[i]), 0))) for i in range(values.rows)), reverse=True)
    M = M.astype(complex)
    if M.size == 0:
        return []
    return sorted((float(s) for s in linalg.svd(M, compute_uv=False)), reverse=True)


def numeric_rank(M: np.ndarray, tolerances: Tolerances = Tolerances(), w: Optional[RationalVector] = None,
                 noise_floor: float = 0.0) -> RankReport:
    """
    Certify the rank of M against its column count n.

    The top n singular values are kept (zero-padded when M has fewer rows);
    singular values at or below `noise_floor` count as exact zeros. The gap
    σ_n/σ_1 decides: full above tolerances.accept, deficient below
    tolerances.reject, ambiguous in between. rank counts σ_i > rank_tol·σ_1.

    With tolerances.certify the entry error bound is also used: a σ_n above
    identity_floor cannot come from a rank deficient matrix (Weyl), so the
    report is full even when the gap is small; an ambiguous gap with σ_n
    inside the floor stays ambiguous.
    """
    shape = tuple(np.shape(M))
    n = shape[1]
    sigma = singular_values(M, tolerances.dps)[:n]
    sigma += [0.0] * (n - len(sigma))
    sigma = [0.0 if s <= noise_floor else s for s in sigma]
    error_bound = identity_floor(tolerances, *shape) if tolerances.certify else None

    top = sigma[0] if sigma else 0.0
    if top == 0.0:
        logging.debug(f"Zero matrix of shape {shape}")
        return RankReport(sigma=sigma, rank=0, gap=0.0, status=RankStatus.DEFICIENT, w=w, shape=shape,
                          error_bound=error_bound)

    rank = sum(1 for s in sigma if s > tolerances.rank_tol * top)
    gap = sigma[-1] / top
    if gap > tolerances.accept:
        status = RankStatus.FULL
    elif error_bound is not None and sigma[-1] > error_bound:
        status = RankStatus.FULL
        rank = n
    elif gap < tolerances.reject:
        status = RankStatus.DEFICIENT
    else:
        status = RankStatus.AMBIGUOUS
    bound_text = f", error bound {error_bound:.3e}" if error_bound is not None else ""
    logging.debug(f"Rank {rank}/{n}, gap {gap:.3e}{bound_text}, status {status.value} for shape {shape}")
    return RankReport(sigma=sigma, rank=rank, gap=gap, status=status, w=w, shape=shape, error_bound=error_bound)


def identity_floor(tolerances: Tolerances, rows: int, cols: int) -> float:
    """Spectral norm bound of a matrix whose entries are each within the slack budget of zero."""
    return tolerances.zero_slack * tolerances.entry_budget() * float(np.sqrt(rows * cols))


def needs_confirmation(report: RankReport, tolerances: Tolerances = Tolerances()) -> bool:
    """A deficient report whose gap sits above rounding level, before any certified pass."""
    return (not tolerances.certify and report.status is RankStatus.DEFICIENT
            and report.gap >= settings.ROUNDING_GAP)
