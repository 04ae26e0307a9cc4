"""
Period points in the Siegel upper half-space.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from thetanorm.config import settings
from thetanorm.utils.exceptions import ConfigError, DomainError


def smallest_eigenvalue(imZ: np.ndarray) -> float:
    """λ_min of a real symmetric matrix."""
    return float(linalg.eigvalsh(np.asarray(imZ, dtype=float))[0])


@dataclass(frozen=True, eq=False)
class PeriodPoint:
    """
    A symmetric complex g×g matrix Z with positive definite imaginary part.

    When built from a split (X, k) the point is Z = X + k·Id with X an
    integer symmetric matrix; the split enables the diagonal fast path.
    `label` records where the point came from (preset name, seed, file).
    """

    Z: np.ndarray
    X: Optional[np.ndarray] = None
    k: Optional[complex] = None
    label: str = "matrix"
    seed: Optional[int] = None

    def __post_init__(self):
        Z = np.array(self.Z, dtype=complex)
        if Z.ndim != 2 or Z.shape[0] != Z.shape[1] or Z.shape[0] < 1:
            raise DomainError(f"period matrix must be square, got shape {Z.shape}")
        if not np.all(np.isfinite(Z)):
            raise DomainError("period matrix has non-finite entries")
        if np.max(np.abs(Z - Z.T)) != 0:
            raise DomainError("period matrix is not symmetric")
        lam = smallest_eigenvalue(Z.imag)
        if lam <= 0:
            raise DomainError(f"Im(Z) is not positive definite (smallest eigenvalue {lam:.3e})")
        Z.setflags(write=False)
        object.__setattr__(self, "Z", Z)
        if (self.X is None) != (self.k is None):
            raise DomainError("split form needs both X and k")
        if self.X is not None:
            X = np.array(self.X, dtype=np.int64)
            X.setflags(write=False)
            object.__setattr__(self, "X", X)
            object.__setattr__(self, "k", complex(self.k))

    # --- Constructors ---

    @classmethod
    def from_split(cls, X: Sequence[Sequence[int]], k: complex, label: str = "split") -> "PeriodPoint":
        X_arr = np.asarray(X)
        if X_arr.ndim != 2 or X_arr.shape[0] != X_arr.shape[1]:
            raise DomainError(f"X must be square, got shape {X_arr.shape}")
        if not np.all(np.equal(np.mod(X_arr, 1), 0)):
            raise DomainError("X must have integer entries")
        X_int = X_arr.astype(np.int64)
        if not np.array_equal(X_int, X_int.T):
            raise DomainError("X must be symmetric")
        k = complex(k)
        if k.imag <= 0:
            raise DomainError(f"Im(k) must be positive, got {k.imag}")
        g = X_int.shape[0]
        Z = X_int.astype(complex) + k * np.eye(g)
        return cls(Z=Z, X=X_int, k=k, label=label)

    @classmethod
    def from_preset(cls, name: str) -> "PeriodPoint":
        name = settings.PRESET_ALIASES.get(name, name)
        try:
            preset = settings.PRESETS[name]
        except KeyError:
            raise ConfigError(f"preset: unknown preset '{name}' (known: {', '.join(sorted(settings.PRESETS))})")
        return cls.from_split(preset["X"], preset["k"], label=f"preset:{name}")

    @classmethod
    def random(cls, g: int, seed: int) -> "PeriodPoint":
        """Z = S + i(AᵀA + Id) with S symmetric and A entries uniform in [-1, 1]."""
        if g < 1:
            raise DomainError(f"g must be positive, got {g}")
        rng = np.random.default_rng(seed)
        S = rng.uniform(-1.0, 1.0, size=(g, g))
        S = np.triu(S) + np.triu(S, 1).T
        A = rng.uniform(-1.0, 1.0, size=(g, g))
        Y = A.T @ A + np.eye(g)
        Y = np.triu(Y) + np.triu(Y, 1).T
        logging.debug(f"Random period point g={g} seed={seed}")
        return cls(Z=S + 1j * Y, label=f"random-seed:{seed}", seed=seed)

    # --- Properties ---

    @property
    def g(self) -> int:
        return self.Z.shape[0]

    @property
    def imag_part(self) -> np.ndarray:
        return self.Z.imag

    @property
    def lambda_min(self) -> float:
        return smallest_eigenvalue(self.Z.imag)

    @property
    def split(self) -> Optional[Tuple[np.ndarray, complex]]:
        if self.X is None:
            return None
        return self.X, self.k

    @property
    def has_fast_path(self) -> bool:
        """Split present and X has an even diagonal."""
        return self.X is not None and bool(np.all(np.diag(self.X) % 2 == 0))

    def shifted(self, X_shift: np.ndarray) -> "PeriodPoint":
        """Z + X_shift for an integer symmetric matrix (no split kept)."""
        return PeriodPoint(Z=self.Z + np.asarray(X_shift, dtype=complex), label=f"{self.label}+X")

    def describe(self) -> dict:
        out = {"label": self.label}
        if self.X is not None:
            out["X"] = self.X.tolist()
            out["k"] = {"re": self.k.real, "im": self.k.imag}
        else:
            out["Z"] = [[{"re": z.real, "im": z.imag} for z in row] for row in self.Z.tolist()]
        if self.seed is not None:
            out["seed"] = self.seed
        return out
