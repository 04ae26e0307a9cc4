"""
Exact rational vectors for coset representatives and theta characteristics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

Rational = Union[int, Fraction]

_HALF = Fraction(1, 2)


def _reduce_centered(x: Fraction) -> Tuple[Fraction, int]:
    """Returns (r, m) with x = r + m, m integer and r in [-1/2, 1/2)."""
    m = math.floor(x + _HALF)
    return x - m, m


@dataclass(frozen=True, order=True, init=False)
class RationalVector:
    """A g-vector of exact rationals; equality and hashing are exact."""

    entries: Tuple[Fraction, ...]

    def __init__(self, entries: Iterable[Union[Rational, str]]):
        object.__setattr__(self, "entries", tuple(Fraction(e) for e in entries))

    # --- Constructors ---

    @classmethod
    def zeros(cls, g: int) -> "RationalVector":
        return cls([0] * g)

    @classmethod
    def unit(cls, g: int, position: int, scale: Rational = 1) -> "RationalVector":
        """The vector scale * e_position (0-based position)."""
        return cls(Fraction(scale) if a == position else 0 for a in range(g))

    @classmethod
    def from_numerators(cls, numerators: Sequence[int], denominators: Sequence[int]) -> "RationalVector":
        return cls(Fraction(n, d) for n, d in zip(numerators, denominators))

    @classmethod
    def parse(cls, text: str) -> "RationalVector":
        """Parses '1/2,0,-1/3' (parentheses and spaces allowed)."""
        cleaned = text.strip().strip("()[]")
        if not cleaned:
            raise ValueError("empty rational vector")
        return cls(Fraction(part.strip()) for part in cleaned.split(","))

    # --- Arithmetic ---

    @property
    def g(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index: int) -> Fraction:
        return self.entries[index]

    def _check(self, other: "RationalVector") -> None:
        if other.g != self.g:
            raise ValueError(f"dimension mismatch: {self.g} vs {other.g}")

    def __add__(self, other: "RationalVector") -> "RationalVector":
        self._check(other)
        return RationalVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "RationalVector") -> "RationalVector":
        self._check(other)
        return RationalVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "RationalVector":
        return RationalVector(-a for a in self.entries)

    def scale(self, factor: Rational) -> "RationalVector":
        f = Fraction(factor)
        return RationalVector(f * a for a in self.entries)

    def dot_int_matrix(self, matrix: np.ndarray) -> "RationalVector":
        """Exact product M @ self for an integer matrix M."""
        rows = np.asarray(matrix, dtype=np.int64)
        return RationalVector(
            sum((int(rows[a, b]) * self.entries[b] for b in range(self.g)), Fraction(0))
            for a in range(rows.shape[0])
        )

    def quadratic_int(self, matrix: np.ndarray) -> Fraction:
        """Exact selfᵀ M self for an integer matrix M."""
        image = self.dot_int_matrix(matrix)
        return sum((a * b for a, b in zip(self.entries, image.entries)), Fraction(0))

    # --- Lattice reduction ---

    def reduced(self) -> "RationalVector":
        """Representative modulo ℤ^g with every coordinate in [-1/2, 1/2)."""
        return self.reduced_with_shift()[0]

    def reduced_with_shift(self) -> Tuple["RationalVector", Tuple[int, ...]]:
        """Returns (r, m) with self = r + m, m ∈ ℤ^g and r in [-1/2, 1/2)^g."""
        parts = [_reduce_centered(a) for a in self.entries]
        return RationalVector(p[0] for p in parts), tuple(int(p[1]) for p in parts)

    def reduced_unit(self) -> "RationalVector":
        """Representative modulo ℤ^g with every coordinate in [0, 1)."""
        return RationalVector(a - math.floor(a) for a in self.entries)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.entries)

    def congruent(self, other: "RationalVector") -> bool:
        """Equality modulo the integer lattice."""
        return (self - other).is_integral()

    # --- Conversion ---

    def to_floats(self) -> np.ndarray:
        return np.array([float(a) for a in self.entries], dtype=float)

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.entries) + ")"

    def as_strings(self) -> list:
        return [str(a) for a in self.entries]
