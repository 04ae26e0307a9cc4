"""
Polarization types, their finite coset models and the closed-form criteria.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from thetanorm.core.rational import RationalVector
from thetanorm.utils.exceptions import DomainError


@dataclass(frozen=True, order=True)
class PolarizationType:
    """A type (d₁,…,d_g) with d₁ | d₂ | … | d_g."""

    d: Tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.d)
        if not d:
            raise DomainError("a type needs at least one entry")
        if any(x < 1 for x in d):
            raise DomainError(f"type entries must be positive: {d}")
        for a, b in zip(d, d[1:]):
            if b % a != 0:
                raise DomainError(f"type {d} breaks the divisibility chain at {a} ∤ {b}")
        object.__setattr__(self, "d", d)

    @classmethod
    def parse(cls, text: str) -> "PolarizationType":
        """Accepts '1,2,8', '(1,2,8)' or '1 2 8'."""
        cleaned = text.strip().strip("()[]").replace(",", " ")
        try:
            return cls(tuple(int(part) for part in cleaned.split()))
        except ValueError as e:
            if isinstance(e, DomainError):
                raise
            raise DomainError(f"cannot parse type '{text}'") from e

    @property
    def g(self) -> int:
        return len(self.d)

    @functools.cached_property
    def h0(self) -> int:
        return math.prod(self.d)

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return self.h0, self.d

    def first_two(self) -> Optional[int]:
        """0-based position of the first d_i equal to 2, or None."""
        for position, value in enumerate(self.d):
            if value == 2:
                return position
        return None

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.d) + ")"


@dataclass(frozen=True)
class IndexSets:
    """Row set I ≅ K₁, representatives I′ of K₁/2K₁ and column set J ≅ Z₂."""

    I: List[RationalVector]
    Iprime: List[RationalVector]
    J: List[RationalVector]


def coset_grid(denominators: Sequence[int], counts: Sequence[int]) -> List[RationalVector]:
    """(n₁/q₁,…,n_g/q_g) for 0 ≤ n_i < counts_i, lexicographic in (n₁,…,n_g)."""
    return [
        RationalVector.from_numerators(ns, denominators)
        for ns in itertools.product(*(range(c) for c in counts))
    ]


def index_sets(D: PolarizationType) -> IndexSets:
    I = coset_grid(D.d, D.d)
    Iprime = coset_grid(D.d, [math.gcd(x, 2) for x in D.d])
    J = coset_grid([2] * D.g, [2] * D.g)
    return IndexSets(I=I, Iprime=Iprime, J=J)


def in_K1(D: PolarizationType, w: RationalVector) -> bool:
    """Whether w lies in (1/d₁)ℤ × … × (1/d_g)ℤ."""
    return w.g == D.g and all((x * d).denominator == 1 for x, d in zip(w, D.d))


def row_orbit_bound(D: PolarizationType, w: RationalVector) -> int:
    """
    Number of distinct rows the matrix for w can have.

    Rows i and w − i coincide because theta constants are even and
    ℤ^g-periodic, so the rank is at most the number of orbits of
    i ↦ w − i on K₁: (h0 + #{i : 2i = w}) / 2.
    """
    fixed = 0
    for i in coset_grid(D.d, D.d):
        if (i.scale(2) - w).is_integral():
            fixed += 1
    return (D.h0 + fixed) // 2


# --- Closed-form criteria ---

def fail1_predicate(D: PolarizationType) -> bool:
    """Some d_i = 2 and every d_j ≤ 4."""
    return 2 in D.d and max(D.d) <= 4


def fail2_predicate(D: PolarizationType) -> bool:
    """Some d_i = 2 and h0 = 2^(g+1)."""
    return 2 in D.d and D.h0 == 2 ** (D.g + 1)


def necessary_condition(D: PolarizationType) -> bool:
    """h0 ≥ 2^(g+1) − 1; false means the multiplication map cannot be onto by dimension count."""
    return D.h0 >= 2 ** (D.g + 1) - 1


def iyer_bound(D: PolarizationType) -> bool:
    """h0 > 2^g · g!: normally generated whenever the abelian variety is simple."""
    return D.h0 > 2 ** D.g * math.factorial(D.g)


def predicate_flags(D: PolarizationType) -> dict:
    return {
        "necessary": necessary_condition(D),
        "fail1": fail1_predicate(D),
        "fail2": fail2_predicate(D),
        "iyer": iyer_bound(D),
    }


# --- Enumeration ---

def _chains(g: int, start: int, max_product: int) -> Iterator[Tuple[int, ...]]:
    if g == 0:
        yield ()
        return
    value = start
    while value ** g <= max_product:
        for rest in _chains(g - 1, value, max_product // value):
            yield (value,) + rest
        value += start


def enumerate_types(g: int, min_h0: int, max_h0: int) -> List[PolarizationType]:
    """All types of dimension g with min_h0 ≤ h0 ≤ max_h0, sorted by (h0, type)."""
    if g < 1:
        raise DomainError(f"g must be positive, got {g}")
    if not 1 <= min_h0 <= max_h0:
        raise DomainError(f"invalid h0 bounds ({min_h0}, {max_h0}); need 1 ≤ min ≤ max")
    found = {
        chain for chain in _chains(g, 1, max_h0)
        if min_h0 <= math.prod(chain) <= max_h0
    }
    return sorted((PolarizationType(chain) for chain in found), key=lambda D: D.sort_key)
