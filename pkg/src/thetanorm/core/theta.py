"""
Siegel theta series, theta with characteristics and theta constants.

All series are truncated to the cube ‖t‖_∞ ≤ R of the summation lattice.
The radius comes from a Gaussian tail bound on the normalised terms
exp(πi (t+a)ᵀZ(t+a)) with the characteristic a reduced into [-1/2, 1/2)^g:

    |term| ≤ exp(-π λ_min ‖t+a‖²) ≤ exp(-π λ_min (m - 1/2)²)   for ‖t‖_∞ = m,

and the shell ‖t‖_∞ = m holds (2m+1)^g - (2m-1)^g points, so the discarded
tail is at most

    B(R) = Σ_{m > R} ((2m+1)^g - (2m-1)^g) · exp(-π λ_min (m - 1/2)²),

which decreases strictly in R. theta_null and theta_char values therefore
carry absolute error ≤ tol. The unnormalised siegel_theta(Z, Zc¹) differs
from θ[c¹;0](0,Z) by the factor exp(-πi c¹ᵀZc¹), so its error is
tol · exp(π c¹ᵀ Im(Z) c¹).

Double precision runs on numpy; passing `dps` to the budget switches the
same sums to mpmath at that many decimal digits.
"""
from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Union

import mpmath
import numpy as np
from mpmath.ctx_mp import MPContext

from thetanorm.config import settings
from thetanorm.core.period import PeriodPoint, smallest_eigenvalue
from thetanorm.core.rational import RationalVector
from thetanorm.utils.exceptions import DomainError, PreconditionError

Scalar = Union[complex, mpmath.mpc]


@dataclass(frozen=True)
class SeriesBudget:
    """Truncation plan for one period point: tolerance, cube radius, λ_min."""

    tol: float
    radius: int
    lambda_min: float
    g: int
    dps: Optional[int] = None

    def with_radius(self, radius: int) -> "SeriesBudget":
        return replace(self, radius=radius)

    @property
    def terms(self) -> int:
        """Lattice points summed by the direct path."""
        return (2 * self.radius + 1) ** self.g


def tail_bound(radius: int, g: int, lambda_min: float) -> float:
    """Upper bound B(radius) on the discarded tail (see module docstring)."""
    total = 0.0
    m = radius + 1
    while True:
        shell = (2 * m + 1) ** g - (2 * m - 1) ** g
        term = shell * math.exp(-math.pi * lambda_min * (m - 0.5) ** 2)
        total += term
        # Terms decay faster than geometrically from here on
        if term <= total * 1e-17 or term == 0.0:
            return total
        m += 1


def truncation_radius(imZ: np.ndarray, tol: float, dps: Optional[int] = None) -> SeriesBudget:
    """Least radius R ≥ 1 with tail_bound(R) ≤ tol."""
    imZ = np.asarray(imZ, dtype=float)
    if imZ.ndim != 2 or imZ.shape[0] != imZ.shape[1]:
        raise DomainError(f"Im(Z) must be square, got shape {imZ.shape}")
    if not 0 < tol < 1:
        raise DomainError(f"series tolerance must lie in (0, 1), got {tol}")
    lam = smallest_eigenvalue(imZ)
    if lam <= 0:
        raise DomainError(f"Im(Z) is not positive definite (smallest eigenvalue {lam:.3e})")
    if lam < settings.MIN_LAMBDA:
        raise DomainError(f"smallest eigenvalue of Im(Z) is {lam:.3e}, below the supported {settings.MIN_LAMBDA}")
    g = imZ.shape[0]
    radius = 1
    while tail_bound(radius, g, lam) > tol:
        radius += 1
        if radius > settings.MAX_RADIUS:
            raise DomainError(f"no radius up to {settings.MAX_RADIUS} reaches tolerance {tol}")
    logging.debug(f"Truncation radius {radius} for g={g}, lambda_min={lam:.4f}, tol={tol:.1e}")
    return SeriesBudget(tol=tol, radius=radius, lambda_min=lam, g=g, dps=dps)


def budget_for(period: PeriodPoint, tol: float, dps: Optional[int] = None) -> SeriesBudget:
    return truncation_radius(period.imag_part, tol, dps=dps)


# --- Double precision kernels ---

@functools.lru_cache(maxsize=32)
def _lattice_points(g: int, radius: int) -> np.ndarray:
    axis = np.arange(-radius, radius + 1)
    grids = np.meshgrid(*([axis] * g), indexing="ij")
    points = np.stack([grid.ravel() for grid in grids], axis=1).astype(float)
    points.setflags(write=False)
    return points


def _direct_sums(Z: np.ndarray, shifts: np.ndarray, linear: Optional[np.ndarray], radius: int) -> np.ndarray:
    """
    Σ_t exp(πi (t+a)ᵀZ(t+a) + 2πi (t+a)ᵀw) over the cube, one value per row.

    Args:
        Z: g×g complex matrix
        shifts: n×g real array of characteristics a
        linear: n×g complex array w (None for zero)
        radius: cube half-width
    """
    n, g = shifts.shape
    points = _lattice_points(g, radius)
    block = max(1, settings.DIRECT_CHUNK_TERMS // (points.shape[0] * g))
    out = np.empty(n, dtype=complex)
    for start in range(0, n, block):
        stop = min(n, start + block)
        S = points[None, :, :] + shifts[start:stop, None, :]
        exponent = 1j * np.pi * np.einsum("bmi,bmi->bm", S @ Z, S)
        if linear is not None:
            exponent += 2j * np.pi * np.einsum("bmi,bi->bm", S, linear[start:stop])
        out[start:stop] = np.exp(exponent).sum(axis=1)
    return out


def _diagonal_sums(k: complex, shifts: np.ndarray, cross: np.ndarray, phase: np.ndarray, radius: int) -> np.ndarray:
    """
    exp(πi q) · Π_a Σ_n exp(πi k (n + c_a)² + 2πi n s_a), one value per row.

    shifts holds c, cross holds s = Xc mod 1 and phase holds q = cᵀXc mod 2.
    """
    ns = np.arange(-radius, radius + 1, dtype=float)[None, :]
    out = np.exp(1j * np.pi * phase)
    for a in range(shifts.shape[1]):
        shifted = ns + shifts[:, a:a + 1]
        terms = np.exp(1j * np.pi * k * shifted ** 2 + 2j * np.pi * ns * cross[:, a:a + 1])
        out = out * terms.sum(axis=1)
    return out


# --- Extended precision kernels ---

def _mp_context(dps: int) -> MPContext:
    ctx = MPContext()
    ctx.dps = dps
    return ctx


def _mp_fraction(ctx: MPContext, x: Fraction):
    return ctx.mpf(x.numerator) / x.denominator


def _mp_direct(ctx: MPContext, Z: np.ndarray, shift: Sequence[Fraction], radius: int):
    g = len(shift)
    Zmp = [[ctx.mpc(Z[a, b].real, Z[a, b].imag) for b in range(g)] for a in range(g)]
    a_mp = [_mp_fraction(ctx, x) for x in shift]
    pi_i = ctx.mpc(0, ctx.pi)
    total = ctx.mpc(0)
    for t in itertools.product(range(-radius, radius + 1), repeat=g):
        s = [t[a] + a_mp[a] for a in range(g)]
        quad = ctx.fsum(s[a] * Zmp[a][b] * s[b] for a in range(g) for b in range(g))
        total += ctx.exp(pi_i * quad)
    return total


def _mp_diagonal(ctx: MPContext, k: complex, shift: Sequence[Fraction], cross: Sequence[Fraction],
                 phase: Fraction, radius: int):
    pi_i = ctx.mpc(0, ctx.pi)
    k_mp = ctx.mpc(k.real, k.imag)
    value = ctx.exp(pi_i * _mp_fraction(ctx, phase))
    for c, s in zip(shift, cross):
        c_mp = _mp_fraction(ctx, c)
        s_mp = _mp_fraction(ctx, s)
        value *= ctx.fsum(ctx.exp(pi_i * k_mp * (n + c_mp) ** 2 + 2 * pi_i * n * s_mp)
                          for n in range(-radius, radius + 1))
    return value


# --- Exact preprocessing for the diagonal path ---

def _check_fast_split(X: np.ndarray, k: complex) -> None:
    if np.any(np.diag(X) % 2 != 0):
        raise PreconditionError("fast path needs X with an even diagonal; use the direct lattice sum")
    if complex(k).imag <= 0:
        raise PreconditionError(f"fast path needs Im(k) > 0, got {complex(k).imag}")


def _diagonal_data(c: RationalVector, X: np.ndarray):
    """Exact (Xc mod 1, cᵀXc mod 2) for a reduced characteristic c."""
    image = c.dot_int_matrix(X)
    cross = [x - math.floor(x) for x in image]
    q = sum((a * b for a, b in zip(c, image)), Fraction(0))
    phase = q - 2 * math.floor(q / 2)
    return cross, phase


# --- Public evaluators ---

def siegel_theta(period: PeriodPoint, v: Sequence[complex], budget: SeriesBudget) -> Scalar:
    """θ(Z, v) = Σ_t exp(πi tᵀZt + 2πi tᵀv), truncated at budget.radius."""
    v = np.asarray(v, dtype=complex).reshape(1, -1)
    if v.shape[1] != period.g:
        raise DomainError(f"argument has length {v.shape[1]}, expected {period.g}")
    if not np.all(np.isfinite(v)):
        raise DomainError("argument has non-finite entries")
    if budget.dps is not None:
        ctx = _mp_context(budget.dps)
        pi_i = ctx.mpc(0, ctx.pi)
        g = period.g
        Z = period.Z
        total = ctx.mpc(0)
        for t in itertools.product(range(-budget.radius, budget.radius + 1), repeat=g):
            quad = sum(t[a] * t[b] * ctx.mpc(Z[a, b].real, Z[a, b].imag) for a in range(g) for b in range(g))
            lin = sum(t[a] * ctx.mpc(v[0, a].real, v[0, a].imag) for a in range(g))
            total += ctx.exp(pi_i * quad + 2 * pi_i * lin)
        return total
    zeros = np.zeros((1, period.g))
    return complex(_direct_sums(period.Z, zeros, v, budget.radius)[0])


def theta_char(a: RationalVector, b: RationalVector, v: Sequence[complex], period: PeriodPoint,
               budget: SeriesBudget, reduce: bool = True) -> Scalar:
    """
    θ[a;b](v,Z) = Σ_n exp(πi (n+a)ᵀZ(n+a) + 2πi (n+a)ᵀ(v+b)).

    With reduce=True the characteristic a is first written a = a' + m with
    a' in [-1/2, 1/2)^g; the substitution n → n - m leaves the series
    unchanged, so θ[a;b] = θ[a';b] and only the summation centre moves.
    With reduce=False the cube is widened by ceil(‖a‖_∞) so the same
    truncation guarantee holds around the unreduced centre.
    """
    if a.g != period.g or b.g != period.g:
        raise DomainError("characteristic dimension does not match the period matrix")
    v = np.asarray(v, dtype=complex).reshape(1, -1)
    if reduce:
        a_red = a.reduced()
        radius = budget.radius
    else:
        a_red = a
        radius = budget.radius + math.ceil(max((abs(x) for x in a), default=0))
    shifts = a_red.to_floats().reshape(1, -1)
    linear = v + b.to_floats().reshape(1, -1)
    if budget.dps is not None:
        if np.any(linear != 0):
            raise PreconditionError("extended precision theta_char supports only v + b = 0")
        return _mp_direct(_mp_context(budget.dps), period.Z, a_red.entries, radius)
    return complex(_direct_sums(period.Z, shifts, linear, radius)[0])


def theta_null(c1: RationalVector, period: PeriodPoint, budget: SeriesBudget) -> Scalar:
    """
    exp(πi c¹ᵀZc¹) θ(Z, Zc¹), evaluated at the representative of c¹ in [-1/2, 1/2)^g.

    The composite equals θ[c¹;0](0,Z) = Σ_t exp(πi (t+c¹)ᵀZ(t+c¹)), which is
    the form summed here; it is even in c¹ and invariant under c¹ → c¹ + ℤ^g.
    """
    if c1.g != period.g:
        raise DomainError(f"characteristic has length {c1.g}, expected {period.g}")
    reduced = c1.reduced()
    if budget.dps is not None:
        return _mp_direct(_mp_context(budget.dps), period.Z, reduced.entries, budget.radius)
    return complex(_direct_sums(period.Z, reduced.to_floats().reshape(1, -1), None, budget.radius)[0])


def theta_null_fast(c1: RationalVector, X: np.ndarray, k: complex, budget: SeriesBudget) -> Scalar:
    """
    exp(πi c¹ᵀZc¹) θ(k·Id, Zc¹) for Z = X + k·Id, as a product of g one-dimensional series.

    Valid because tᵀXt is even for integer t when X is integer symmetric with
    even diagonal, so θ(X + k·Id, v) = θ(k·Id, v) term by term.
    """
    X = np.asarray(X, dtype=np.int64)
    _check_fast_split(X, k)
    reduced = c1.reduced()
    cross, phase = _diagonal_data(reduced, X)
    if budget.dps is not None:
        return _mp_diagonal(_mp_context(budget.dps), complex(k), reduced.entries, cross, phase, budget.radius)
    value = _diagonal_sums(
        complex(k),
        reduced.to_floats().reshape(1, -1),
        np.array([[float(x) for x in cross]]),
        np.array([float(phase)]),
        budget.radius,
    )
    return complex(value[0])


def theta_null_many(c1s: Sequence[RationalVector], period: PeriodPoint, budget: SeriesBudget,
                    fast: Optional[bool] = None) -> Union[np.ndarray, List]:
    """
    theta_null for many characteristics at once.

    Uses the diagonal fast path when the period carries a split with even
    diagonal (or when fast=True); returns a complex numpy array in double
    precision and a list of mpmath values in extended precision.
    """
    if fast is None:
        fast = period.has_fast_path
    if fast and not period.has_fast_path:
        raise PreconditionError("fast path requested for a period point without an even-diagonal split")
    reduced = [c.reduced() for c in c1s]
    if any(c.g != period.g for c in reduced):
        raise DomainError("characteristic dimension does not match the period matrix")
    if not reduced:
        return [] if budget.dps is not None else np.empty(0, dtype=complex)

    if fast:
        X, k = period.X, period.k
        data = [_diagonal_data(c, X) for c in reduced]
        if budget.dps is not None:
            ctx = _mp_context(budget.dps)
            return [_mp_diagonal(ctx, k, c.entries, cross, phase, budget.radius)
                    for c, (cross, phase) in zip(reduced, data)]
        shifts = np.array([c.to_floats() for c in reduced])
        cross = np.array([[float(x) for x in d[0]] for d in data])
        phase = np.array([float(d[1]) for d in data])
        return _diagonal_sums(k, shifts, cross, phase, budget.radius)

    if budget.dps is not None:
        ctx = _mp_context(budget.dps)
        return [_mp_direct(ctx, period.Z, c.entries, budget.radius) for c in reduced]
    shifts = np.array([c.to_floats() for c in reduced])
    return _direct_sums(period.Z, shifts, None, budget.radius)
