"""Closed-form transfer matrix and factorization for a single mode.

For n = 1 the generator is three scalars (a, b, c),

    R = [[a, c], [c, b]],    theta = sqrt(c^2 - a b),

and the transfer matrix has the explicit form

    T = [[cosh(theta) + c sinhc(theta),  -a sinhc(theta)],
         [ b sinhc(theta),               cosh(theta) - c sinhc(theta)]]

with sinhc(z) = sinh(z)/z continued to sinhc(0) = 1.  Only even functions
of theta appear, so the square-root branch does not matter.  This module
is both a user-facing fast path and an independent oracle for the general
matrix pipeline.

Sign conventions match the library-wide factored form
exp(-x W x~ / 2) exp(x Y d~) exp(d Z d~ / 2): for a single mode

    W = -a sinhc(theta) / T22,  Z = b sinhc(theta) / T22,  Y = -log(T22),

and the prefactor is T22^(-1/2) = exp(Y/2) with the principal scalar log.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .core import Factorization

__all__ = [
    "ZeroT22",
    "Coefficients1D",
    "sinhc",
    "transfer_1d",
    "decompose_1d",
    "theta_branch_invariance_check",
]

#: |T22| below this raises ZeroT22 in decompose_1d
T22_TOL = 1e-13

#: switch to the sinhc Taylor series below this |theta|
SINHC_SERIES_CUTOFF = 1e-4


class ZeroT22(ArithmeticError):
    """T22 vanishes, so the factored form does not exist at these coefficients."""


def sinhc(z: complex) -> complex:
    """sinh(z)/z with the removable singularity filled by its Taylor series."""
    z = complex(z)
    if abs(z) < SINHC_SERIES_CUTOFF:
        z2 = z * z
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0
    return cmath.sinh(z) / z


@dataclass(frozen=True)
class Coefficients1D:
    """Single-mode generator coefficients; theta = sqrt(c^2 - a b) (principal)."""

    a: complex
    b: complex
    c: complex
    theta: complex = field(init=False)

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = complex(getattr(self, name))
            if not (cmath.isfinite(v)):
                raise ValueError(f"coefficient {name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "theta", cmath.sqrt(self.c * self.c - self.a * self.b))


def _entries(coeffs: Coefficients1D):
    th = coeffs.theta
    ch = cmath.cosh(th)
    sc = sinhc(th)
    return ch, sc


def transfer_1d(coeffs: Coefficients1D) -> np.ndarray:
    """Closed-form 2x2 transfer matrix of the single-mode generator."""
    ch, sc = _entries(coeffs)
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    return np.array(
        [[ch + c * sc, -a * sc], [b * sc, ch - c * sc]], dtype=complex
    )


def decompose_1d(coeffs: Coefficients1D) -> Factorization:
    """Closed-form single-mode factorization.

    Raises:
        ZeroT22: when |cosh(theta) - c sinhc(theta)| < 1e-13.
    """
    ch, sc = _entries(coeffs)
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    t22 = ch - c * sc
    if abs(t22) < T22_TOL:
        raise ZeroT22(f"T22 = {t22:.3e} vanishes; no factored form at these coefficients")
    w = -a * sc / t22
    z = b * sc / t22
    y = -cmath.log(t22)
    prefactor = cmath.exp(0.5 * y)
    return Factorization(1, [[w]], [[y]], [[z]], prefactor)


def theta_branch_invariance_check(coeffs: Coefficients1D, tol: float = 1e-13) -> bool:
    """True iff the transfer matrix is unchanged under theta -> -theta.

    cosh is even and sinh(z)/z is even, so this must always hold; the check
    evaluates both square-root branches numerically without the sinhc guard.
    """
    th = coeffs.theta
    if th == 0:
        raise ValueError("theta must be nonzero for a branch comparison")
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    mats = []
    for t in (th, -th):
        ch = cmath.cosh(t)
        sc = cmath.sinh(t) / t
        mats.append(np.array([[ch + c * sc, -a * sc], [b * sc, ch - c * sc]]))
    return bool(np.max(np.abs(mats[0] - mats[1])) <= tol)
