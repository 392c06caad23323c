"""Dense complex matrix arithmetic and matrix functions.

Everything in this package runs on plain ``numpy`` arrays of dtype
``complex128``; this module is the single entry point for inverses,
determinants and the matrix functions (exp, log, sqrt, trig/hyperbolic)
the rest of the library needs.  Matrix log and square root always use the
PRINCIPAL branch: eigenvalues on the closed negative real axis are refused
with :class:`BranchCut` instead of silently picking a sheet.

The intended regime is small dense matrices (a handful of modes), so the
kernels are scipy's scaling-and-squaring exponential and Schur-based
inverse-scaling-and-squaring log/sqrt.  All functions are pure.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg as _sla

__all__ = [
    "ShapeError",
    "SingularMatrix",
    "BranchCut",
    "Singularity",
    "as_matrix",
    "mat_mul",
    "mat_inv",
    "mat_det",
    "expm",
    "logm",
    "sqrtm",
    "analytic_matrix_fn",
    "maxabs",
]

#: default relative tolerance used by singularity / branch-cut gates
PIVOT_RTOL = 1e-13


class ShapeError(ValueError):
    """Operands have incompatible or invalid shapes."""


class SingularMatrix(ArithmeticError):
    """Matrix is singular to working tolerance.

    Attributes:
        pivot: magnitude of the offending pivot from the LU factorization.
    """

    def __init__(self, message: str, pivot: float = 0.0):
        super().__init__(message)
        self.pivot = pivot


class BranchCut(ArithmeticError):
    """An eigenvalue sits on the principal branch cut (closed negative real axis).

    Attributes:
        eigenvalue: the offending eigenvalue.
    """

    def __init__(self, message: str, eigenvalue: complex = 0j):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class Singularity(ArithmeticError):
    """An analytic matrix function is evaluated at a pole (e.g. tan where cos is singular)."""


def as_matrix(a, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a complex128 2-D array, validating finiteness and shape."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"{name} must be non-empty, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {m.shape}")
    return m


def maxabs(a) -> float:
    """Max-abs norm, the residual norm used throughout the library."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def mat_mul(a, b) -> np.ndarray:
    """Matrix product with an explicit shape check."""
    a = as_matrix(a, name="left operand")
    b = as_matrix(b, name="right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"cannot multiply shapes {a.shape} and {b.shape}: "
            f"inner dimensions {a.shape[1]} != {b.shape[0]}"
        )
    return a @ b


def _lu_pivots(a: np.ndarray):
    with warnings.catch_warnings():
        # exactly-singular input is detected by the pivot gate, not scipy's warning
        warnings.simplefilter("ignore", _sla.LinAlgWarning)
        lu, piv = _sla.lu_factor(a, check_finite=False)
    return lu, piv, np.abs(np.diag(lu))


def mat_inv(a, *, pivot_rtol: float = PIVOT_RTOL) -> np.ndarray:
    """Inverse via pivoted LU.

    Raises:
        SingularMatrix: if the smallest pivot falls below ``pivot_rtol * maxabs(a)``.
    """
    a = as_matrix(a, square=True, name="matrix")
    lu, piv, pivots = _lu_pivots(a)
    small = float(pivots.min())
    if small <= pivot_rtol * maxabs(a):
        raise SingularMatrix(
            f"matrix is singular to tolerance: pivot {small:.3e} "
            f"<= {pivot_rtol:.1e} * {maxabs(a):.3e}",
            pivot=small,
        )
    return _sla.lu_solve((lu, piv), np.eye(a.shape[0], dtype=complex), check_finite=False)


def mat_det(a) -> complex:
    """Determinant; closed form for 1x1 and 2x2, pivoted elimination otherwise."""
    a = as_matrix(a, square=True, name="matrix")
    n = a.shape[0]
    if n == 1:
        return complex(a[0, 0])
    if n == 2:
        return complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    return complex(np.linalg.det(a))


def expm(a) -> np.ndarray:
    """Matrix exponential (scaling and squaring with Pade kernel)."""
    a = as_matrix(a, square=True, name="matrix")
    return np.asarray(_sla.expm(a), dtype=complex)


def _check_principal_branch(a: np.ndarray, what: str, rtol: float = PIVOT_RTOL) -> None:
    w = np.linalg.eigvals(a)
    scale = max(1.0, float(np.max(np.abs(w))))
    for lam in w:
        if lam.real <= rtol * scale and abs(lam.imag) <= rtol * scale:
            raise BranchCut(
                f"{what} is not defined on the principal branch: eigenvalue "
                f"{lam:.6e} lies on the closed negative real axis",
                eigenvalue=complex(lam),
            )


def logm(a) -> np.ndarray:
    """Principal matrix logarithm.

    Eigenvalue imaginary parts of the result lie in (-pi, pi].

    Raises:
        BranchCut: if an eigenvalue of ``a`` lies on the closed negative real axis.
    """
    a = as_matrix(a, square=True, name="matrix")
    _check_principal_branch(a, "matrix logarithm")
    out, _errest = _sla.logm(a, disp=False)
    return np.asarray(out, dtype=complex)


def sqrtm(a) -> np.ndarray:
    """Principal matrix square root (eigenvalues in the right half-plane).

    Raises:
        BranchCut: if an eigenvalue of ``a`` lies on the closed negative real axis.
    """
    a = as_matrix(a, square=True, name="matrix")
    _check_principal_branch(a, "matrix square root")
    out, _errest = _sla.sqrtm(a, disp=False)
    return np.asarray(out, dtype=complex)


def analytic_matrix_fn(a, fn: str) -> np.ndarray:
    """Entire/analytic function of a matrix via exponential combinations.

    Supported: cos, sin, tan, cosh, sinh.  ``tan`` solves cos(a) x = sin(a)
    and raises :class:`Singularity` when cos(a) is singular to tolerance.
    """
    a = as_matrix(a, square=True, name="matrix")
    if fn == "cos":
        return 0.5 * (expm(1j * a) + expm(-1j * a))
    if fn == "sin":
        return (expm(1j * a) - expm(-1j * a)) / 2j
    if fn == "cosh":
        return 0.5 * (expm(a) + expm(-a))
    if fn == "sinh":
        return 0.5 * (expm(a) - expm(-a))
    if fn == "tan":
        c = analytic_matrix_fn(a, "cos")
        s = analytic_matrix_fn(a, "sin")
        _lu, _piv, pivots = _lu_pivots(c)
        if float(pivots.min()) <= PIVOT_RTOL * max(1.0, maxabs(c)):
            raise Singularity(
                f"tan evaluated at a pole: cos factor singular (pivot {pivots.min():.3e})"
            )
        return np.linalg.solve(c, s)
    raise ValueError(f"unknown analytic function {fn!r}; expected cos, sin, tan, cosh or sinh")
