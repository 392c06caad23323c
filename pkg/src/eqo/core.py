"""Reordering of exponential quadratic operators (EQOs).

An EQO is exp(A) with A = (1/2) (x, d) R (x, d)^T, where x are the n
coordinates, d the n derivatives, and R the symmetric 2n x 2n generator
built from blocks D1, D2 (symmetric) and F:

    R = [[D1, F ],
         [F~, D2]]        (~ is plain transpose, never conjugation)

Conjugation by the EQO acts linearly on (x, d) through the transfer matrix

    T = exp(R Sigma^-1),   Sigma = [[0, I], [-I, 0]],

which is symplectic (T~ Sigma T = Sigma).  When the lower-right block T22
is invertible, T factors as upper-unitriangular x block-diagonal x
lower-unitriangular,

    T = [[I, W], [0, I]] [[e^Y, 0], [0, e^-Y~]] [[I, 0], [Z, I]],
    W = T12 T22^-1,  Z = T22^-1 T21,  Y = -log(T22~),

and correspondingly the operator reorders into

    exp(A) = e^(tr Y / 2) * exp(-x W x~ / 2) * exp(x Y d~) * exp(d Z d~ / 2).

The scalar prefactor is always computed as exp(tr Y / 2) so it shares the
principal-branch choice made for Y.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    ShapeError,
    SingularMatrix,
    _lu_pivots,
    as_matrix,
    expm,
    logm,
    maxabs,
    mat_det,
)
import scipy.linalg as _sla

__all__ = [
    "AsymmetryError",
    "QuadraticGenerator",
    "TransferMatrix",
    "Factorization",
    "assemble_generator",
    "sigma",
    "transfer_matrix",
    "symplectic_residual",
    "block_relation_residual",
    "gauss_decompose",
    "reconstruct",
    "reconstruction_residual",
]

#: D1 / D2 must be symmetric to this absolute tolerance
SYMMETRY_TOL = 1e-13

#: decomposition refuses T22 whose smallest LU pivot is below this times max(1, |T22|)
DECOMPOSE_PIVOT_RTOL = 1e-7


class AsymmetryError(ValueError):
    """A block that must be symmetric is not.

    Attributes:
        deviation: max-abs of (block - block^T).
    """

    def __init__(self, message: str, deviation: float = 0.0):
        super().__init__(message)
        self.deviation = deviation


def _require_symmetric(m: np.ndarray, name: str, tol: float = SYMMETRY_TOL) -> None:
    dev = maxabs(m - m.T)
    if dev > tol:
        raise AsymmetryError(f"{name} must be symmetric: max |{name} - {name}~| = {dev:.3e}", deviation=dev)


@dataclass(frozen=True, eq=False)
class QuadraticGenerator:
    """Validated generator blocks of an n-mode EQO."""

    n: int
    D1: np.ndarray
    D2: np.ndarray
    F: np.ndarray

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ShapeError(f"mode count must be positive, got {n}")
        for name in ("D1", "D2", "F"):
            m = as_matrix(getattr(self, name), square=True, name=name)
            if m.shape != (n, n):
                raise ShapeError(f"{name} must be {n}x{n}, got {m.shape}")
            object.__setattr__(self, name, m)
        _require_symmetric(self.D1, "D1")
        _require_symmetric(self.D2, "D2")

    @property
    def R(self) -> np.ndarray:
        """The assembled symmetric 2n x 2n matrix [[D1, F], [F~, D2]]."""
        return np.block([[self.D1, self.F], [self.F.T, self.D2]])

    def scaled(self, s: complex) -> "QuadraticGenerator":
        """Generator with all blocks multiplied by the scalar s."""
        return QuadraticGenerator(self.n, s * self.D1, s * self.D2, s * self.F)


def assemble_generator(D1, F, D2) -> QuadraticGenerator:
    """Build and validate a generator from its three n x n blocks.

    Raises:
        AsymmetryError: if D1 or D2 deviates from symmetry by more than 1e-13.
        ShapeError: on shape mismatch between the blocks.
    """
    D1 = as_matrix(D1, square=True, name="D1")
    F = as_matrix(F, square=True, name="F")
    D2 = as_matrix(D2, square=True, name="D2")
    if not (D1.shape == F.shape == D2.shape):
        raise ShapeError(
            f"blocks must share one shape, got D1 {D1.shape}, F {F.shape}, D2 {D2.shape}"
        )
    return QuadraticGenerator(D1.shape[0], D1, D2, F)


def sigma(n: int) -> np.ndarray:
    """The 2n x 2n symplectic form [[0, I], [-I, 0]].

    Satisfies sigma^-1 = -sigma = sigma~.
    """
    if n < 1:
        raise ShapeError(f"mode count must be positive, got {n}")
    eye = np.eye(n, dtype=complex)
    zero = np.zeros((n, n), dtype=complex)
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """The four n x n blocks of T = exp(R Sigma^-1).

    ``symplectic_defect`` is a diagnostic recorded at construction time by
    :func:`transfer_matrix`; it is not part of the mathematical state.
    """

    n: int
    T11: np.ndarray
    T12: np.ndarray
    T21: np.ndarray
    T22: np.ndarray
    symplectic_defect: float | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.n
        for name in ("T11", "T12", "T21", "T22"):
            m = as_matrix(getattr(self, name), square=True, name=name)
            if m.shape != (n, n):
                raise ShapeError(f"{name} must be {n}x{n}, got {m.shape}")
            object.__setattr__(self, name, m)

    @classmethod
    def from_full(cls, t: np.ndarray, defect: float | None = None) -> "TransferMatrix":
        t = as_matrix(t, square=True, name="T")
        if t.shape[0] % 2:
            raise ShapeError(f"T must be 2n x 2n, got {t.shape}")
        n = t.shape[0] // 2
        return cls(n, t[:n, :n], t[:n, n:], t[n:, :n], t[n:, n:], symplectic_defect=defect)

    def full(self) -> np.ndarray:
        """The assembled 2n x 2n matrix."""
        return np.block([[self.T11, self.T12], [self.T21, self.T22]])


def transfer_matrix(g: QuadraticGenerator) -> TransferMatrix:
    """T = exp(R Sigma^-1), assembled block-wise as exp([[F, -D1], [D2, -F~]])."""
    k = np.block([[g.F, -g.D1], [g.D2, -g.F.T]])
    t = expm(k)
    out = TransferMatrix.from_full(t)
    return TransferMatrix.from_full(t, defect=symplectic_residual(out))


def symplectic_residual(t: TransferMatrix) -> float:
    """Max-abs of T~ Sigma T - Sigma; zero exactly when T is symplectic."""
    full = t.full()
    s = sigma(t.n)
    return maxabs(full.T @ s @ full - s)


def _gated_inverse(t22: np.ndarray, pivot_rtol: float) -> np.ndarray:
    # scale floor of 1 keeps the gate meaningful when T22 itself is the small object
    lu, piv, pivots = _lu_pivots(t22)
    small = float(pivots.min())
    if small <= pivot_rtol * max(1.0, maxabs(t22)):
        raise SingularMatrix(
            f"T22 is singular to tolerance (pivot {small:.3e}, |det T22| = "
            f"{abs(mat_det(t22)):.3e}): the upper/diagonal/lower factorization does not exist",
            pivot=small,
        )
    return _sla.lu_solve((lu, piv), np.eye(t22.shape[0], dtype=complex), check_finite=False)


def block_relation_residual(t: TransferMatrix) -> float:
    """Residual of the dependence relations among the blocks of a symplectic T.

    Checks T11 = T22~^-1 + T12 T22^-1 T21 together with the three entry-wise
    identities T22~ T11 - T12~ T21 = I, T21~ T11 = T11~ T21 and
    T22~ T12 = T12~ T22, and returns the largest max-abs residual.

    Raises:
        SingularMatrix: when T22 is singular to tolerance.
    """
    t22_inv = _gated_inverse(t.T22, pivot_rtol=1e-13)
    eye = np.eye(t.n, dtype=complex)
    r = [
        maxabs(t.T11 - (t22_inv.T + t.T12 @ t22_inv @ t.T21)),
        maxabs(t.T22.T @ t.T11 - t.T12.T @ t.T21 - eye),
        maxabs(t.T21.T @ t.T11 - t.T11.T @ t.T21),
        maxabs(t.T22.T @ t.T12 - t.T12.T @ t.T22),
    ]
    return max(r)


@dataclass(frozen=True, eq=False)
class Factorization:
    """Parameters (W, Y, Z, prefactor) of the reordered operator.

    W and Z are symmetrized after computation; ``symmetry_defect`` records the
    max-abs asymmetry they carried beforehand (a numerical diagnostic).
    The prefactor equals exp(tr Y / 2) by construction.
    """

    n: int
    W: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    prefactor: complex
    symmetry_defect: float = field(default=0.0, compare=False)

    def __post_init__(self):
        n = self.n
        for name in ("W", "Y", "Z"):
            m = as_matrix(getattr(self, name), square=True, name=name)
            if m.shape != (n, n):
                raise ShapeError(f"{name} must be {n}x{n}, got {m.shape}")
            object.__setattr__(self, name, m)
        object.__setattr__(self, "prefactor", complex(self.prefactor))


def gauss_decompose(t: TransferMatrix, *, pivot_rtol: float = DECOMPOSE_PIVOT_RTOL) -> Factorization:
    """Factor T into (W, Y, Z, prefactor).

    W = T12 T22^-1 and Z = T22^-1 T21 are symmetric up to rounding for any
    symplectic T and are explicitly symmetrized; Y = -log(T22~) uses the
    principal matrix logarithm, and the prefactor is exp(tr Y / 2).

    Raises:
        SingularMatrix: when T22 is singular to tolerance (the factorization
            does not exist there).
        BranchCut: when T22~ has an eigenvalue on the closed negative real axis.
    """
    t22_inv = _gated_inverse(t.T22, pivot_rtol=pivot_rtol)
    w = t.T12 @ t22_inv
    z = t22_inv @ t.T21
    y = -logm(t.T22.T)
    defect = max(maxabs(w - w.T), maxabs(z - z.T))
    w = 0.5 * (w + w.T)
    z = 0.5 * (z + z.T)
    prefactor = complex(np.exp(0.5 * np.trace(y)))
    return Factorization(t.n, w, y, z, prefactor, symmetry_defect=defect)


def reconstruct(f: Factorization) -> TransferMatrix:
    """Multiply the three block factors back into a transfer matrix."""
    e_y = expm(f.Y)
    e_my = expm(-f.Y.T)
    t11 = e_y + f.W @ e_my @ f.Z
    t12 = f.W @ e_my
    t21 = e_my @ f.Z
    return TransferMatrix(f.n, t11, t12, t21, e_my)


def reconstruction_residual(t: TransferMatrix, f: Factorization) -> float:
    """Relative max-abs distance between T and the reassembled factorization."""
    orig = t.full()
    return maxabs(reconstruct(f).full() - orig) / max(1.0, maxabs(orig))
