"""Gaussian wavefunctions as the verification substrate.

A state is psi(x) = exp(-x A x~ / 2 + b x~ + c) with A symmetric n x n,
b a row n-vector and c a scalar log-amplitude.  Quadratic operators map
Gaussians to Gaussians, and each factor of the reordered form acts in
closed form:

* quadratic phase exp(-x W x~ / 2):   A -> A + W
* dilation exp(x Y d~):               psi -> psi(x e^Y), i.e.
                                      A -> e^Y A e^Y~,  b -> b e^Y~
* heat exp(d Z d~ / 2):               Gaussian convolution,
                                      A -> (I + A Z)^-1 A,
                                      b -> b (I + Z A)^-1,
                                      c -> c + b (I + Z A)^-1 Z b~ / 2
                                             - log det(I + Z A) / 2

The heat update was derived independently from the convolution integral
(see the quadrature oracle below, which evaluates that integral directly
on a grid and is the acceptance gate for the formulas).

The same Gaussian can instead be evolved continuously: writing
psi_dot = A_op psi with the generator A_op = (x D1 x~ + x F d~ + d F~ x~
+ d D2 d~) / 2 and matching coefficients on the ansatz gives

    A' = -(D1 - F A - A F~ + A D2 A)            (matrix Riccati)
    b' = b (F~ - D2 A)
    c' = tr(F)/2 - tr(D2 A)/2 + b D2 b~ / 2

integrated here with a fixed-step classical 4th-order scheme.  Agreement
of this flow with the factored action is the library's central check; the
scalar c is defined modulo the log branch, so paths whose T22 determinant
winds across the principal cut shift c by multiples of i*pi (observable
through ode_checks.logdet_branch_gap).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Factorization, QuadraticGenerator
from .linalg import SingularMatrix, as_matrix, expm, maxabs, mat_det

__all__ = [
    "FlowSingular",
    "DivergentIntegrand",
    "GaussianState",
    "vacuum",
    "evaluate",
    "state_norm",
    "state_distance",
    "apply_quadratic_phase",
    "apply_dilation",
    "apply_heat",
    "apply_factorization",
    "evolve_generator",
    "QuadratureGrid",
    "quadrature_heat_1d",
]


class FlowSingular(ArithmeticError):
    """The Gaussian flow left the nondegenerate regime (parameters blew up)."""


class DivergentIntegrand(ValueError):
    """The heat-kernel integral does not converge for these parameters."""


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Wavefunction exp(-x A x~ / 2 + b x~ + c)."""

    n: int
    A: np.ndarray
    b: np.ndarray
    c: complex

    def __post_init__(self):
        n = self.n
        a = as_matrix(self.A, square=True, name="A")
        if a.shape != (n, n):
            raise ValueError(f"A must be {n}x{n}, got {a.shape}")
        dev = maxabs(a - a.T)
        if dev > 1e-13:
            raise ValueError(f"A must be symmetric: max |A - A~| = {dev:.3e}")
        b = np.asarray(self.b, dtype=complex).reshape(-1)
        if b.shape != (n,):
            raise ValueError(f"b must have length {n}, got {b.shape}")
        if not np.all(np.isfinite(b.real)) or not np.all(np.isfinite(b.imag)):
            raise ValueError("b contains non-finite entries")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", complex(self.c))

    @property
    def normalizable(self) -> bool:
        """True iff Re(A) is positive definite."""
        re = 0.5 * (self.A + self.A.T).real
        return bool(np.linalg.eigvalsh(re).min() > 0)


def vacuum(n: int) -> GaussianState:
    """Unit-norm reference state: A = I, b = 0, c = -(n/4) log pi."""
    return GaussianState(n, np.eye(n, dtype=complex), np.zeros(n, dtype=complex),
                         -(n / 4) * np.log(np.pi))


def evaluate(s: GaussianState, xs) -> np.ndarray:
    """Values of the wavefunction at sample points (rows of ``xs``)."""
    pts = np.asarray(xs, dtype=complex)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1) if s.n == 1 else pts.reshape(1, -1)
    quad = np.einsum("mi,ij,mj->m", pts, s.A, pts)
    return np.exp(-0.5 * quad + pts @ s.b + s.c)


def state_norm(s: GaussianState) -> float:
    """L2 norm computed from the parameters (requires a normalizable state)."""
    if not s.normalizable:
        raise ValueError("state is not normalizable: Re(A) is not positive definite")
    re_a = 0.5 * (s.A + s.A.T).real
    re_b = s.b.real
    quad = re_b @ np.linalg.solve(re_a, re_b)
    log_n2 = (
        2 * s.c.real
        + 0.5 * s.n * np.log(np.pi)
        - 0.5 * np.linalg.slogdet(re_a)[1]
        + quad
    )
    return float(np.exp(0.5 * log_n2))


def state_distance(s1: GaussianState, s2: GaussianState) -> float:
    """Max-abs distance across (A, b, c)."""
    if s1.n != s2.n:
        raise ValueError(f"mode counts differ: {s1.n} vs {s2.n}")
    return max(maxabs(s1.A - s2.A), maxabs(s1.b - s2.b), abs(s1.c - s2.c))


def apply_quadratic_phase(W, s: GaussianState) -> GaussianState:
    """exp(-x W x~ / 2): pointwise multiplication, A -> A + W."""
    w = as_matrix(W, square=True, name="W")
    return GaussianState(s.n, s.A + w, s.b, s.c)


def apply_dilation(Y, s: GaussianState) -> GaussianState:
    """exp(x Y d~): substitution x -> x e^Y."""
    e = expm(as_matrix(Y, square=True, name="Y"))
    a = e @ s.A @ e.T
    return GaussianState(s.n, 0.5 * (a + a.T), s.b @ e.T, s.c)


def apply_heat(Z, s: GaussianState) -> GaussianState:
    """exp(d Z d~ / 2): closed-form Gaussian convolution.

    Raises:
        SingularMatrix: when det(I + Z A) is zero to tolerance (the
            convolution integral diverges there).
    """
    z = as_matrix(Z, square=True, name="Z")
    eye = np.eye(s.n, dtype=complex)
    m0 = eye + z @ s.A
    det = mat_det(m0)
    if abs(det) <= 1e-13 * max(1.0, maxabs(m0) ** s.n):
        raise SingularMatrix(
            f"heat factor diverges: det(I + Z A) = {det:.3e}", pivot=abs(det)
        )
    a_new = np.linalg.solve(eye + s.A @ z, s.A)
    b_new = np.linalg.solve(m0.T, s.b)
    c_new = s.c + 0.5 * (b_new @ z @ s.b) - 0.5 * np.log(det)
    return GaussianState(s.n, 0.5 * (a_new + a_new.T), b_new, c_new)


def apply_factorization(f: Factorization, s: GaussianState) -> GaussianState:
    """Apply the reordered operator right-to-left: heat, dilation, phase, scalar.

    The scalar is added to c as tr(Y)/2, which equals log(prefactor) with
    the branch implied by Y itself.
    """
    out = apply_heat(f.Z, s)
    out = apply_dilation(f.Y, out)
    out = apply_quadratic_phase(f.W, out)
    return GaussianState(out.n, out.A, out.b, out.c + 0.5 * np.trace(f.Y))


def _flow_rhs(d1, d2, f, ft, a, b):
    a_dot = -(d1 - (f @ a + a @ f.T) + a @ d2 @ a)
    b_dot = b @ (ft - d2 @ a)
    c_dot = 0.5 * np.trace(f) - 0.5 * np.trace(d2 @ a) + 0.5 * (b @ d2 @ b)
    return a_dot, b_dot, c_dot


def evolve_generator(g: QuadraticGenerator, s: GaussianState, steps: int) -> GaussianState:
    """Integrate the Gaussian parameters under the un-factored generator.

    Classical fixed-step 4th-order integration of the Riccati/linear/scalar
    system over unit time, with ``steps`` steps.

    Raises:
        FlowSingular: if max|A| exceeds 1e8 along the flow.
    """
    if g.n != s.n:
        raise ValueError(f"mode counts differ: generator {g.n}, state {s.n}")
    steps = int(steps)
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    d1, d2, f = g.D1, g.D2, g.F
    ft = f.T
    a, b, c = s.A.copy(), s.b.copy(), complex(s.c)
    h = 1.0 / steps
    for _ in range(steps):
        k1 = _flow_rhs(d1, d2, f, ft, a, b)
        k2 = _flow_rhs(d1, d2, f, ft, a + 0.5 * h * k1[0], b + 0.5 * h * k1[1])
        k3 = _flow_rhs(d1, d2, f, ft, a + 0.5 * h * k2[0], b + 0.5 * h * k2[1])
        k4 = _flow_rhs(d1, d2, f, ft, a + h * k3[0], b + h * k3[1])
        a = a + (h / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        b = b + (h / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        c = c + (h / 6.0) * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        peak = maxabs(a)
        if not np.isfinite(peak) or peak > 1e8:
            raise FlowSingular(f"Gaussian flow blew up: max|A| = {peak:.3e}")
    a = 0.5 * (a + a.T)
    return GaussianState(s.n, a, b, c)


@dataclass(frozen=True)
class QuadratureGrid:
    """Uniform grid on [-half_width, half_width] for the 1-D heat quadrature."""

    half_width: float = 20.0
    points: int = 4001

    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points)


def quadrature_heat_1d(c0: complex, s: GaussianState, xs,
                       grid: QuadratureGrid = QuadratureGrid()) -> np.ndarray:
    """Direct quadrature of the heat-kernel convolution for a single mode.

    Evaluates (4 pi c0)^(-1/2) * integral exp(-(y - x)^2 / (4 c0)) psi(y) dy
    on a trapezoid grid at the requested sample points ``xs``.  The kernel
    normalization uses the principal square root.  This is a test oracle for
    :func:`apply_heat` with Z = 2 c0, not a fast path.

    Raises:
        DivergentIntegrand: if the kernel or the combined integrand does not
            decay (Re(1/(4 c0)) <= 0 or Re(1/(4 c0) + A/2) <= 0).
    """
    if s.n != 1:
        raise ValueError("quadrature oracle is one-dimensional only")
    c0 = complex(c0)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if c0 == 0:
        return evaluate(s, xs)
    kern_coeff = 1.0 / (4.0 * c0)
    if kern_coeff.real <= 0:
        raise DivergentIntegrand(
            f"heat kernel does not decay: Re(1/(4 c0)) = {kern_coeff.real:.3e}"
        )
    total = kern_coeff + 0.5 * s.A[0, 0]
    if total.real <= 0:
        raise DivergentIntegrand(
            f"integrand does not decay: Re(1/(4 c0) + A/2) = {total.real:.3e}"
        )
    y = grid.axis()
    psi = np.exp(-0.5 * s.A[0, 0] * y * y + s.b[0] * y + s.c)
    kern = np.exp(-kern_coeff * (y[None, :] - xs[:, None]) ** 2)
    vals = np.trapezoid(kern * psi[None, :], y, axis=1)
    return vals / np.sqrt(4.0 * np.pi * c0)
