import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from eqo.linalg import (
    BranchCut,
    ShapeError,
    SingularMatrix,
    Singularity,
    analytic_matrix_fn,
    as_matrix,
    expm,
    logm,
    mat_det,
    mat_inv,
    mat_mul,
    maxabs,
    sqrtm,
)
from eqo.one_mode import Coefficients1D, transfer_1d

_elements = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


def _square(n):
    return hnp.arrays(np.complex128, (n, n), elements=_elements)


# ---------------------------------------------------------------- mat_mul

def test_mat_mul_identity():
    a = np.array([[1.0, 2.0], [3.0, 4.0j]])
    assert maxabs(mat_mul(np.eye(2), a) - a) == 0


def test_mat_mul_swap_squares_to_identity():
    swap = np.array([[0, 1], [1, 0]])
    assert maxabs(mat_mul(swap, swap) - np.eye(2)) == 0


def test_mat_mul_inverse_roundtrip(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) + 3 * np.eye(3)
    assert maxabs(mat_mul(a, mat_inv(a)) - np.eye(3)) < 1e-12


def test_mat_mul_shape_mismatch_names_both_shapes():
    with pytest.raises(ShapeError, match=r"\(2, 3\).*\(2, 2\)"):
        mat_mul(np.ones((2, 3)), np.ones((2, 2)))


def test_as_matrix_rejects_nonfinite():
    with pytest.raises(ValueError, match="non-finite"):
        as_matrix([[np.nan, 0], [0, 1]])


# ---------------------------------------------------------------- mat_inv

def test_mat_inv_identity():
    assert maxabs(mat_inv(np.eye(3)) - np.eye(3)) == 0


def test_mat_inv_diagonal():
    out = mat_inv(np.diag([2.0, 4.0j]))
    assert maxabs(out - np.diag([0.5, -0.25j])) < 1e-15


def test_mat_inv_residual(rng):
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)) + 2 * np.eye(4)
    assert maxabs(a @ mat_inv(a) - np.eye(4)) < 1e-11


def test_mat_inv_singular_reports_pivot():
    with pytest.raises(SingularMatrix) as info:
        mat_inv(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert info.value.pivot >= 0


# ---------------------------------------------------------------- mat_det

def test_mat_det_identity():
    assert mat_det(np.eye(5)) == 1


def test_mat_det_hyperbolic_rotation():
    th = 0.7
    m = np.array([[np.cosh(th), np.sinh(th)], [np.sinh(th), np.cosh(th)]])
    assert abs(mat_det(m) - 1) < 1e-14


def test_det_of_exp_is_exp_of_trace(rng):
    a = 0.5 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    lhs = mat_det(expm(a))
    rhs = np.exp(np.trace(a))
    assert abs(lhs - rhs) < 1e-10 * abs(rhs)


# ---------------------------------------------------------------- expm

def test_expm_zero():
    assert maxabs(expm(np.zeros((4, 4))) - np.eye(4)) == 0


def test_expm_involutory_direction():
    th = 0.7
    out = expm(np.array([[0.0, th], [th, 0.0]]))
    want = np.array([[np.cosh(th), np.sinh(th)], [np.sinh(th), np.cosh(th)]])
    assert maxabs(out - want) < 1e-14


def test_expm_matches_one_mode_closed_form():
    a, b, c = 0.2, 0.3, 0.5
    out = expm(np.array([[c, -a], [b, -c]]))
    want = transfer_1d(Coefficients1D(a, b, c))
    assert maxabs(out - want) < 1e-13


@given(_square(3))
def test_expm_inverse_property(a):
    assert maxabs(expm(a) @ expm(-a) - np.eye(3)) < 1e-11


@given(_square(2))
def test_expm_is_pure(a):
    assert np.array_equal(expm(a), expm(a))


# ---------------------------------------------------------------- logm

def test_logm_identity():
    assert maxabs(logm(np.eye(3))) < 1e-14


def test_logm_diagonal():
    out = logm(np.diag([np.exp(2.0), np.exp(1j)]))
    assert maxabs(out - np.diag([2.0, 1j])) < 1e-13


@given(_square(3))
def test_logm_expm_roundtrip(a):
    a = 0.3 * a  # spectral norm below 1 keeps exp(a) in principal territory
    assert maxabs(logm(expm(a)) - a) < 1e-10


def test_logm_branch_cut_rejected():
    with pytest.raises(BranchCut) as info:
        logm(np.diag([-2.0, 1.0]))
    assert info.value.eigenvalue.real < 0


def test_logm_result_on_principal_strip(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    w = np.linalg.eigvals(logm(expm(0.4 * a)))
    assert np.all(w.imag > -np.pi) and np.all(w.imag <= np.pi)


# ---------------------------------------------------------------- sqrtm

def test_sqrtm_identity():
    assert maxabs(sqrtm(np.eye(2)) - np.eye(2)) < 1e-14


def test_sqrtm_coupling_closed_form():
    lam = 0.6
    om = 0.5 * np.arcsin(lam)
    out = sqrtm(np.array([[1.0, lam], [lam, 1.0]]))
    want = np.array([[np.cos(om), np.sin(om)], [np.sin(om), np.cos(om)]])
    assert maxabs(out - want) < 1e-12


def test_sqrtm_squares_back(rng):
    b = rng.standard_normal((3, 3))
    a = b @ b.T + 0.5 * np.eye(3)
    root = sqrtm(a)
    assert maxabs(root @ root - a) < 1e-10


def test_sqrtm_branch_cut_rejected():
    with pytest.raises(BranchCut):
        sqrtm(np.diag([-1.0, 1.0]))


# ------------------------------------------------------ analytic functions

def test_cos_zero():
    assert maxabs(analytic_matrix_fn(np.zeros((2, 2)), "cos") - np.eye(2)) == 0


def test_cos_of_scaled_identity():
    out = analytic_matrix_fn(0.3 * np.eye(2), "cos")
    assert maxabs(out - np.cos(0.3) * np.eye(2)) < 1e-14


def test_pythagorean_identity(rng):
    a = rng.standard_normal((2, 2))
    a = 0.5 * (a + a.T)
    c = analytic_matrix_fn(a, "cos")
    s = analytic_matrix_fn(a, "sin")
    assert maxabs(c @ c + s @ s - np.eye(2)) < 1e-11


def test_hyperbolic_vs_exponential(rng):
    a = 0.4 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    ch = analytic_matrix_fn(a, "cosh")
    sh = analytic_matrix_fn(a, "sinh")
    assert maxabs(ch + sh - expm(a)) < 1e-12


def test_tan_matches_scalar():
    out = analytic_matrix_fn(0.4 * np.eye(2), "tan")
    assert maxabs(out - np.tan(0.4) * np.eye(2)) < 1e-13


def test_tan_singularity():
    with pytest.raises(Singularity):
        analytic_matrix_fn((np.pi / 2) * np.eye(2), "tan")


def test_unknown_function_rejected():
    with pytest.raises(ValueError, match="unknown analytic function"):
        analytic_matrix_fn(np.eye(2), "exp")
