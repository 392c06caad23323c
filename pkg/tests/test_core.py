import numpy as np
import pytest

from eqo import (
    AsymmetryError,
    Factorization,
    TransferMatrix,
    assemble_generator,
    block_relation_residual,
    gauss_decompose,
    reconstruct,
    reconstruction_residual,
    sigma,
    symplectic_residual,
    transfer_matrix,
)
from eqo.catalog import harmonic_time_displacement, squeeze_1d
from eqo.linalg import ShapeError, SingularMatrix, expm, mat_det, mat_inv, maxabs
from eqo.one_mode import Coefficients1D, decompose_1d, transfer_1d

from helpers import random_generator


# ---------------------------------------------------------------- sigma

def test_sigma_one_mode():
    assert maxabs(sigma(1) - np.array([[0, 1], [-1, 0]])) == 0


def test_sigma_squares_to_minus_identity():
    s = sigma(3)
    assert maxabs(s @ s + np.eye(6)) == 0


def test_sigma_inverse_is_minus_sigma():
    s = sigma(2)
    assert maxabs(mat_inv(s) + s) < 1e-15


# ---------------------------------------------------------------- assembly

def test_assemble_zero_generator():
    z = np.zeros((2, 2))
    g = assemble_generator(z, z, z)
    assert maxabs(g.R) == 0


def test_assemble_one_mode_layout():
    a, b, c = 0.3 + 0.1j, -0.2, 0.5j
    g = assemble_generator([[a]], [[c]], [[b]])
    assert maxabs(g.R - np.array([[a, c], [c, b]])) == 0


def test_assemble_rejects_asymmetric_d1():
    with pytest.raises(AsymmetryError) as info:
        assemble_generator([[1.0, 0.0], [0.1, 1.0]], np.zeros((2, 2)), np.eye(2))
    assert info.value.deviation == pytest.approx(0.1)


def test_assemble_rejects_shape_mismatch():
    with pytest.raises(ShapeError):
        assemble_generator(np.eye(2), np.zeros((3, 3)), np.eye(2))


def test_generator_scaling_by_zero_gives_identity_transfer():
    g = random_generator(2, np.random.default_rng(5)).scaled(0.0)
    t = transfer_matrix(g)
    assert maxabs(t.full() - np.eye(4)) == 0


def test_transfer_matrix_scaling_law(rng):
    g = random_generator(2, rng)
    s = 0.37
    t_scaled = transfer_matrix(g.scaled(s))
    k = np.block([[g.F, -g.D1], [g.D2, -g.F.T]])
    assert maxabs(t_scaled.full() - expm(s * k)) < 1e-13


# ---------------------------------------------------------------- transfer

def test_transfer_zero_generator_blocks():
    z = np.zeros((3, 3))
    t = transfer_matrix(assemble_generator(z, z, z))
    assert maxabs(t.T11 - np.eye(3)) == 0
    assert maxabs(t.T22 - np.eye(3)) == 0
    assert maxabs(t.T12) == 0 and maxabs(t.T21) == 0


def test_transfer_harmonic_closed_form():
    t0 = 0.3
    t = transfer_matrix(harmonic_time_displacement(t0).generator)
    want = np.array([[np.cos(t0), 1j * np.sin(t0)], [1j * np.sin(t0), np.cos(t0)]])
    assert maxabs(t.full() - want) < 1e-14


def test_transfer_records_symplectic_defect(rng):
    t = transfer_matrix(random_generator(3, rng))
    assert t.symplectic_defect is not None
    assert t.symplectic_defect < 1e-10


def test_transfer_random_is_symplectic(rng):
    for _ in range(20):
        t = transfer_matrix(random_generator(3, rng))
        assert symplectic_residual(t) < 1e-10


# ---------------------------------------------------------------- residuals

def test_symplectic_residual_identity():
    t = TransferMatrix.from_full(np.eye(6))
    assert symplectic_residual(t) == 0


def test_symplectic_residual_detects_perturbation(rng):
    t = transfer_matrix(random_generator(2, rng))
    bumped = TransferMatrix(t.n, t.T11 + 1e-3, t.T12, t.T21, t.T22)
    assert symplectic_residual(bumped) >= 5e-4


def test_block_relation_identity():
    t = TransferMatrix.from_full(np.eye(4))
    assert block_relation_residual(t) == 0


def test_block_relation_random(rng):
    for _ in range(10):
        t = transfer_matrix(random_generator(2, rng))
        assert block_relation_residual(t) < 1e-10


def test_block_relation_singular_t22():
    t = transfer_matrix(harmonic_time_displacement(np.pi / 2).generator)
    with pytest.raises(SingularMatrix):
        block_relation_residual(t)


# ---------------------------------------------------------------- decompose

def test_decompose_identity():
    f = gauss_decompose(TransferMatrix.from_full(np.eye(4)))
    assert maxabs(f.W) == 0 and maxabs(f.Z) == 0 and maxabs(f.Y) < 1e-14
    assert f.prefactor == pytest.approx(1.0)


def test_decompose_time_displacement_quarter_pi():
    f = gauss_decompose(transfer_matrix(harmonic_time_displacement(np.pi / 4).generator))
    assert abs(f.W[0, 0] - 1j) < 1e-14
    assert abs(f.Y[0, 0] - 0.5 * np.log(2)) < 1e-14
    assert abs(f.Z[0, 0] - 1j) < 1e-14
    assert abs(f.prefactor - 2 ** 0.25) < 1e-14


def test_decompose_pure_dilation():
    r = 0.8
    f = gauss_decompose(transfer_matrix(squeeze_1d(r, 0.0).generator))
    assert maxabs(f.W) < 1e-14 and maxabs(f.Z) < 1e-14
    assert abs(f.Y[0, 0] + r) < 1e-13
    assert abs(f.prefactor - np.exp(-r / 2)) < 1e-13


def test_decompose_singular_t22_rejected():
    t = transfer_matrix(harmonic_time_displacement(np.pi / 2).generator)
    with pytest.raises(SingularMatrix):
        gauss_decompose(t)


def test_decompose_outputs_symmetric(rng):
    for _ in range(10):
        f = gauss_decompose(transfer_matrix(random_generator(3, rng)))
        assert maxabs(f.W - f.W.T) == 0
        assert maxabs(f.Z - f.Z.T) == 0
        assert f.symmetry_defect < 1e-12


def test_prefactor_squared_times_det(rng):
    for _ in range(10):
        t = transfer_matrix(random_generator(2, rng))
        if abs(mat_det(t.T22)) < 0.02:
            continue
        f = gauss_decompose(t)
        assert abs(f.prefactor ** 2 * mat_det(t.T22) - 1) < 1e-10


# -------------------------------------------------------------- reconstruct

def test_reconstruct_identity_factorization():
    z = np.zeros((2, 2))
    t = reconstruct(Factorization(2, z, z, z, 1.0))
    assert maxabs(t.full() - np.eye(4)) == 0


def test_reconstruct_roundtrip(rng):
    kept = 0
    while kept < 10:
        t = transfer_matrix(random_generator(3, rng))
        if abs(mat_det(t.T22)) < 0.02:
            continue
        kept += 1
        assert reconstruction_residual(t, gauss_decompose(t)) < 1e-10


def test_reconstruct_one_mode_cross_oracle():
    coeffs = Coefficients1D(0.4, -0.2, 0.1)
    t = reconstruct(decompose_1d(coeffs))
    assert maxabs(t.full() - transfer_1d(coeffs)) < 1e-13
