"""Reordering of n-mode exponential quadratic operators in coordinate-derivative space.

The library factors exp((1/2)(x, d) R (x, d)~) into the ordered product
prefactor * exp(-x W x~ / 2) * exp(x Y d~) * exp(d Z d~ / 2) through the
transfer matrix T = exp(R Sigma^-1), and verifies every factorization
independently by acting on Gaussian wavefunctions.
"""

from .linalg import (
    BranchCut,
    ShapeError,
    SingularMatrix,
    Singularity,
    analytic_matrix_fn,
    expm,
    logm,
    mat_det,
    mat_inv,
    mat_mul,
    maxabs,
    sqrtm,
)
from .core import (
    AsymmetryError,
    Factorization,
    QuadraticGenerator,
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
from .one_mode import (
    Coefficients1D,
    ZeroT22,
    decompose_1d,
    sinhc,
    theta_branch_invariance_check,
    transfer_1d,
)
from .catalog import (
    CATALOG,
    NamedOperator,
    build_catalog_operator,
    coupled_oscillator,
    coupling_matrix,
    coupling_matrix_sqrt,
    harmonic_time_displacement,
    squeeze_1d,
    two_mode_squeeze,
)
from .gaussian import (
    DivergentIntegrand,
    FlowSingular,
    GaussianState,
    QuadratureGrid,
    apply_dilation,
    apply_factorization,
    apply_heat,
    apply_quadratic_phase,
    evaluate,
    evolve_generator,
    quadrature_heat_1d,
    state_distance,
    state_norm,
    vacuum,
)
from .ode_checks import (
    OdeTrace,
    VOdeResult,
    logdet_branch_gap,
    prefactor_consistency,
    t_matrix_ode_residual,
    v_ode_check,
    v_ode_trace,
)

__version__ = "0.1.0"
