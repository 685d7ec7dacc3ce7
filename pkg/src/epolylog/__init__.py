"""Numerics for the elliptic polylogarithm: Weierstrass and theta kernels,
divided-power logarithm fibers with their connections, level-N Eisenstein
series, and the torsion specialization tying them together."""

from .eisenstein import (
    ConvergenceModeError,
    DegenerateLabelError,
    EisensteinQuery,
    F,
    F_tilde,
    eisenstein_sum_k2,
)
from .kronecker import (
    DVariantCoeffs,
    KroneckerPoint,
    StencilMarginError,
    default_cauchy_config,
    distribution_residual,
    dlog_kato_siegel,
    heat_residual,
    jacobi_J,
    quasi_period_factor,
    s_coeffs,
    theta,
)
from .logsheaf import (
    LiftSupportError,
    LogFiber,
    LogValuedForm,
    abs_connection,
    basis_indices,
    curvature_residual,
    dp_multiply,
    gauss_manin_matrix,
    ks_lift,
    rel_connection,
    transition,
)
from .numerics import (
    AliasingError,
    CauchyConfig,
    DiffConfig,
    LatticeTruncation,
    NonFiniteError,
    cauchy_coeffs,
    contour_integral,
    enumerate_lattice,
    finite_diff,
    kahan_sum,
)
from .polylog import (
    L_form,
    TorsionLabel,
    closedness_residual,
    l_form,
    specialize_eisenstein,
)
from .weierstrass import (
    ConvergenceError,
    ModuliPoint,
    PoleProximityError,
    QuasiPeriods,
    eta1_prime,
    eta_periods,
    g_invariants,
    lattice_dist,
    reduce_to_cell,
    sigma,
    theta_logderiv,
    theta_normalized,
    wp,
    zeta_fn,
)

__version__ = "0.1.0"
