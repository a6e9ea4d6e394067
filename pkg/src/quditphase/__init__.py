"""Stratonovich-Weyl phase-space calculus for symmetric N-quDit systems on CP^(D-1)."""

from .combinatorics import (
    InversionCoefficients,
    ModelParams,
    YoungShape,
    casimir_eigenvalue,
    cg_decomposition,
    dim_harmonic,
    dim_sym,
    inversion_coefficients,
    lambda_series,
    log_tau,
    tau_of_lambda_expansion,
    young_dim,
)
from .geometry import (
    NonConvergentIntegral,
    PhasePoint,
    fock_amplitude,
    fock_basis,
    fock_position,
    haar_integrate,
    monomial_integral,
    overlap_q,
)
from .harmonic import (
    HarmonicBasis,
    LambdaKernel,
    SingularGramError,
    build_harmonic_basis,
    kernel_value,
    lambda_kernel,
    project_level,
    reproducing_check,
)
from .rationals import GaussianRational, exact, gauss
from .rpf import RationalPolyFunction
from .states import (
    CatSpec,
    DegenerateStateError,
    StateDescriptor,
    StateVector,
    cat_state,
    coherent_state,
    density_matrix,
    fock_state,
    husimi,
    maximally_mixed,
    mixture,
    multimode_cat,
    parse_state,
    spin_operators,
    su_generator,
)
from .swcalc import (
    NonHermitianWarning,
    OperatorMatrix,
    QuasiDistribution,
    SWKernelSymbolic,
    build_sw_kernel,
    fano_operator,
    fano_operators,
    heat_kernel,
    heat_kernel_trace,
    heat_limit_residual,
    moyal_bracket,
    poisson_bracket,
    quasi_distribution,
    reconstruct_density,
    smooth,
    standardization_matrix,
    star_product,
    sw_heat_equation_check,
    sw_kernel,
    symbol,
    tracing_residual,
    trikernel,
    trikernel_marginal,
    trikernel_star,
)

__version__ = "0.1.0"
