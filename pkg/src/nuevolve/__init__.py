"""Non-unitary evolution of time-dependent non-Hermitian su(1,1)/su(2) systems.

The package builds Hamiltonians H(t) = 2w(t)K0 + 2a(t)K- + 2b(t)K+ from
su(2) or truncated su(1,1) generator matrices, disentangles the non-unitary
dressing transformation into triangular factors, integrates the constraint
flow that reduces the transformed Hamiltonian to the K0 direction, and
assembles closed-form solutions of the Schrodinger equation that a direct
dense propagator verifies independently.
"""

from .algebra import (
    AlgebraKind,
    CommutatorResiduals,
    Representation,
    build_su2_rep,
    build_su11_boson_rep,
    commutator_residuals,
)
from .decomposition import (
    CanonicalParams,
    GaussParams,
    ReducedParams,
    build_group_element,
    canonical_exponential,
    continuous_log,
    fold_reduced,
    gauss_decompose,
    gauss_from_reduced,
    invert_group_element,
    reduce_params,
)
from .errors import (
    ConfigError,
    NoStationaryPointError,
    NuevolveError,
    ProfileDomainError,
    SingularDecompositionError,
    SingularFlowError,
    StiffnessError,
    TruncationError,
)
from .flow import (
    FlowState,
    IntegratorConfig,
    Trajectory,
    flow_rhs,
    integrate_flow,
    integrate_riccati,
    riccati_rhs,
    stationary_state,
)
from .model import (
    CoefficientSet,
    ConstantProfile,
    PolarCoeffs,
    SinusoidProfile,
    TableProfile,
    eval_coeffs,
    h_matrix,
)
from .oracle import (
    PropagationResult,
    boson_exponential_columns,
    propagate_direct,
    state_error,
    swanson_spectrum,
)
from .solution import (
    EigenIndex,
    PhaseLaw,
    StateVector,
    basis_vector,
    closed_form_state,
    eigen_index,
    metric_overlap,
    naive_norm_drift,
    phase_integral,
    schrodinger_residual,
    sign_convention_audit,
)
from .transform import (
    ResidualReport,
    TransformedCoeffs,
    gauss_params_at,
    matrix_form_residual,
    re_w,
    residual_scan,
    transformed_coeffs,
)

__version__ = "0.1.0"
