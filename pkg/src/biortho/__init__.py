"""Biorthogonal quantum mechanics for finite-dimensional complex Hamiltonians."""

__version__ = "0.1.0"

from .exceptions import *  # noqa: E402,F401,F403
from .linalg import RawSpectrum, eig_general, gram, hessenberg, left_from_right, pair_left_right, schur  # noqa: E402
from .system import (  # noqa: E402
    DEFAULT_TOLERANCES,
    BiorthogonalSystem,
    StateVector,
    associated_state,
    biortho_inner,
    build_system,
    components,
    hermitian_split,
    nonorthogonality_check,
    petermann_factor,
    projector,
    projectors,
    reconstruct_hamiltonian,
    resolution_defect,
    state_from_coeffs,
)
from .probability import (  # noqa: E402
    bloch_coords,
    bloch_state,
    fs_line_element,
    overlap_distance,
    probabilities,
    transition_prob,
)
from .observables import (  # noqa: E402
    DensityMatrix,
    Observable,
    deformed_pauli,
    expectation_mixed,
    expectation_pure,
    is_biortho_hermitian,
    observable_from_ambient,
    observable_from_coeffs,
    same_class_2level,
    thermal_state,
    von_neumann_entropy,
)
from .dynamics import (  # noqa: E402
    adjoint_equation_residual,
    check_unitarity,
    decay_analysis,
    evolution_operator,
    evolve,
    geometric_identity_defect,
    norm_trajectory,
)
from .perturbation import displacement_operator, first_order, first_order_residual, richardson_validate  # noqa: E402
from .composite import (  # noqa: E402
    CompositeSystem,
    SpinSpace,
    coherent_spin_state,
    product_state,
    singlet,
    tensor_observable,
    tensor_systems,
)
from .pt import (  # noqa: E402
    MetricOperator,
    PhaseScanReport,
    c_operator,
    metric_expectation,
    metric_from_c,
    metric_from_eigs,
    parity_operator,
    phase_scan,
    pt_check,
    pt_eigenstate_check,
)
from .young import young_truncation  # noqa: E402
from .estimator import BiorthogonalEigensystem  # noqa: E402
