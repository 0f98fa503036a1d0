"""Programmable unambiguous discrimination of two unknown qudit states."""

__version__ = "0.1.0"

from .errors import ContractError, DegeneratePriorsError, DomainError
from .harness import (
    McEstimate,
    Tolerances,
    VerificationReport,
    empirical_mean_density,
    haar_state,
    mc_success,
    overlap_identity_check,
    verify_all,
)
from .jordan import (
    JordanPairSet,
    build_gh_bases,
    density_from_jordan,
    jordan_angles,
    overlap_matrix,
)
from .optics import (
    ClickStats,
    Interferometer,
    TwoModeLayer,
    beamsplitter,
    discriminator_network,
    prepare_state_network,
    reck_decompose,
    simulate_clicks,
    two_mode_unitary,
)
from .povm import (
    MeasurementTriple,
    Priors,
    RegimeResult,
    average_success,
    omega2_constraint,
    optimal_average,
    optimal_pure,
    optimal_subspace,
    pure_success,
    reciprocal_pair,
    subspace_povm,
    success_curve_x,
    total_povm,
)
from .spaces import (
    DimensionTable,
    SpaceSpec,
    dimension_table,
    expand_u3,
    flatten_index,
    mean_density_operators,
    symmetric_basis_2,
    symmetric_basis_3,
    symmetric_projector,
)
