"""ODE-determined variable-exponent Lebesgue norms on step data."""

from .duality import (
    conjugate,
    duality_map,
    exact_norming_pairing,
    extended_norm,
    holder_check,
    norming_functional,
    norming_pairing,
    special_variation,
    truncation_ladder,
    truncation_projection,
)
from .errors import NonConvergenceError, ValidationError
from .function_model import Density, Exponent, Partition, StepFunction, refine_all, sample_to_step
from .nakano import ModularKind, equivalence_ratio, modular, nakano_norm
from .phi_solver import (
    NormCurve,
    SolveConfig,
    disjoint_estimates_check,
    norm,
    norm_general,
    phi_stabilized,
    phi_step_exact,
    stabilization_ladder,
    sup_bound_check,
)
from .sequence_space import (
    NonnegMatrix,
    VarExpSequence,
    boxplus,
    disjoint_matrix_sum_check,
    mixed_norm,
    nesting_inequality_check,
    oplus,
    seq_norm,
    transpose_contraction_check,
)
from .weighted_embedding import (
    WeightedSpec,
    build_embedding,
    embed_isometry_check,
    find_monotone_pieces,
    p0_eval,
    weight_isometry_check,
    weighted_norm,
)

__version__ = "0.1.0"
