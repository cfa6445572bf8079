"""Frame bounds and frame constructions in finite-dimensional Hilbert C*-modules."""

__version__ = "0.1.0"

from .algebra import (
    DEFAULT_STRICT_EPS,
    DEFAULT_TOL,
    AlgebraElement,
    AlgebraSpec,
    absolute_value,
    involution,
    is_nonzero,
    is_positive,
    is_strictly_positive,
    norm,
    positive_sqrt,
)
from .analysis import (
    AlgebraBounds,
    FrameReport,
    OperatorFamily,
    ScalarBounds,
    VectorFamily,
    Witness,
    check_end_frame,
    check_g_frame,
    check_generalized_end_frame,
    check_generalized_k_end_frame,
    check_k_end_frame,
    check_k_g_frame,
    check_star_frame_commutative,
    check_star_g_frame_commutative,
    check_star_k_frame_commutative,
    check_star_k_g_frame_commutative,
    check_star_sampled,
    check_vector_frame,
)
from .constructions import (
    ConstructionCertificate,
    direct_sum_lift,
    frame_from_injective,
    k2k1_frame,
    k_frame_from_frame,
    parseval_k_from_family,
    power_k_frame,
    surjective_demotion,
)
from .modules import (
    ModuleSpace,
    ModuleVector,
    a_valued_norm,
    direct_sum,
    embed,
    inner_product,
    module_action,
    project,
    vector_norm,
)
from .operators import (
    AdjointableOp,
    InjectivityCertificate,
    adjoint,
    apply,
    compose,
    frame_operator,
    identity_op,
    injectivity_certificate,
    is_psd_order,
    op_inner_product,
    op_norm,
    operator_sqrt,
    outer,
    rank_one,
    realize,
    scale,
    surjectivity_certificate,
    zero_op,
)
