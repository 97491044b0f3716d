"""Certify genuine multipartite entanglement from correlation-tensor norms."""
from .correlations import (
    correlation_tensor,
    cut_matrix,
    frobenius,
    full_tensor,
    ky_fan,
    matricize,
    purity_decomposition,
)
from .criteria import (
    BoundId,
    Verdict,
    VerdictKind,
    bound,
    certify_cut_entanglement_pure,
    certify_gme_pure_npartite,
    critical_visibility,
    detect_gme_4partite,
    m_k,
    theorem1_threshold,
    theorem4_check,
)
from .states import (
    DensityMatrix,
    PartyStructure,
    PureState,
    ghz,
    mix_with_white_noise,
    product_state,
    pure_to_density,
    random_biseparable_pure,
    w_state,
)
from .su_basis import generators

__version__ = "0.1.0"
