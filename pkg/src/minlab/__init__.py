"""Measurement-induced nonlocality and geometric discord for multipartite states."""

from .bloch import (
    BlochData,
    OperatorBasis,
    bloch_decompose,
    bloch_reconstruct,
    correlation_tensor,
    generators,
)
from .measures import (
    EqualityVerdict,
    GMatrix,
    IsometryRows,
    KMatrix,
    concurrence_pure_bipartite,
    discord_pure,
    discord_qubit,
    equality_verdict,
    g_matrix,
    isometry_rows,
    k_matrix,
    meyer_wallach,
    min_bound,
    min_general_nondegenerate,
    min_pure,
    min_qubit,
)
from .oracle import (
    OracleResult,
    SearchConfig,
    discord_direct,
    distance_sq,
    marginal_invariant,
    min_direct,
)
from .qcore import (
    DensityOperator,
    DimensionProfile,
    MeasurementBasis,
    PureState,
    apply_measurement,
    embed_operator,
    hermitian_eig,
    hs_inner,
    hs_norm_sq,
    kron,
    kron_all,
    partial_trace,
)
from .states import (
    FamilySpec,
    bell,
    family,
    ghz,
    ghz_1,
    ghz_minus,
    haar_pure,
    haar_unitary,
    local_unitary,
    random_mixed,
    split_rng,
    w3,
    w3_flipped,
)

__version__ = "0.1.0"
