"""Secrecy rate regions and exact small-blocklength coding experiments for
quantum wiretap channels with unreliable entanglement assistance."""

__version__ = "0.1.0"

from .channels import (
    ChoiMatrix,
    DegradingReport,
    KrausSet,
    WiretapChannel,
    apply,
    apply_pure,
    degrading_distance,
    eve_trivial,
    from_choi,
    make_channel,
    marginal,
    tensor_power,
    to_choi,
    validate_cptp,
)
from .entropy import (
    EntropyReport,
    binary_entropy,
    conditional_entropy,
    conditional_mutual_information,
    holevo_chi,
    mutual_information,
    von_neumann,
    von_neumann_report,
)
from .errors import (
    CapacityError,
    ParameterError,
    QWiretapError,
    RegisterError,
    ShapeError,
    StructureError,
    ValidityError,
)
from .labeled import (
    DENSE_BUDGET,
    LabeledOperator,
    PureState,
    Register,
    eig_hermitian,
    partial_trace,
    purify,
    schmidt_decompose,
    tensor,
    tensor_pure,
    trace_distance,
)
from .regions import (
    CodingConfig,
    RatePoint,
    RegionSample,
    baseline,
    build_omega,
    classical_signaling_config,
    dense_coding_config,
    optimize_region,
    random_config,
    rate_pair_no_interception,
    rate_pair_nonsecure,
    rate_pair_secure,
    regularized_points,
)
from .spcsim import (
    Codebook,
    CodeEvaluation,
    HWParams,
    block_unitary,
    encode,
    evaluate_code,
    generate_codebook,
    heisenberg_weyl,
    pgm,
    sample_gamma,
    schmidt_blocks,
)
from .typicality import (
    CoveringStats,
    TypeClass,
    TypicalProjector,
    conditional_typical_projector,
    covering_experiment,
    typical_projector,
    typical_set,
    verify_covering_properties,
    verify_projector_properties,
)
