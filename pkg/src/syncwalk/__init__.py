"""Realize mixing Markov chains as random walks driven by IID random maps
with synchronizing support, and sample their stationary laws exactly."""

from .chain import (
    MIXING,
    PERIODIC,
    REDUCIBLE,
    StochasticMatrix,
    classify,
    power,
    rationalize,
    stationary,
    support,
)
from .coloring import (
    AdjacencyMatrix,
    HypothesisError,
    MappingTable,
    RoadColoring,
    SearchBudgetExceeded,
    apply,
    build_support_graph,
    check_assumption_A,
    compose,
    find_synchronizing_coloring,
    is_synchronizing,
    synchronizing_word,
)
from .entropy import (
    NotPUniformError,
    chain_entropy,
    entropy_family,
    entropy_gap_floor,
    entropy_report,
    family_min_n,
    is_p_uniform,
    law_entropy,
    phi,
    two_state_family,
)
from .law import (
    MappingLaw,
    NotMixingError,
    law_from_coloring,
    mix,
    rational_mapping_law,
    synchronizing_mapping_law,
    verify_mapping_law,
)
from .sampler import (
    CftpResult,
    CoalescenceTimeout,
    NotSynchronizingError,
    RngStream,
    WalkTrace,
    cftp_batch,
    cftp_sample,
    coalescence_stats,
    sample_report,
    simulate_forward,
    step,
    tv_distance,
)

__all__ = [
    "AdjacencyMatrix",
    "CftpResult",
    "CoalescenceTimeout",
    "HypothesisError",
    "MIXING",
    "MappingLaw",
    "MappingTable",
    "NotMixingError",
    "NotPUniformError",
    "NotSynchronizingError",
    "PERIODIC",
    "REDUCIBLE",
    "RngStream",
    "RoadColoring",
    "SearchBudgetExceeded",
    "StochasticMatrix",
    "WalkTrace",
    "apply",
    "build_support_graph",
    "cftp_batch",
    "cftp_sample",
    "chain_entropy",
    "check_assumption_A",
    "classify",
    "coalescence_stats",
    "compose",
    "entropy_family",
    "entropy_gap_floor",
    "entropy_report",
    "family_min_n",
    "find_synchronizing_coloring",
    "is_p_uniform",
    "is_synchronizing",
    "law_entropy",
    "law_from_coloring",
    "mix",
    "phi",
    "power",
    "rational_mapping_law",
    "rationalize",
    "sample_report",
    "simulate_forward",
    "stationary",
    "step",
    "support",
    "synchronizing_mapping_law",
    "synchronizing_word",
    "tv_distance",
    "two_state_family",
    "verify_mapping_law",
]

__version__ = "0.1.0"
