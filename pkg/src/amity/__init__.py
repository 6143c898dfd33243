"""Friendly partitions of digraphs: exhaustive oracles, separation
procedures, cycle packing, randomized separation, and the supporting CLI.

A friendly partition splits the vertices into two blocks so that every
vertex keeps at least one out-neighbor (more generally r) on its own side.
The library enumerates them, decides which vertex sets they can separate,
and implements the structural and probabilistic machinery built on them.
"""

from .digraph import CycleSet, Digraph, Partition, min_out_degree, verify_cycle_set
from .cycles import (
    ContractionTrace,
    compress,
    decompress_partition,
    find_disjoint_cycles,
    find_intersecting_pair_plus_disjoint,
    find_two_intersecting_cycles,
    is_dominated,
)
from .oracle import (
    CapExceeded,
    SeparationReport,
    can_separate,
    enumerate_friendly,
    extend_friendly_sets,
    is_friendly,
    separation_report,
)
from .engine import (
    ReductionPlan,
    SeparationCertificate,
    attach_pendants,
    attach_separator_cycle,
    find_k_separable_vertices,
    find_separable_vertex,
    reduce_to_strongly_connected,
    scan_for_counterexamples,
    separate_pair_via_deletion,
    separate_via_reduction,
)
from .resample import (
    ResampleConfig,
    ResampleExhausted,
    TrialsExhausted,
    chernoff_r_separate,
    compute_dr,
    expected_y_fraction,
    extract_small_subdigraph,
    lll_separate,
)
from .transitive import (
    MatchingError,
    PreconditionError,
    check_class_structure,
    hall_matching_contract,
    prime_separability,
    quotient,
    rotation_automorphisms,
    singleton_walk,
)
from .extremal import fully_dominated_cubic
from .io import (
    GraphDocument,
    Report,
    generate,
    parse_dot,
    parse_edge_list,
    parse_kindspec,
    parse_partition,
    resolve_graph_arg,
    serialize_edge_list,
    serialize_partition,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "ContractionTrace",
    "CycleSet",
    "Digraph",
    "GraphDocument",
    "MatchingError",
    "Partition",
    "PreconditionError",
    "ReductionPlan",
    "Report",
    "ResampleConfig",
    "ResampleExhausted",
    "SeparationCertificate",
    "SeparationReport",
    "TrialsExhausted",
    "attach_pendants",
    "attach_separator_cycle",
    "can_separate",
    "chernoff_r_separate",
    "check_class_structure",
    "compress",
    "compute_dr",
    "decompress_partition",
    "enumerate_friendly",
    "expected_y_fraction",
    "extend_friendly_sets",
    "extract_small_subdigraph",
    "find_disjoint_cycles",
    "find_intersecting_pair_plus_disjoint",
    "find_k_separable_vertices",
    "find_separable_vertex",
    "find_two_intersecting_cycles",
    "fully_dominated_cubic",
    "generate",
    "hall_matching_contract",
    "is_dominated",
    "is_friendly",
    "lll_separate",
    "min_out_degree",
    "parse_dot",
    "parse_edge_list",
    "parse_kindspec",
    "parse_partition",
    "prime_separability",
    "quotient",
    "reduce_to_strongly_connected",
    "resolve_graph_arg",
    "rotation_automorphisms",
    "scan_for_counterexamples",
    "separate_pair_via_deletion",
    "separate_via_reduction",
    "separation_report",
    "serialize_edge_list",
    "serialize_partition",
    "singleton_walk",
    "verify_cycle_set",
]
