"""Exact rational geometry of ReLU network decision regions.

Canonical polyhedral complexes, bent hyperplane arrangements, co-oriented
hyperplane arrangement combinatorics, threshold transversality, the
gradient-oriented 1-skeleton, and executable verifiers for the bounded
decision-region theorems.
"""

from .affine import AffineMap
from .arrangement import (
    CoorientedArrangement,
    SolutionSetArrangement,
    arrangement_rank,
    count_regions,
    derive_arrangement,
    enumerate_vertices,
    face_of_positive_region,
    is_generic,
    realizable_codes,
    vertices_adjacent,
)
from .complexes import (
    CanonicalComplex,
    Cell,
    activation_regions,
    bent_hyperplane_arrangement,
    build_complex,
    cell_bounded,
    complex_to_json,
    refine_by_threshold,
    skeleton,
)
from .harness import ExperimentConfig, TrialRecord, replay, run_experiment, sample_network
from .linalg import rank, rat, rat_str
from .lp import (
    LinearSystem,
    LpResult,
    lp_feasible,
    lp_optimize,
    recession_cone_is_trivial,
)
from .network import (
    ActivationPattern,
    NodeRef,
    ReluNetwork,
    activation_pattern_at,
    classify_layers,
    evaluate,
    masked_affine,
    network_from_json,
    network_to_json,
    node_map_value,
    pad_to_width,
    parameter_count,
)
from .svg import render_svg
from .topology import (
    DecisionTopology,
    MaxSubgraphCertificate,
    NonTransversalThresholdError,
    OrientedSkeleton,
    decision_topology,
    max_subgraph,
    oriented_skeleton,
    verify_johnson,
    verify_one_bounded,
)
from .transversality import (
    TransversalityReport,
    analyze_network,
    is_transversal_network,
    is_transversal_threshold,
    nontransversal_thresholds,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
