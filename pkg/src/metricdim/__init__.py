"""Exact metric-dimension toolkit for graphs with few branches.

Decomposes a graph into maximal degree-two chains (branches), analyzes the
distance geometry of landmark placements along them, and computes the metric
dimension exactly with a brute-force oracle and two structure-aware engines.
"""

from .decomposition import (
    CYCLE,
    JUNCTION,
    PATH,
    Branch,
    BranchDecomposition,
    ParameterReport,
    QuotientGraph,
    SizeGuardError,
    TwoCoreResult,
    check_parameter_bounds,
    compute_branches,
    max_leaf_exact,
    quotient_graph,
    two_core,
)
from .geometry import (
    NONDECREASING,
    NONINCREASING,
    DiagonalSegment,
    GeometryContext,
    IndistinctSet,
    MonotonePiece,
    ParametricFamily,
    ParametricSegment,
    ParityError,
    RotatedSegment,
    Stem,
    combinatorial_structure,
    compute_stems,
    indistinct_set,
    monotone_partition,
    parametric_indistinct,
    rotate,
    segments_intersect,
    structures_equal,
    to_rotated,
    unrotate,
)
from .graphs import (
    UNREACHABLE,
    DisconnectedGraphError,
    DistanceRow,
    Graph,
    GraphParseError,
    bfs_distances,
    bfs_row,
    connected_components,
    distance_matrix,
    format_edge_list,
    generate,
    graph_from_json,
    graph_from_json_dict,
    graph_to_json,
    graph_to_json_dict,
    is_connected,
    parse_edge_list,
)
from .oracle import (
    SearchBudgetError,
    canonical_locating_set,
    is_locating_set,
    metric_dimension_bruteforce,
)
from .solver import (
    FAITHFUL,
    PRAGMATIC,
    Budget,
    BudgetExceededError,
    ChoiceProfile,
    FeasibilitySystem,
    InconsistentProfileError,
    SolveResult,
    build_feasibility,
    enumerate_profiles,
    integer_feasibility,
    solve_fpt,
    solve_pragmatic,
    symbolic_empty_intersection,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
