"""Combinatorial solver toolkit for MaxQP: maximize x^T A x over x in {-1,1}^n."""

from .errors import CapacityError, InternalError, MaxQPError, ParseError, ValidationError
from .graph import (
    Assignment,
    InstanceStats,
    WeightedGraph,
    combine_disjoint,
    evaluate,
    evaluate_partial,
    extend_from_induced,
    induced_subgraph,
    load_graph,
    normalize_nonneg,
    solution,
    stats,
)
from .matching import Matching, greedy_sorted_matching, maximal_matching, maximum_matching
from .oracle import (
    GeneratorSpec,
    SplitMix64,
    brute_force,
    brute_force_maxcut,
    generate,
    subdivide_for_maxcut,
)
from .packing import (
    ApproxResult,
    EasyPacking,
    check_easy_packing,
    easypack,
    edge_is_good,
    matching_to_solution,
    packing_to_solution,
    solve_bounded_degree,
    solve_degenerate,
    solve_dense,
    star_packing,
    triangle_is_good,
)
from .schemes import (
    LayerStructure,
    VertexPartition,
    bfs_layers,
    heuristic_partition,
    load_partition,
    solve_baker,
    solve_partition_scheme,
)
from .treewidth import (
    NiceTreeDecomposition,
    TreeDecomposition,
    build_decomposition,
    solve_exact,
    solve_exact_auto,
    solve_treewidth,
    to_nice,
    validate_decomposition,
    validate_nice,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
