"""Exact solving and kernelization for the k-postman problem on multigraphs."""

from .cpp import (
    CppSolution,
    Multiplicities,
    euler_tour,
    min_weight_join,
    odd_vertices,
    solve_cpp,
)
from .cycles import (
    Cycle,
    CyclePacking,
    exact_max_cycle_packing,
    greedy_cycle_packing,
    shortest_cycle,
)
from .digraph import (
    Arc,
    DiGraph,
    EquivalenceReport,
    GadgetResult,
    build_balanced_extension,
    max_arc_disjoint_cycles,
    parse_directed_instance,
    serialize_directed_instance,
    verify_packing_equivalence,
)
from .graph import (
    DegreeClasses,
    Edge,
    GraphError,
    Instance,
    MultiGraph,
    ParseError,
    Solution,
    VerificationError,
    Walk,
    bypass,
    degree_classes,
    is_connected,
    parse_instance,
    parse_solution,
    serialize_instance,
    serialize_solution,
    verify_solution,
)
from .kernel import (
    Chain,
    ExpansionMap,
    KernelConstants,
    KernelOutcome,
    KernelReport,
    PathMultigraph,
    Reduced,
    Solved,
    apply_reduction_rule,
    build_path_multigraph,
    find_chains,
    kernelize,
    lift_solution,
    packing_shortcut,
    parallel_edge_shortcut,
    pendant_shortcut,
)
from .solve import (
    KcppResult,
    RestrictedDuplication,
    oracle_kcpp,
    solve_kcpp,
    solve_kcpp_exact,
)
from .walks import split_into_k_walks

__all__ = [
    "Arc",
    "Chain",
    "CppSolution",
    "Cycle",
    "CyclePacking",
    "DegreeClasses",
    "DiGraph",
    "Edge",
    "EquivalenceReport",
    "ExpansionMap",
    "GadgetResult",
    "GraphError",
    "Instance",
    "KcppResult",
    "KernelConstants",
    "KernelOutcome",
    "KernelReport",
    "MultiGraph",
    "Multiplicities",
    "ParseError",
    "PathMultigraph",
    "Reduced",
    "RestrictedDuplication",
    "Solution",
    "Solved",
    "VerificationError",
    "Walk",
    "apply_reduction_rule",
    "build_balanced_extension",
    "build_path_multigraph",
    "bypass",
    "degree_classes",
    "euler_tour",
    "exact_max_cycle_packing",
    "find_chains",
    "greedy_cycle_packing",
    "is_connected",
    "kernelize",
    "lift_solution",
    "max_arc_disjoint_cycles",
    "min_weight_join",
    "odd_vertices",
    "oracle_kcpp",
    "packing_shortcut",
    "parallel_edge_shortcut",
    "parse_directed_instance",
    "parse_instance",
    "parse_solution",
    "pendant_shortcut",
    "serialize_directed_instance",
    "serialize_instance",
    "serialize_solution",
    "shortest_cycle",
    "solve_cpp",
    "solve_kcpp",
    "solve_kcpp_exact",
    "split_into_k_walks",
    "verify_packing_equivalence",
    "verify_solution",
]
