"""Hierarchical clustering objectives, exact oracles and clustering algorithms."""

from ._hicluster import (
    CostFunction,
    Error,
    Graph,
    InvalidArgument,
    InvariantError,
    ParseError,
    ResourceGuardError,
    Tree,
    admissible,
    bisection_two_center,
    densest_cut_tree,
    evaluate,
    evaluate_via_lca,
    exact_opt,
    fast_pivot,
    hsbm_sample,
    is_generating,
    linkage,
    make_path,
    make_spine,
    make_star,
    minimal_representation,
    perturb,
    random_graph,
    random_ground_truth,
    recover_tree,
    recursive_cut_tree,
    robust_pivot,
)

__version__ = "0.1.0"
