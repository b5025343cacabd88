#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hicluster/graph.hpp"
#include "hicluster/oracle.hpp"
#include "hicluster/tree.hpp"

namespace hicluster {

enum class CutFinderKind { exact_brute, ground_truth_fast, local_search, plugin };

struct CutFinderStats {
    std::size_t cuts = 0;
    /// Local search moves summed over all calls, and the largest single run.
    std::size_t moves = 0;
    std::size_t max_moves = 0;
    /// Every local search run stayed within its iteration bound.
    bool iteration_bound_ok = true;
};

/// Cut oracle used by recursive_cut_tree. Sparsest cuts for similarity
/// objectives, densest cuts for dissimilarity ones.
struct CutFinder {
    CutFinderKind kind = CutFinderKind::exact_brute;
    double epsilon = 0.1;         ///< local_search only
    std::string command;          ///< plugin only: shell command, graph on stdin
    std::size_t max_n = OracleLimits::kBruteCutDefault;  ///< exact_brute guard
    CutFinderStats stats;

    /// One cut of g (size >= 2) in g's own vertex ids.
    Cut find(const WeightedGraph& g, Mode objective);
};

/// Splits with the finder's cut, recurses on both sides, joins the results.
/// Work is kept on an explicit stack, so caterpillar outputs do not recurse.
ClusterTree recursive_cut_tree(const WeightedGraph& g, CutFinder& finder, Mode objective);
inline ClusterTree recursive_cut_tree(const WeightedGraph& g, CutFinder& finder) {
    return recursive_cut_tree(g, finder, g.mode());
}

/// O(n) sparsest cut on a similarity ground-truth input: u = 0 and
/// A = {0} plus every x with w(0,x) > min_v w(0,v).
Cut ground_truth_sparsest_cut(const WeightedGraph& g);

/// Dissimilarity counterpart: A = {0} plus every x with w(0,x) < max_v w(0,v).
Cut ground_truth_densest_cut(const WeightedGraph& g);

struct LocalSearchStats {
    std::size_t n = 0;
    std::size_t moves = 0;
    std::size_t iteration_bound = 0;  ///< ceil(log n / log(1 + eps/n)) + 1
    double initial_density = 0.0;
    double final_density = 0.0;
};

struct LocalSearchResult {
    Cut cut;
    LocalSearchStats stats;
};

/// Local search for an (eps/n)-locally-densest cut. Starts from A = {v} where
/// (u,v), u < v, is the lexicographically first maximum-weight edge; each
/// step applies the single-vertex move giving the largest density, as long
/// as it beats the current density by a factor above 1 + eps/n.
LocalSearchResult local_search_densest_cut(const WeightedGraph& g, double epsilon);

/// No single-vertex move improves the density by more than a factor (1 + eps/n).
bool is_locally_densest(const WeightedGraph& g, const Cut& cut, double epsilon);

/// Per-split record of recursive_densest_cut_tree, in parent vertex ids.
struct DensestSplitRecord {
    VertexSet vertices;
    Cut cut;
    double w_ab = 0.0, w_a = 0.0, w_b = 0.0;
    /// (|A|+|B|) w(A,B)  and  2(1-eps)(|B| w(A) + |A| w(B)).
    double lhs = 0.0, rhs = 0.0;
    bool lemma_ok = true;
    LocalSearchStats search;
};

struct DensestTreeResult {
    ClusterTree tree;
    std::vector<DensestSplitRecord> splits;
};

/// Recursive locally-densest cuts on a dissimilarity graph. Subproblems with
/// no positive edge are split as {min vertex} | rest.
DensestTreeResult recursive_densest_cut_tree(const WeightedGraph& g, double epsilon);

/// One scripted split for bisection_two_center: the center pair (any order,
/// `u` gets side A) and the full side A, in the subproblem's parent ids.
struct BisectionStep {
    int u = 0;
    int v = 0;
    VertexSet side_a;
};
using BisectionScript = std::vector<BisectionStep>;

/// Bisection 2-center. Similarity: centers maximize min_x max(w(x,u), w(x,v));
/// dissimilarity: minimize max_x min(w(x,u), w(x,v)); x ranges over non-centers.
/// Ties: first center pair in lexicographic order; a point tied between the
/// centers joins u. Script steps replace the choice at the first splits
/// (in processing order) and are checked to be optimal and consistent.
ClusterTree bisection_two_center(const WeightedGraph& g, Mode mode, const BisectionScript& script = {});

struct PivotOptions {
    std::uint64_t seed = 0;
    /// Weights within `tolerance` of a bucket's largest weight share the bucket.
    double tolerance = 0.0;
};

/// Random pivot p, buckets of equal w(p, .) in decreasing weight order,
/// recursion per bucket, folded as (((p, T1), T2), ...).
ClusterTree fast_pivot(const WeightedGraph& g, const PivotOptions& options = {});

/// Region-growing pivot for perturbed ground-truth inputs, with p the
/// smallest vertex of each subproblem and heaviest-crossing-edge ties broken
/// lexicographically. delta is validated (>= 1) but does not steer the run.
ClusterTree robust_pivot(const WeightedGraph& g, double delta);

/// Generic top-down driver: `split` returns a partition of the subproblem
/// (local ids) into at least two groups; the group trees are folded left to
/// right with union_tree.
using Splitter = std::function<std::vector<VertexSet>(const InducedSubgraph&)>;
ClusterTree divide(const WeightedGraph& g, const Splitter& split);

}  // namespace hicluster
