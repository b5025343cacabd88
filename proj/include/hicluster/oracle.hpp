#pragma once

#include <cstddef>
#include <cstdint>

#include "hicluster/graph.hpp"
#include "hicluster/objectives.hpp"
#include "hicluster/tree.hpp"

namespace hicluster {

/// Size limits for the exponential-time routines. Defaults are desk-scale;
/// callers may raise a limit up to the matching hard cap.
struct OracleLimits {
    static constexpr std::size_t kExactOptDefault = 16;
    static constexpr std::size_t kExactOptHard = 20;
    static constexpr std::size_t kEnumerateDefault = 10;
    static constexpr std::size_t kEnumerateHard = 12;
    static constexpr std::size_t kBruteCutDefault = 24;
    static constexpr std::size_t kBruteCutHard = 28;
};

struct OptResult {
    double value = 0.0;
    ClusterTree tree;
};

/// Optimal objective over all binary trees by DP over vertex subsets (3^n).
///
/// OPT(S) = best over splits (A, S\A) of w(A,S\A) g(|A|,|S\A|) + OPT(A) + OPT(S\A).
/// Ties go to the lexicographically smallest A containing min(S).
OptResult exact_opt(const CostFunction& cf, const WeightedGraph& g, Direction direction,
                    std::size_t max_n = OracleLimits::kExactOptDefault);

struct TreeCostSpectrum {
    double min = 0.0;
    double max = 0.0;
    ClusterTree min_tree;
    ClusterTree max_tree;
    /// Number of distinct tree costs (exact comparison). When `distinct_exact`
    /// is false the set grew too large to track and the count is only a lower bound.
    std::uint64_t distinct_count = 1;
    bool distinct_exact = true;
    std::uint64_t tree_count = 1;
};

/// Min, max and distinct-value count of the objective over every binary tree.
TreeCostSpectrum enumerate_tree_costs(const CostFunction& cf, const WeightedGraph& g,
                                      std::size_t max_n = OracleLimits::kEnumerateDefault);

/// Objective statistics split by whether the tree is generating for g (in g's mode).
struct GeneratingSpectrum {
    std::uint64_t generating_count = 0;
    std::uint64_t other_count = 0;
    double generating_min = 0.0, generating_max = 0.0;  ///< valid iff generating_count > 0
    double other_min = 0.0, other_max = 0.0;            ///< valid iff other_count > 0
};

/// Exhaustive over all binary trees. A tree is generating iff at every
/// internal node the cross weights are all equal and these node weights are
/// monotone along root-to-leaf paths; both are checked node by node.
GeneratingSpectrum generating_spectrum(const CostFunction& cf, const WeightedGraph& g,
                                       std::size_t max_n = OracleLimits::kEnumerateDefault);

struct CutResult {
    Cut cut;
    double ratio = 0.0;  ///< w(A,B)/(|A||B|)
};

/// Exact minimum-sparsity cut over all 2^(n-1) - 1 proper cuts. side_a contains
/// vertex 0; ties go to the lexicographically smallest side_a.
CutResult brute_sparsest_cut(const WeightedGraph& g,
                             std::size_t max_n = OracleLimits::kBruteCutDefault);

/// Exact maximum-density cut; same conventions as brute_sparsest_cut.
CutResult brute_densest_cut(const WeightedGraph& g,
                            std::size_t max_n = OracleLimits::kBruteCutDefault);

}  // namespace hicluster
