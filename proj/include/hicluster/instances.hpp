#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hicluster/divisive.hpp"
#include "hicluster/graph.hpp"
#include "hicluster/linkage.hpp"
#include "hicluster/tree.hpp"

namespace hicluster {

/// Unit path 0-1-...-(n-1), similarity.
WeightedGraph make_path(std::size_t n);

/// Spine u_1..u_k (vertices 0..k-1) with k paths of k vertices hanging off
/// each spine vertex: n = k^3 + k, unit weights, similarity. Path j of spine
/// vertex i occupies k + (i k + j) k + [0, k); its last vertex is attached to i.
WeightedGraph make_spine(std::size_t k);

/// First vertex of path j hanging off spine vertex i in make_spine(k).
inline int spine_path_start(std::size_t k, std::size_t i, std::size_t j) {
    return static_cast<int>(k + (i * k + j) * k);
}

/// Star-like dissimilarity graph: all weights 1 except w(v_1, u) = W, with
/// v_1 = 0, v_i = i - 1 and u = n - 1. Requires n >= 3 and W >= n^3.
WeightedGraph make_star(std::size_t n, double w);

struct RandomGraphOptions {
    Mode mode = Mode::similarity;
    /// 0: real weights in (0, 1]; otherwise integers in [1, max_weight].
    int max_weight = 0;
    /// Probability that a pair gets a nonzero weight.
    double density = 1.0;
};

/// Arbitrary (not ground-truth) random graph, pairs drawn in row-major order.
WeightedGraph random_graph(std::size_t n, const RandomGraphOptions& options, std::uint64_t seed);

/// Recursive-halving tree on the path.
ClusterTree path_reference_tree(std::size_t n);

/// Binarized three-level tree: balanced over the groups V_i, each V_i
/// balanced over {u_i} and its paths, each path balanced.
ClusterTree spine_reference_tree(std::size_t k);

/// Root splits {u} from the rest; the rest is balanced.
ClusterTree star_reference_tree(std::size_t n);

/// Balanced fold over whole subtrees (labels must be disjoint).
ClusterTree balanced_join(std::span<const ClusterTree> parts);

/// Complete linkage (similarity, merge max) building the caterpillar
/// ((0,1),2),... on the path.
TieScript path_complete_linkage_script(std::size_t n);

/// Average linkage on the spine, always preferring a tied pair inside one
/// group (the spine, or a single hanging path).
TieScript spine_average_linkage_script(std::size_t k);

/// Single linkage (dissimilarity, merge min): v1 with v2, then u with them.
TieScript star_single_linkage_script(std::size_t n);

/// Bisection 2-center with centers v2, v3 and first side {v1, v2, u}.
BisectionScript star_bisection_script(std::size_t n);

/// Tie scripts as text: one "a b" pair per line; bisection steps as
/// "u v : a1 a2 ...". '#' starts a comment.
std::string format_tie_script(const TieScript& script);
TieScript parse_tie_script(std::string_view text);
std::string format_bisection_script(const BisectionScript& script);
BisectionScript parse_bisection_script(std::string_view text);

enum class Family { path, spine, star };
Family parse_family(std::string_view text);
std::string_view to_string(Family family);

struct RatioRow {
    std::string family;
    std::size_t size = 0;  ///< family parameter (n, or k for the spine)
    std::size_t n = 0;     ///< vertex count
    std::uint64_t seed = 0;
    std::string algorithm;
    double objective = 0.0;  ///< Dasgupta cost (path, spine) or value (star)
    double reference = 0.0;
    double ratio = 0.0;
    double wall_ms = 0.0;
};

/// Reference bound per family: n log2 n (path), 3 n^(4/3) (spine), n W (star),
/// or exact OPT when `oracle` is set.
///
/// Algorithms: single, complete, average (lowest-index ties), their
/// "-adversarial" variants where a script exists, average-random (seeded
/// ties), bisect2c, bisect2c-adversarial, sparsest-exact, densest-ls.
std::vector<RatioRow> ratio_experiment(Family family, std::string_view algorithm, std::span<const std::size_t> sizes,
                                       std::span<const std::uint64_t> seeds, bool oracle = false);

}  // namespace hicluster
