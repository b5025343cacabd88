#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hicluster/errors.hpp"
#include "hicluster/ground_truth.hpp"
#include "hicluster/objectives.hpp"

namespace hicluster {

/// Hierarchical stochastic block model. Class i (0-based) is leaf i of
/// `top_tree`, whose internal weights are the cross-class edge probabilities
/// before scaling by alpha.
struct HsbmParams {
    std::size_t k = 1;
    std::size_t n = 0;
    double alpha = 1.0;
    std::vector<double> f;  ///< class probabilities
    std::vector<double> p;  ///< within-class edge probabilities
    GeneratingTree top_tree;
    std::uint64_t seed = 0;

    /// Throws HsbmParamError naming the offending field.
    void validate() const;
};

class HsbmParamError : public InvalidArgument {
  public:
    HsbmParamError(std::string field, const std::string& what)
        : InvalidArgument("hsbm parameter '" + field + "': " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

struct HsbmSample {
    WeightedGraph graph;          ///< 0/1 weights, similarity mode
    std::vector<int> labels;      ///< hidden class of each vertex
    std::vector<std::size_t> counts;
};

/// Labels drawn independently from f (so class sizes are multinomial), then
/// every pair u < v becomes an edge with its model probability.
HsbmSample sample(const HsbmParams& params);

/// Same edge model with the labels held fixed.
HsbmSample sample_with_labels(const HsbmParams& params, std::span<const int> labels, std::uint64_t seed);

/// Labels with class sizes round(n f_i) (largest remainders) in contiguous blocks.
std::vector<int> expected_labels(const HsbmParams& params);

/// Edge probability for a vertex pair with classes a and b.
double edge_probability(const HsbmParams& params, int a, int b);

struct ExpectedGraph {
    WeightedGraph graph;
    /// top_tree with each class expanded to a balanced tree of weight alpha*p_i;
    /// classes without vertices are contracted away.
    GeneratingTree tree;
};

ExpectedGraph expected_graph(const HsbmParams& params, std::span<const int> labels);
inline ExpectedGraph expected_graph(const HsbmParams& params) {
    return expected_graph(params, expected_labels(params));
}

/// Top-k eigenspace of the adjacency matrix (largest |eigenvalue|) by
/// orthogonal iteration from a fixed start.
struct Projection {
    Eigen::MatrixXd basis;   ///< n x k, orthonormal columns
    Eigen::MatrixXd points;  ///< n x k, row v = basis^T A e_v
    Eigen::VectorXd ritz;    ///< eigenvalues of basis^T A basis
    std::size_t rank = 0;    ///< Ritz values above 1e-10 * max |ritz|
    bool rank_deficient = false;
    bool converged = false;
    std::size_t iterations = 0;
    double residual = 0.0;   ///< ||A Q - Q (Q^T A Q)||_F / ||A Q||_F
};

inline constexpr double kProjectionTolerance = 1e-8;

Projection spectral_project(const WeightedGraph& g, std::size_t k, std::uint64_t seed = 0x5eed,
                            std::size_t max_iterations = 5000);

/// Euclidean single linkage on the rows of `points`, stopped at k clusters
/// (the k-1 longest minimum-spanning-tree edges are cut; equal lengths are
/// ordered by a seeded shuffle). Clusters come sorted by smallest vertex.
std::vector<VertexSet> geometric_single_linkage(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed);

/// Merges clusters by maximum average cross weight and expands every cluster
/// to a balanced tree.
ClusterTree merge_clusters(const WeightedGraph& g, const std::vector<VertexSet>& clusters);

struct RepetitionStats {
    std::vector<std::size_t> cluster_sizes;
    double cost = 0.0;
};

struct RecoveryResult {
    ClusterTree tree;
    std::vector<VertexSet> clusters;  ///< bottom clusters of the chosen repetition
    std::size_t best_repetition = 0;
    std::vector<RepetitionStats> repetitions;
    std::size_t projection_rank = 0;
    bool rank_deficient = false;
};

/// ceil(2 k ln n), at least 1.
std::size_t default_repetitions(std::size_t k, std::size_t n);

/// repetitions == 0 means default_repetitions(k, n). The tree of minimum cost
/// wins; ties go to the earliest repetition.
RecoveryResult recover_tree(const WeightedGraph& g, std::size_t k, const CostFunction& cf,
                            std::size_t repetitions = 0, std::uint64_t seed = 0);

/// True iff `clusters` is exactly the partition induced by `labels`.
bool same_partition(const std::vector<VertexSet>& clusters, std::span<const int> labels);

/// Config text: "key = value" lines with keys k, n, alpha, f, p, top_tree and
/// optional seed. Lists are separated by commas or spaces (brackets ignored);
/// top_tree uses the weighted tree syntax.
HsbmParams parse_hsbm_config(std::string_view text);
std::string format_hsbm_config(const HsbmParams& params);

}  // namespace hicluster
