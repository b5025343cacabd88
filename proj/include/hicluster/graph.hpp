#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hicluster {

/// Whether edge weights express closeness (similarity) or distance (dissimilarity).
enum class Mode { similarity, dissimilarity };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Sorted list of distinct vertex ids.
using VertexSet = std::vector<int>;

/// Complete weighted graph stored as a dense symmetric matrix.
///
/// Zero weight means the edge is absent. The diagonal is always zero and
/// weights are nonnegative; both are enforced on every write.
class WeightedGraph {
  public:
    WeightedGraph() = default;
    explicit WeightedGraph(std::size_t n, Mode mode = Mode::similarity);

    std::size_t size() const noexcept { return n_; }
    Mode mode() const noexcept { return mode_; }
    void set_mode(Mode mode) noexcept { mode_ = mode; }

    double weight(int u, int v) const { return w_[index(u, v)]; }
    void set_weight(int u, int v, double w);

    /// Row u of the weight matrix.
    std::span<const double> row(int u) const {
        return {w_.data() + static_cast<std::size_t>(u) * n_, n_};
    }

    /// Number of pairs with positive weight.
    std::size_t edge_count() const;
    /// Sum of weights over unordered pairs.
    double total_weight() const;
    double max_weight() const;

    bool operator==(const WeightedGraph&) const = default;

  private:
    std::size_t index(int u, int v) const {
        return static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
    }

    std::size_t n_ = 0;
    Mode mode_ = Mode::similarity;
    std::vector<double> w_;
};

/// Bipartition of a vertex set into two nonempty sides.
struct Cut {
    VertexSet side_a;
    VertexSet side_b;
};

/// w(A,B): total weight between two disjoint vertex sets.
double cut_weight(const WeightedGraph& g, std::span<const int> a, std::span<const int> b);

/// w(A): total weight over unordered pairs inside a.
double inner_weight(const WeightedGraph& g, std::span<const int> a);

/// w(A,B) / (|A||B|). Sparsity for similarity graphs, density for dissimilarity ones.
double cut_ratio(const WeightedGraph& g, const Cut& cut);

/// Subgraph induced by s, with `to_parent[i]` giving the parent id of new vertex i.
struct InducedSubgraph {
    WeightedGraph graph;
    std::vector<int> to_parent;
};

InducedSubgraph induced_subgraph(const WeightedGraph& g, std::span<const int> s);

/// {0, ..., n-1}.
VertexSet all_vertices(std::size_t n);

/// Complement of a within {0, ..., n-1}. a must be sorted.
VertexSet complement(std::span<const int> a, std::size_t n);

}  // namespace hicluster
