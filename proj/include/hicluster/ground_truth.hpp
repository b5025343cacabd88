#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hicluster/errors.hpp"
#include "hicluster/graph.hpp"
#include "hicluster/tree.hpp"

namespace hicluster {

/// A cluster tree with a weight W on every internal node, monotone along
/// root-to-leaf paths: nondecreasing toward the leaves in similarity mode,
/// nonincreasing in dissimilarity mode. Equivalent to an ultrametric.
struct GeneratingTree {
    ClusterTree tree;
    std::vector<double> node_weight;  ///< indexed by node id; leaf entries are ignored
    Mode mode = Mode::similarity;

    /// True iff W is strictly monotone along every root-to-leaf path.
    bool strict() const;

    /// Throws InvalidArgument if weights are missing, negative or not monotone.
    void validate() const;
};

/// Complete graph with w(u,v) = W(lca(u,v)).
WeightedGraph realize(const GeneratingTree& gt);

struct GeneratingVerdict {
    bool generating = false;
    /// Recovered W per node id (leaves hold 0). Only meaningful when generating.
    std::vector<double> node_weight;
    /// Offending node; for a monotonicity failure its parent is the other end.
    NodeId witness_node = kNoNode;
    /// Two weights that should have been equal (or ordered) but are not.
    double witness_first = 0.0;
    double witness_second = 0.0;
    std::string witness;

    explicit operator bool() const noexcept { return generating; }
};

/// Does t generate g? Cross weights at each node must agree exactly and the
/// per-node weights must be monotone in g's mode.
GeneratingVerdict is_generating(const ClusterTree& t, const WeightedGraph& g);

enum class TreeShape { random, balanced, caterpillar };

struct GeneratingTreeOptions {
    TreeShape shape = TreeShape::random;
    Mode mode = Mode::similarity;
    bool strict = true;
    /// Root weight is drawn from [1, root_max].
    int root_max = 4;
    /// Each child exceeds its parent by a draw from [strict ? 1 : 0, max_step].
    int max_step = 3;
    /// Shuffle the vertex labels before building the shape.
    bool shuffle_labels = true;
};

/// Random generating tree on n leaves with small integer weights (exactly
/// representable, so ties and equalities survive realize()). Dissimilarity
/// trees are the similarity draw mirrored as (top + 1) - W.
GeneratingTree random_generating_tree(std::size_t n, const GeneratingTreeOptions& options, std::uint64_t seed);

struct PerturbationSpec {
    double delta = 1.0;
    std::uint64_t seed = 0;
};

/// Every pair's weight times an independent uniform draw from [1, delta].
WeightedGraph perturb(const WeightedGraph& g, const PerturbationSpec& spec);

/// g violates the (translated) ultrametric triple condition at (x, y, z).
class NotUltrametricError : public InvalidArgument {
  public:
    NotUltrametricError(int x, int y, int z, const std::string& what)
        : InvalidArgument(what), x_(x), y_(y), z_(z) {}
    int x() const noexcept { return x_; }
    int y() const noexcept { return y_; }
    int z() const noexcept { return z_; }

  private:
    int x_, y_, z_;
};

/// First triple (x < y, then z ascending) violating the triple condition:
/// similarity needs w(x,y) >= min(w(x,z), w(y,z)), dissimilarity
/// w(x,y) <= max(w(x,z), w(y,z)). Returns false if there is none.
bool find_triple_violation(const WeightedGraph& g, int& x, int& y, int& z);

/// A generating tree for a ground-truth input, built by single linkage with
/// merge levels as W. Throws NotUltrametricError with a violating triple.
GeneratingTree minimal_representation(const WeightedGraph& g);

}  // namespace hicluster
