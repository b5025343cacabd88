#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hicluster/graph.hpp"

namespace hicluster {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

/// A node is a leaf (carries a vertex label) or has exactly two children.
struct TreeNode {
    NodeId left = kNoNode;
    NodeId right = kNoNode;
    int label = -1;

    bool is_leaf() const noexcept { return left == kNoNode; }
};

/// Rooted binary tree whose leaves carry distinct vertex labels.
///
/// Immutable once constructed. Construction validates the structure and
/// precomputes parents, depths, leaf counts and the label-to-leaf map so
/// that lca() and leaves() are cheap.
class ClusterTree {
  public:
    ClusterTree() = default;
    ClusterTree(std::vector<TreeNode> nodes, NodeId root);

    static ClusterTree leaf(int label);

    std::size_t leaf_count() const noexcept { return label_count_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    NodeId root() const noexcept { return root_; }

    const TreeNode& node(NodeId id) const { return nodes_[id]; }
    std::span<const TreeNode> nodes() const noexcept { return nodes_; }
    NodeId parent(NodeId id) const { return parent_[id]; }
    int depth(NodeId id) const { return depth_[id]; }
    /// |V(N)|.
    std::size_t size(NodeId id) const { return size_[id]; }
    /// Smallest leaf label below id.
    int min_label(NodeId id) const { return min_label_[id]; }

    /// Leaf node carrying `label`, or kNoNode.
    NodeId leaf_node(int label) const;

    /// V(N): sorted labels of the leaves below id.
    VertexSet leaves(NodeId id) const;
    /// All leaf labels, sorted.
    VertexSet labels() const { return leaves(root_); }

    /// Internal nodes in preorder.
    std::vector<NodeId> internal_nodes() const;
    /// All nodes in postorder (children before parents).
    std::vector<NodeId> postorder() const;

    /// True iff the leaf labels are exactly {0, ..., n-1}.
    bool spans_vertices(std::size_t n) const;

    /// Lowest common ancestor of the leaves labelled u and v.
    NodeId lca(int u, int v) const;

    /// Copy with nodes renumbered in canonical preorder (root = 0, for every
    /// internal node the child holding the smaller minimum label comes first).
    ClusterTree canonical() const;

    /// Structural equality up to child order.
    bool same_shape(const ClusterTree& other) const;

  private:
    std::vector<TreeNode> nodes_;
    NodeId root_ = kNoNode;
    std::vector<NodeId> parent_;
    std::vector<int> depth_;
    std::vector<std::size_t> size_;
    std::vector<int> min_label_;
    std::vector<NodeId> leaf_of_;  // label -> node, indexed by label
    std::size_t label_count_ = 0;
};

/// Tree whose root has t1 and t2 as its two subtrees. Leaf labels must be disjoint.
ClusterTree union_tree(const ClusterTree& t1, const ClusterTree& t2);

/// Balanced binary tree over `labels` in the given order (recursive halving).
ClusterTree balanced_tree(std::span<const int> labels);

/// Caterpillar (((l0,l1),l2),...) over `labels` in the given order.
ClusterTree caterpillar_tree(std::span<const int> labels);

/// Incremental bottom-up construction.
class TreeBuilder {
  public:
    NodeId add_leaf(int label);
    NodeId join(NodeId left, NodeId right);
    /// Copies `sub` into the builder and returns the id of its root.
    NodeId graft(const ClusterTree& sub);
    ClusterTree build(NodeId root) &&;

  private:
    std::vector<TreeNode> nodes_;
};

/// Canonical text: leaf = decimal label, internal = "(L,R)" with L the child
/// holding the smaller minimum label. If `node_weights` is given (indexed by
/// node id) each internal node is followed by ":W".
std::string serialize_tree(const ClusterTree& t,
                           std::span<const double> node_weights = {});

/// Result of parsing tree text. `weights` is indexed by node id of `tree`.
struct ParsedTree {
    ClusterTree tree;
    std::vector<std::optional<double>> weights;
};

/// Inverse of serialize_tree. Accepts any child order and optional ":W" after
/// internal nodes. Throws ParseError with the byte offset of the problem.
ParsedTree parse_tree(std::string_view text);

/// Shortest decimal text that reads back as the same double.
std::string format_real(double x);

}  // namespace hicluster
