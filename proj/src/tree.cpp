#include "hicluster/tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "hicluster/errors.hpp"

namespace hicluster {

ClusterTree::ClusterTree(std::vector<TreeNode> nodes, NodeId root)
    : nodes_(std::move(nodes)), root_(root) {
    const auto count = static_cast<NodeId>(nodes_.size());
    if (count == 0) {
        root_ = kNoNode;
        return;
    }
    if (root_ < 0 || root_ >= count) throw InvalidArgument("tree root out of range");

    parent_.assign(nodes_.size(), kNoNode);
    depth_.assign(nodes_.size(), 0);
    size_.assign(nodes_.size(), 0);
    min_label_.assign(nodes_.size(), -1);
    std::vector<char> seen(nodes_.size(), 0);

    // Preorder walk: validates reachability, binary-ness and acyclicity.
    std::vector<NodeId> order;
    order.reserve(nodes_.size());
    std::vector<NodeId> stack{root_};
    seen[root_] = 1;
    int max_label = -1;
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        order.push_back(id);
        const TreeNode& nd = nodes_[id];
        if (nd.is_leaf()) {
            if (nd.right != kNoNode) throw InvalidArgument("tree node has a single child");
            if (nd.label < 0) throw InvalidArgument("leaf without a vertex label");
            max_label = std::max(max_label, nd.label);
            continue;
        }
        for (NodeId child : {nd.left, nd.right}) {
            if (child < 0 || child >= count) throw InvalidArgument("tree child out of range");
            if (seen[child]) throw InvalidArgument("tree contains a cycle or shared subtree");
            seen[child] = 1;
            parent_[child] = id;
            depth_[child] = depth_[id] + 1;
            stack.push_back(child);
        }
    }
    if (order.size() != nodes_.size()) throw InvalidArgument("tree has unreachable nodes");

    leaf_of_.assign(static_cast<std::size_t>(max_label) + 1, kNoNode);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const TreeNode& nd = nodes_[*it];
        if (nd.is_leaf()) {
            if (leaf_of_[nd.label] != kNoNode) {
                throw InvalidArgument("leaf label " + std::to_string(nd.label) +
                                      " appears more than once");
            }
            leaf_of_[nd.label] = *it;
            size_[*it] = 1;
            min_label_[*it] = nd.label;
            ++label_count_;
        } else {
            size_[*it] = size_[nd.left] + size_[nd.right];
            min_label_[*it] = std::min(min_label_[nd.left], min_label_[nd.right]);
        }
    }
}

ClusterTree ClusterTree::leaf(int label) {
    return ClusterTree({TreeNode{kNoNode, kNoNode, label}}, 0);
}

NodeId ClusterTree::leaf_node(int label) const {
    if (label < 0 || static_cast<std::size_t>(label) >= leaf_of_.size()) return kNoNode;
    return leaf_of_[label];
}

VertexSet ClusterTree::leaves(NodeId id) const {
    VertexSet out;
    out.reserve(size_[id]);
    std::vector<NodeId> stack{id};
    while (!stack.empty()) {
        const NodeId cur = stack.back();
        stack.pop_back();
        const TreeNode& nd = nodes_[cur];
        if (nd.is_leaf()) {
            out.push_back(nd.label);
        } else {
            stack.push_back(nd.left);
            stack.push_back(nd.right);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> ClusterTree::internal_nodes() const {
    std::vector<NodeId> out;
    if (empty()) return out;
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        const NodeId cur = stack.back();
        stack.pop_back();
        const TreeNode& nd = nodes_[cur];
        if (nd.is_leaf()) continue;
        out.push_back(cur);
        stack.push_back(nd.right);
        stack.push_back(nd.left);
    }
    return out;
}

std::vector<NodeId> ClusterTree::postorder() const {
    std::vector<NodeId> out;
    if (empty()) return out;
    out.reserve(nodes_.size());
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        const NodeId cur = stack.back();
        stack.pop_back();
        out.push_back(cur);
        const TreeNode& nd = nodes_[cur];
        if (!nd.is_leaf()) {
            stack.push_back(nd.left);
            stack.push_back(nd.right);
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

bool ClusterTree::spans_vertices(std::size_t n) const {
    if (label_count_ != n || leaf_of_.size() != n) return false;
    return std::none_of(leaf_of_.begin(), leaf_of_.end(), [](NodeId id) { return id == kNoNode; });
}

NodeId ClusterTree::lca(int u, int v) const {
    if (u == v) throw InvalidArgument("lca: u and v must differ");
    NodeId a = leaf_node(u);
    NodeId b = leaf_node(v);
    if (a == kNoNode || b == kNoNode) throw InvalidArgument("lca: label is not a leaf of the tree");
    while (depth_[a] > depth_[b]) a = parent_[a];
    while (depth_[b] > depth_[a]) b = parent_[b];
    while (a != b) {
        a = parent_[a];
        b = parent_[b];
    }
    return a;
}

ClusterTree ClusterTree::canonical() const {
    if (empty()) return {};
    std::vector<TreeNode> out;
    out.reserve(nodes_.size());
    // (source node, slot in out to patch with the new id, which side)
    struct Item {
        NodeId src;
        NodeId parent;
        bool is_left;
    };
    std::vector<Item> stack{{root_, kNoNode, false}};
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const auto id = static_cast<NodeId>(out.size());
        const TreeNode& nd = nodes_[it.src];
        out.push_back(TreeNode{kNoNode, kNoNode, nd.is_leaf() ? nd.label : -1});
        if (it.parent != kNoNode) (it.is_left ? out[it.parent].left : out[it.parent].right) = id;
        if (!nd.is_leaf()) {
            NodeId first = nd.left;
            NodeId second = nd.right;
            if (min_label_[second] < min_label_[first]) std::swap(first, second);
            stack.push_back({second, id, false});
            stack.push_back({first, id, true});
        }
    }
    return ClusterTree(std::move(out), 0);
}

bool ClusterTree::same_shape(const ClusterTree& other) const {
    return serialize_tree(*this) == serialize_tree(other);
}

NodeId TreeBuilder::add_leaf(int label) {
    nodes_.push_back(TreeNode{kNoNode, kNoNode, label});
    return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TreeBuilder::join(NodeId left, NodeId right) {
    nodes_.push_back(TreeNode{left, right, -1});
    return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TreeBuilder::graft(const ClusterTree& sub) {
    const auto offset = static_cast<NodeId>(nodes_.size());
    for (const TreeNode& nd : sub.nodes()) {
        nodes_.push_back(nd.is_leaf() ? nd
                                      : TreeNode{nd.left + offset, nd.right + offset, -1});
    }
    return sub.root() + offset;
}

ClusterTree TreeBuilder::build(NodeId root) && {
    return ClusterTree(std::move(nodes_), root);
}

ClusterTree union_tree(const ClusterTree& t1, const ClusterTree& t2) {
    if (t1.empty() || t2.empty()) throw InvalidArgument("union_tree: empty tree");
    const VertexSet a = t1.labels();
    const VertexSet b = t2.labels();
    std::vector<int> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (!common.empty()) {
        throw InvalidArgument("union_tree: leaf label " + std::to_string(common.front()) +
                              " appears in both trees");
    }
    TreeBuilder builder;
    const NodeId left = builder.graft(t1);
    const NodeId right = builder.graft(t2);
    return std::move(builder).build(builder.join(left, right));
}

ClusterTree balanced_tree(std::span<const int> labels) {
    if (labels.empty()) throw InvalidArgument("balanced_tree: no labels");
    TreeBuilder builder;
    // Explicit stack of [lo, hi) ranges; results are joined on the way back.
    struct Frame {
        std::size_t lo, hi;
        int stage;
        NodeId left;
    };
    std::vector<Frame> stack{{0, labels.size(), 0, kNoNode}};
    NodeId result = kNoNode;
    while (!stack.empty()) {
        Frame& f = stack.back();
        const std::size_t mid = f.lo + (f.hi - f.lo + 1) / 2;
        if (f.hi - f.lo == 1) {
            result = builder.add_leaf(labels[f.lo]);
            stack.pop_back();
        } else if (f.stage == 0) {
            f.stage = 1;
            stack.push_back({f.lo, mid, 0, kNoNode});
        } else if (f.stage == 1) {
            f.stage = 2;
            f.left = result;
            stack.push_back({mid, f.hi, 0, kNoNode});
        } else {
            result = builder.join(f.left, result);
            stack.pop_back();
        }
    }
    return std::move(builder).build(result);
}

ClusterTree caterpillar_tree(std::span<const int> labels) {
    if (labels.empty()) throw InvalidArgument("caterpillar_tree: no labels");
    TreeBuilder builder;
    NodeId acc = builder.add_leaf(labels[0]);
    for (std::size_t i = 1; i < labels.size(); ++i) acc = builder.join(acc, builder.add_leaf(labels[i]));
    return std::move(builder).build(acc);
}

std::string format_real(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string serialize_tree(const ClusterTree& t, std::span<const double> node_weights) {
    if (t.empty()) return {};
    std::string out;
    out.reserve(t.node_count() * 4);
    struct Item {
        NodeId id;
        int stage;
    };
    std::vector<Item> stack{{t.root(), 0}};
    while (!stack.empty()) {
        Item& it = stack.back();
        const TreeNode& nd = t.node(it.id);
        if (nd.is_leaf()) {
            out += std::to_string(nd.label);
            stack.pop_back();
            continue;
        }
        NodeId first = nd.left;
        NodeId second = nd.right;
        if (t.min_label(second) < t.min_label(first)) std::swap(first, second);
        switch (it.stage++) {
            case 0:
                out += '(';
                stack.push_back({first, 0});
                break;
            case 1:
                out += ',';
                stack.push_back({second, 0});
                break;
            default:
                out += ')';
                if (!node_weights.empty()) {
                    out += ':';
                    out += format_real(node_weights[it.id]);
                }
                stack.pop_back();
        }
    }
    return out;
}

namespace {

class TreeParser {
  public:
    explicit TreeParser(std::string_view text) : text_(text) {}

    ParsedTree run() {
        skip_space();
        const NodeId root = parse_node(0);
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters after tree");
        ParsedTree out;
        out.weights = std::move(weights_);
        try {
            out.tree = ClusterTree(std::move(nodes_), root);
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what(), text_.size());
        }
        return out;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    NodeId parse_node(std::size_t depth) {
        if (depth > kMaxDepth) fail("tree nesting too deep");
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == '(') {
            ++pos_;
            const NodeId left = parse_node(depth + 1);
            expect(',');
            const NodeId right = parse_node(depth + 1);
            expect(')');
            nodes_.push_back(TreeNode{left, right, -1});
            weights_.emplace_back();
            const auto id = static_cast<NodeId>(nodes_.size() - 1);
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == ':') {
                ++pos_;
                weights_[id] = parse_real();
            }
            return id;
        }
        const int label = parse_label();
        nodes_.push_back(TreeNode{kNoNode, kNoNode, label});
        weights_.emplace_back();
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ':') fail("weights are only allowed on internal nodes");
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    int parse_label() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        if (begin == end || *begin < '0' || *begin > '9') fail("expected a vertex label");
        int value = 0;
        auto res = std::from_chars(begin, end, value);
        if (res.ec != std::errc()) fail("vertex label out of range");
        pos_ += static_cast<std::size_t>(res.ptr - begin);
        return value;
    }

    double parse_real() {
        skip_space();
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        auto res = std::from_chars(begin, end, value);
        if (res.ec != std::errc() || !std::isfinite(value)) fail("expected a node weight");
        pos_ += static_cast<std::size_t>(res.ptr - begin);
        return value;
    }

    static constexpr std::size_t kMaxDepth = 10000;
    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<TreeNode> nodes_;
    std::vector<std::optional<double>> weights_;
};

}  // namespace

ParsedTree parse_tree(std::string_view text) {
    ParsedTree parsed = TreeParser(text).run();
    return parsed;
}

}  // namespace hicluster
