#include "hicluster/ground_truth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hicluster/linkage.hpp"
#include "hicluster/random.hpp"

namespace hicluster {

namespace {

bool ordered(Mode mode, double parent, double child, bool strict) {
    if (mode == Mode::similarity) return strict ? parent < child : parent <= child;
    return strict ? parent > child : parent >= child;
}

std::string fmt(double x) { return format_real(x); }

}  // namespace

bool GeneratingTree::strict() const {
    for (NodeId id : tree.internal_nodes()) {
        const NodeId p = tree.parent(id);
        if (p != kNoNode && !ordered(mode, node_weight[p], node_weight[id], true)) return false;
    }
    return true;
}

void GeneratingTree::validate() const {
    if (tree.empty()) throw InvalidArgument("generating tree is empty");
    if (node_weight.size() != tree.node_count()) {
        throw InvalidArgument("generating tree needs one weight per node");
    }
    for (NodeId id : tree.internal_nodes()) {
        const double w = node_weight[id];
        if (!std::isfinite(w) || w < 0) {
            throw InvalidArgument("node weight must be finite and nonnegative, got " + fmt(w));
        }
        const NodeId p = tree.parent(id);
        if (p != kNoNode && !ordered(mode, node_weight[p], w, false)) {
            throw InvalidArgument("node weights not monotone: parent " + fmt(node_weight[p]) + ", child " + fmt(w) +
                                  " in " + std::string(to_string(mode)) + " mode");
        }
    }
}

WeightedGraph realize(const GeneratingTree& gt) {
    gt.validate();
    const ClusterTree& t = gt.tree;
    const std::size_t n = t.leaf_count();
    if (!t.spans_vertices(n)) throw InvalidArgument("generating tree leaves must be 0..n-1");
    WeightedGraph g(n, gt.mode);
    for (NodeId id : t.internal_nodes()) {
        const VertexSet l = t.leaves(t.node(id).left);
        const VertexSet r = t.leaves(t.node(id).right);
        for (int u : l)
            for (int v : r) g.set_weight(u, v, gt.node_weight[id]);
    }
    return g;
}

GeneratingVerdict is_generating(const ClusterTree& t, const WeightedGraph& g) {
    if (!t.spans_vertices(g.size())) {
        throw InvalidArgument("tree leaves do not match the graph's vertices");
    }
    GeneratingVerdict out;
    out.node_weight.assign(t.node_count(), 0.0);
    // Leaf lists merged bottom-up keep this at O(n^2) overall.
    std::vector<VertexSet> below(t.node_count());
    for (NodeId id : t.postorder()) {
        const TreeNode& nd = t.node(id);
        if (nd.is_leaf()) {
            below[id] = {nd.label};
            continue;
        }
        const VertexSet& l = below[nd.left];
        const VertexSet& r = below[nd.right];
        const double w0 = g.weight(l.front(), r.front());
        for (int u : l) {
            for (int v : r) {
                const double w = g.weight(u, v);
                if (w != w0) {
                    out.witness_node = id;
                    out.witness_first = w0;
                    out.witness_second = w;
                    out.witness = "cut at node " + std::to_string(id) + " carries weights " + fmt(w0) + " (" +
                                  std::to_string(l.front()) + "," + std::to_string(r.front()) + ") and " + fmt(w) +
                                  " (" + std::to_string(std::min(u, v)) + "," + std::to_string(std::max(u, v)) + ")";
                    return out;
                }
            }
        }
        out.node_weight[id] = w0;
        VertexSet merged;
        merged.reserve(l.size() + r.size());
        std::merge(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(merged));
        below[id] = std::move(merged);
        VertexSet().swap(below[nd.left]);
        VertexSet().swap(below[nd.right]);
    }
    for (NodeId id : t.internal_nodes()) {
        const NodeId p = t.parent(id);
        if (p == kNoNode) continue;
        if (!ordered(g.mode(), out.node_weight[p], out.node_weight[id], false)) {
            out.witness_node = id;
            out.witness_first = out.node_weight[p];
            out.witness_second = out.node_weight[id];
            out.witness = "node " + std::to_string(id) + " has weight " + fmt(out.node_weight[id]) +
                          " but its parent has " + fmt(out.node_weight[p]);
            return out;
        }
    }
    out.generating = true;
    return out;
}

namespace {

ClusterTree random_shape(std::span<const int> labels, Rng& rng) {
    // Top-down plan of (lo, hi) ranges; children always come after their parent.
    struct Plan {
        std::size_t lo, hi;
        int left = -1, right = -1;
    };
    std::vector<Plan> plan{{0, labels.size()}};
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const std::size_t len = plan[i].hi - plan[i].lo;
        if (len < 2) continue;
        const std::size_t mid = plan[i].lo + 1 + static_cast<std::size_t>(rng.below(len - 1));
        plan[i].left = static_cast<int>(plan.size());
        plan.push_back({plan[i].lo, mid});
        plan[i].right = static_cast<int>(plan.size());
        plan.push_back({mid, plan[i].hi});
    }
    TreeBuilder b;
    std::vector<NodeId> id(plan.size());
    for (std::size_t i = plan.size(); i-- > 0;) {
        id[i] = plan[i].left < 0 ? b.add_leaf(labels[plan[i].lo]) : b.join(id[plan[i].left], id[plan[i].right]);
    }
    return std::move(b).build(id[0]);
}

}  // namespace

GeneratingTree random_generating_tree(std::size_t n, const GeneratingTreeOptions& options, std::uint64_t seed) {
    if (n == 0) throw InvalidArgument("random_generating_tree: n must be at least 1");
    if (options.root_max < 1 || options.max_step < (options.strict ? 1 : 0)) {
        throw InvalidArgument("random_generating_tree: bad weight profile");
    }
    Rng rng(seed);
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    if (options.shuffle_labels) rng.shuffle(std::span<int>(labels));

    GeneratingTree gt;
    gt.mode = options.mode;
    switch (options.shape) {
        case TreeShape::random: gt.tree = random_shape(labels, rng).canonical(); break;
        case TreeShape::balanced: gt.tree = balanced_tree(labels).canonical(); break;
        case TreeShape::caterpillar: gt.tree = caterpillar_tree(labels).canonical(); break;
    }
    gt.node_weight.assign(gt.tree.node_count(), 0.0);
    const int lo_step = options.strict ? 1 : 0;
    double top = 0.0;
    for (NodeId id : gt.tree.internal_nodes()) {  // preorder: parent first
        const NodeId p = gt.tree.parent(id);
        double w;
        if (p == kNoNode) {
            w = 1.0 + static_cast<double>(rng.below(static_cast<std::uint64_t>(options.root_max)));
        } else {
            const auto span = static_cast<std::uint64_t>(options.max_step - lo_step + 1);
            w = gt.node_weight[p] + lo_step + static_cast<double>(rng.below(span));
        }
        gt.node_weight[id] = w;
        top = std::max(top, w);
    }
    if (options.mode == Mode::dissimilarity) {
        for (NodeId id : gt.tree.internal_nodes()) gt.node_weight[id] = top + 1.0 - gt.node_weight[id];
    }
    return gt;
}

WeightedGraph perturb(const WeightedGraph& g, const PerturbationSpec& spec) {
    if (!(spec.delta >= 1.0) || !std::isfinite(spec.delta)) {
        throw InvalidArgument("perturbation delta must be a finite number >= 1, got " + fmt(spec.delta));
    }
    WeightedGraph out = g;
    if (spec.delta == 1.0) return out;
    Rng rng(spec.seed);
    const int n = static_cast<int>(g.size());
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const double m = rng.uniform(1.0, spec.delta);
            const double w = g.weight(u, v);
            if (w > 0) out.set_weight(u, v, std::min(w * m, w * spec.delta));
        }
    }
    return out;
}

bool find_triple_violation(const WeightedGraph& g, int& x, int& y, int& z) {
    const int n = static_cast<int>(g.size());
    const bool sim = g.mode() == Mode::similarity;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double wab = g.weight(a, b);
            for (int c = 0; c < n; ++c) {
                if (c == a || c == b) continue;
                const double wac = g.weight(a, c), wbc = g.weight(b, c);
                const bool bad = sim ? wab < std::min(wac, wbc) : wab > std::max(wac, wbc);
                if (bad) {
                    x = a;
                    y = b;
                    z = c;
                    return true;
                }
            }
        }
    }
    return false;
}

GeneratingTree minimal_representation(const WeightedGraph& g) {
    if (g.size() == 0) throw InvalidArgument("minimal_representation: empty graph");
    int x, y, z;
    if (find_triple_violation(g, x, y, z)) {
        const std::string rule = g.mode() == Mode::similarity ? "w(x,y) >= min(w(x,z), w(y,z))"
                                                              : "w(x,y) <= max(w(x,z), w(y,z))";
        throw NotUltrametricError(x, y, z,
                                  "graph is not ultrametric: triple (" + std::to_string(x) + "," + std::to_string(y) +
                                      "," + std::to_string(z) + ") violates " + rule);
    }
    // Textbook single linkage: merge the closest clusters by their closest pair.
    LinkagePolicy policy;
    policy.mode = g.mode();
    if (g.mode() == Mode::similarity) {
        policy.kind = LinkageKind::complete;
        policy.merge = MergeRule::max_link;
    } else {
        policy.kind = LinkageKind::single;
        policy.merge = MergeRule::min_link;
    }
    GeneratingTree gt;
    gt.tree = linkage(g, policy).tree;
    gt.mode = g.mode();
    GeneratingVerdict v = is_generating(gt.tree, g);
    if (!v) throw InvariantError("single linkage tree is not generating for an ultrametric graph: " + v.witness);
    gt.node_weight = std::move(v.node_weight);
    if (!(realize(gt) == g)) throw InvariantError("minimal representation does not realize the input graph");
    return gt;
}

}  // namespace hicluster
