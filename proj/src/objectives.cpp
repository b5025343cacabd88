#include "hicluster/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hicluster/errors.hpp"

namespace hicluster {

namespace {

std::vector<double> kappa_from_base(const std::vector<double>& base, std::size_t n_max) {
    std::vector<double> kappa(n_max + 1, 0.0);
    for (std::size_t n = 2; n <= n_max; ++n) {
        const std::size_t i = n - 1;
        kappa[n] = kappa[n - 1] + static_cast<double>(i) * base[i - 1];
    }
    return kappa;
}

}  // namespace

CostFunction CostFunction::dasgupta(std::size_t n_max) {
    CostFunction cf;
    cf.name_ = "dasgupta";
    cf.n_max_ = n_max;
    cf.dasgupta_ = true;
    cf.base_.resize(n_max);
    for (std::size_t i = 1; i <= n_max; ++i) cf.base_[i - 1] = static_cast<double>(i + 1);
    cf.kappa_ = kappa_from_base(cf.base_, n_max);
    return cf;
}

CostFunction CostFunction::from_base_sequence(std::vector<double> base, std::size_t n_max,
                                              std::string name) {
    if (n_max < 2) throw InvalidArgument("cost function needs n_max >= 2");
    if (base.size() + 1 < n_max) {
        throw InvalidArgument("base sequence has " + std::to_string(base.size()) +
                              " values; n_max " + std::to_string(n_max) + " needs " +
                              std::to_string(n_max - 1));
    }
    for (std::size_t i = 1; i <= base.size(); ++i) {
        if (!(base[i - 1] > 0.0) || !std::isfinite(base[i - 1])) {
            throw AdmissibilityError("g(" + std::to_string(i) + ",1) must be positive and finite");
        }
        if (i >= 2) {
            const double prev = base[i - 2] / static_cast<double>(i);
            const double cur = base[i - 1] / static_cast<double>(i + 1);
            if (cur < prev * (1.0 - 1e-12)) {
                throw AdmissibilityError("g(n,1)/(n+1) decreases between n=" + std::to_string(i - 1) +
                                         " and n=" + std::to_string(i));
            }
        }
    }

    CostFunction cf;
    cf.name_ = std::move(name);
    cf.n_max_ = n_max;
    cf.base_ = std::move(base);
    cf.kappa_ = kappa_from_base(cf.base_, n_max);

    // Symmetry holds by construction; strict monotonicity has to be checked.
    for (std::size_t a = 1; a < n_max; ++a) {
        for (std::size_t b = 1; a + b < n_max; ++b) {
            if (!(cf.g(a + 1, b) > cf.g(a, b))) {
                throw AdmissibilityError("derived g is not strictly increasing at (n1,n2)=(" +
                                         std::to_string(a) + "," + std::to_string(b) + ")");
            }
        }
    }
    return cf;
}

CostFunction CostFunction::from_table(std::string name, std::size_t n_max,
                                      const std::function<double(std::size_t, std::size_t)>& g) {
    if (n_max < 2 || n_max > 512) throw InvalidArgument("explicit g tables support 2 <= n_max <= 512");
    CostFunction cf;
    cf.name_ = std::move(name);
    cf.n_max_ = n_max;
    cf.table_.assign((n_max + 1) * (n_max + 1), 0.0);
    for (std::size_t a = 1; a < n_max; ++a)
        for (std::size_t b = 1; a + b <= n_max; ++b) cf.table_[a * (n_max + 1) + b] = g(a, b);
    cf.base_.resize(n_max - 1);
    for (std::size_t i = 1; i < n_max; ++i) cf.base_[i - 1] = cf.table_[i * (n_max + 1) + 1];
    cf.kappa_ = kappa_from_base(cf.base_, n_max);
    return cf;
}

void CostFunction::range_error(std::size_t a, std::size_t b) const {
    throw TableRangeError("g(" + std::to_string(a) + "," + std::to_string(b) + ") is outside the table of '" +
                          name_ + "' (n_max " + std::to_string(n_max_) + ")");
}

double CostFunction::kappa(std::size_t n) const {
    if (n > n_max_) range_error(n, 0);
    return kappa_[n];
}

double CostFunction::g_max(std::size_t n) const {
    double best = 0.0;
    for (std::size_t a = 1; a < n; ++a) best = std::max(best, g(a, n - a));
    return best;
}

namespace {

void require_fits(const CostFunction& cf, const WeightedGraph& g, const ClusterTree& t) {
    if (!t.spans_vertices(g.size())) {
        throw InvalidArgument("tree leaves must be exactly the graph's vertices 0.." +
                              std::to_string(g.size() == 0 ? 0 : g.size() - 1));
    }
    if (g.size() > cf.n_max()) {
        throw TableRangeError("graph has " + std::to_string(g.size()) + " vertices; objective '" +
                              cf.name() + "' is tabulated up to " + std::to_string(cf.n_max()));
    }
}

}  // namespace

ObjectiveReport evaluate(const CostFunction& cf, const WeightedGraph& g, const ClusterTree& t) {
    require_fits(cf, g, t);
    ObjectiveReport report;
    report.per_node.assign(t.node_count(), 0.0);
    std::vector<VertexSet> below(t.node_count());
    for (NodeId id : t.postorder()) {
        const TreeNode& nd = t.node(id);
        if (nd.is_leaf()) {
            below[id] = {nd.label};
            continue;
        }
        // Asymmetric g is read with the child holding the smaller label first.
        const bool swap = t.min_label(nd.right) < t.min_label(nd.left);
        VertexSet& l = below[swap ? nd.right : nd.left];
        VertexSet& r = below[swap ? nd.left : nd.right];
        double cross = 0.0;
        for (int u : l) {
            auto row = g.row(u);
            for (int v : r) cross += row[v];
        }
        const double gamma = cross * cf.g(l.size(), r.size());
        report.per_node[id] = gamma;
        report.total += gamma;
        VertexSet merged;
        merged.reserve(l.size() + r.size());
        std::merge(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(merged));
        below[id] = std::move(merged);
        VertexSet().swap(l);
        VertexSet().swap(r);
    }
    return report;
}

double evaluate_via_lca(const CostFunction& cf, const WeightedGraph& g, const ClusterTree& t) {
    require_fits(cf, g, t);
    const auto n = static_cast<int>(g.size());
    double total = 0.0;
    for (int u = 0; u < n; ++u) {
        auto row = g.row(u);
        for (int v = u + 1; v < n; ++v) {
            if (row[v] == 0.0) continue;
            const TreeNode& top = t.node(t.lca(u, v));
            NodeId first = top.left;
            NodeId second = top.right;
            if (t.min_label(second) < t.min_label(first)) std::swap(first, second);
            total += row[v] * cf.g(t.size(first), t.size(second));
        }
    }
    return total;
}

double trivial_upper_bound(const WeightedGraph& g) {
    return static_cast<double>(g.size()) * g.total_weight();
}

double smoothness_ratio(const CostFunction& cf, std::size_t n) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    return cf.g_max(n) * n2 / cf.kappa(n);
}

WeightedGraph unit_clique(std::size_t n, Mode mode) {
    WeightedGraph g(n, mode);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) g.set_weight(static_cast<int>(u), static_cast<int>(v), 1.0);
    return g;
}

}  // namespace hicluster
