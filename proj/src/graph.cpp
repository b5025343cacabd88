#include "hicluster/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hicluster/errors.hpp"

namespace hicluster {

std::string_view to_string(Mode mode) {
    return mode == Mode::similarity ? "sim" : "dis";
}

Mode parse_mode(std::string_view text) {
    if (text == "sim" || text == "similarity") return Mode::similarity;
    if (text == "dis" || text == "dissimilarity") return Mode::dissimilarity;
    throw InvalidArgument("unknown mode '" + std::string(text) + "' (expected sim or dis)");
}

WeightedGraph::WeightedGraph(std::size_t n, Mode mode) : n_(n), mode_(mode), w_(n * n, 0.0) {}

void WeightedGraph::set_weight(int u, int v, double w) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n_ || static_cast<std::size_t>(v) >= n_) {
        throw InvalidArgument("vertex out of range");
    }
    if (u == v) throw InvalidArgument("self-loops are not allowed");
    if (!(w >= 0.0) || !std::isfinite(w)) {
        throw InvalidArgument("edge weights must be finite and nonnegative");
    }
    w_[index(u, v)] = w;
    w_[index(v, u)] = w;
}

std::size_t WeightedGraph::edge_count() const {
    std::size_t m = 0;
    for (std::size_t u = 0; u < n_; ++u)
        for (std::size_t v = u + 1; v < n_; ++v)
            if (w_[u * n_ + v] > 0.0) ++m;
    return m;
}

double WeightedGraph::total_weight() const {
    double total = 0.0;
    for (std::size_t u = 0; u < n_; ++u)
        for (std::size_t v = u + 1; v < n_; ++v) total += w_[u * n_ + v];
    return total;
}

double WeightedGraph::max_weight() const {
    double best = 0.0;
    for (double w : w_) best = std::max(best, w);
    return best;
}

double cut_weight(const WeightedGraph& g, std::span<const int> a, std::span<const int> b) {
    std::vector<char> in_a(g.size(), 0);
    for (int u : a) in_a[u] = 1;
    for (int v : b) {
        if (in_a[v]) {
            throw PreconditionError("cut_weight: vertex " + std::to_string(v) +
                                    " appears on both sides");
        }
    }
    double total = 0.0;
    for (int u : a) {
        auto row = g.row(u);
        for (int v : b) total += row[v];
    }
    return total;
}

double inner_weight(const WeightedGraph& g, std::span<const int> a) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto row = g.row(a[i]);
        for (std::size_t j = i + 1; j < a.size(); ++j) total += row[a[j]];
    }
    return total;
}

double cut_ratio(const WeightedGraph& g, const Cut& cut) {
    return cut_weight(g, cut.side_a, cut.side_b) /
           (static_cast<double>(cut.side_a.size()) * static_cast<double>(cut.side_b.size()));
}

InducedSubgraph induced_subgraph(const WeightedGraph& g, std::span<const int> s) {
    if (s.empty()) throw InvalidArgument("induced_subgraph: empty vertex set");
    InducedSubgraph out{WeightedGraph(s.size(), g.mode()), {s.begin(), s.end()}};
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto row = g.row(s[i]);
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            const double w = row[s[j]];
            if (w != 0.0) out.graph.set_weight(static_cast<int>(i), static_cast<int>(j), w);
        }
    }
    return out;
}

VertexSet all_vertices(std::size_t n) {
    VertexSet v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

VertexSet complement(std::span<const int> a, std::size_t n) {
    std::vector<char> in(n, 0);
    for (int u : a) in[u] = 1;
    VertexSet out;
    out.reserve(n - a.size());
    for (std::size_t v = 0; v < n; ++v)
        if (!in[v]) out.push_back(static_cast<int>(v));
    return out;
}

}  // namespace hicluster
