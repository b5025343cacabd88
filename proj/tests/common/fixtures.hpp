#pragma once

#include <cstdint>
#include <vector>

#include "hicluster/graph.hpp"
#include "hicluster/random.hpp"
#include "hicluster/tree.hpp"

namespace fixtures {

using hicluster::Mode;
using hicluster::WeightedGraph;

// Two blocks {0,1} and {2,3} of weight 3, cross weight 1.
inline WeightedGraph two_blocks() {
    WeightedGraph g(4, Mode::similarity);
    g.set_weight(0, 1, 3);
    g.set_weight(2, 3, 3);
    for (int a : {0, 1})
        for (int b : {2, 3}) g.set_weight(a, b, 1);
    return g;
}

// Unit path 0-1-2-3.
inline WeightedGraph path4() {
    WeightedGraph g(4, Mode::similarity);
    g.set_weight(0, 1, 1);
    g.set_weight(1, 2, 1);
    g.set_weight(2, 3, 1);
    return g;
}

// Dissimilarity triangle with weights 1, 1, 3.
inline WeightedGraph triangle() {
    WeightedGraph g(3, Mode::dissimilarity);
    g.set_weight(0, 1, 1);
    g.set_weight(0, 2, 1);
    g.set_weight(1, 2, 3);
    return g;
}

inline WeightedGraph pair(double w, Mode mode = Mode::similarity) {
    WeightedGraph g(2, mode);
    g.set_weight(0, 1, w);
    return g;
}

// Random graph with integer weights in [0, max_w]; about `density` of pairs present.
inline WeightedGraph random_graph(std::size_t n, std::uint64_t seed, Mode mode, int max_w = 5,
                                  double density = 0.7) {
    hicluster::Rng rng(seed);
    WeightedGraph g(n, mode);
    for (int u = 0; u < static_cast<int>(n); ++u)
        for (int v = u + 1; v < static_cast<int>(n); ++v)
            if (rng.bernoulli(density)) g.set_weight(u, v, 1.0 + static_cast<double>(rng.below(max_w)));
    return g;
}

// Random real weights in (0, 1].
inline WeightedGraph random_real_graph(std::size_t n, std::uint64_t seed, Mode mode) {
    hicluster::Rng rng(seed);
    WeightedGraph g(n, mode);
    for (int u = 0; u < static_cast<int>(n); ++u)
        for (int v = u + 1; v < static_cast<int>(n); ++v) g.set_weight(u, v, 1.0 - rng.uniform());
    return g;
}

// Uniformly random split shape over a shuffled label order.
inline hicluster::ClusterTree random_tree(std::size_t n, std::uint64_t seed) {
    hicluster::Rng rng(seed);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i);
    rng.shuffle(std::span<int>(labels));
    hicluster::TreeBuilder b;
    std::vector<hicluster::NodeId> roots;
    for (int l : labels) roots.push_back(b.add_leaf(l));
    while (roots.size() > 1) {
        const std::size_t i = rng.below(roots.size() - 1);
        roots[i] = b.join(roots[i], roots[i + 1]);
        roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    }
    return std::move(b).build(roots.front());
}

}  // namespace fixtures
