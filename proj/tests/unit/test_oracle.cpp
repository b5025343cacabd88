#include <cmath>
#include <set>

#include "all_trees.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "hicluster/errors.hpp"
#include "hicluster/ground_truth.hpp"
#include "hicluster/oracle.hpp"

using namespace hicluster;

namespace {

std::vector<int> iota_labels(std::size_t n) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
    return v;
}

}  // namespace

TEST_SUITE_BEGIN("oracle");

TEST_CASE("exact opt on the fixtures") {
    const CostFunction d = CostFunction::dasgupta();
    const OptResult p = exact_opt(d, fixtures::path4(), Direction::minimize);
    CHECK(p.value == 8);
    CHECK(evaluate(d, fixtures::path4(), p.tree).total == 8);
    const OptResult b = exact_opt(d, fixtures::two_blocks(), Direction::minimize);
    CHECK(b.value == 28);
    CHECK(serialize_tree(b.tree) == "((0,1),(2,3))");
    const OptResult t = exact_opt(d, fixtures::triangle(), Direction::maximize);
    CHECK(t.value == 14);
    CHECK(exact_opt(d, WeightedGraph(1), Direction::minimize).value == 0);
}

TEST_CASE("exact opt matches explicit enumeration") {
    const CostFunction d = CostFunction::dasgupta();
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t n = 2 + seed % 6;
        const Mode mode = seed % 2 ? Mode::dissimilarity : Mode::similarity;
        const WeightedGraph g = fixtures::random_graph(n, seed, mode);
        double lo = INFINITY, hi = -INFINITY;
        std::set<double> distinct;
        for (const ClusterTree& t : fixtures::all_trees(iota_labels(n))) {
            const double c = evaluate(d, g, t).total;
            lo = std::min(lo, c);
            hi = std::max(hi, c);
            distinct.insert(c);
        }
        CHECK(exact_opt(d, g, Direction::minimize).value == lo);
        CHECK(exact_opt(d, g, Direction::maximize).value == hi);
        const TreeCostSpectrum s = enumerate_tree_costs(d, g);
        CHECK(s.min == lo);
        CHECK(s.max == hi);
        CHECK(s.distinct_count == distinct.size());
        CHECK(evaluate(d, g, s.min_tree).total == lo);
        CHECK(evaluate(d, g, s.max_tree).total == hi);
    }
}

TEST_CASE("tree counts are double factorials") {
    const CostFunction d = CostFunction::dasgupta();
    std::uint64_t expected = 1;
    for (std::size_t n = 2; n <= 10; ++n) {
        if (n > 2) expected *= 2 * n - 3;
        CHECK(enumerate_tree_costs(d, unit_clique(n)).tree_count == expected);
    }
}

TEST_CASE("generating spectrum matches explicit enumeration") {
    const CostFunction d = CostFunction::dasgupta();
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t n = 2 + seed % 6;
        GeneratingTreeOptions opt;
        opt.strict = seed % 3 == 0;
        opt.mode = seed % 2 ? Mode::dissimilarity : Mode::similarity;
        opt.max_step = 2;
        const WeightedGraph g = seed % 5 == 4 ? fixtures::random_graph(n, seed, opt.mode, 2, 1.0)
                                              : realize(random_generating_tree(n, opt, seed));
        std::uint64_t gen = 0, other = 0;
        double gmin = INFINITY, gmax = -INFINITY, omin = INFINITY, omax = -INFINITY;
        for (const ClusterTree& t : fixtures::all_trees(iota_labels(n))) {
            const double c = evaluate(d, g, t).total;
            if (is_generating(t, g)) {
                ++gen;
                gmin = std::min(gmin, c);
                gmax = std::max(gmax, c);
            } else {
                ++other;
                omin = std::min(omin, c);
                omax = std::max(omax, c);
            }
        }
        const GeneratingSpectrum s = generating_spectrum(d, g);
        CHECK(s.generating_count == gen);
        CHECK(s.other_count == other);
        if (gen) {
            CHECK(s.generating_min == gmin);
            CHECK(s.generating_max == gmax);
        }
        if (other) {
            CHECK(s.other_min == omin);
            CHECK(s.other_max == omax);
        }
    }
}

TEST_CASE("brute cuts against explicit enumeration") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 2 + seed % 9;
        const WeightedGraph g = fixtures::random_graph(n, seed, Mode::similarity);
        double lo = INFINITY, hi = -INFINITY;
        for (unsigned mask = 1; mask < (1u << n) - 1; ++mask) {
            VertexSet a, b;
            for (std::size_t v = 0; v < n; ++v) ((mask >> v) & 1u ? a : b).push_back(static_cast<int>(v));
            const double r = cut_weight(g, a, b) / static_cast<double>(a.size() * b.size());
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        const CutResult s = brute_sparsest_cut(g);
        const CutResult dn = brute_densest_cut(g);
        CHECK(s.ratio == doctest::Approx(lo).epsilon(1e-12));
        CHECK(dn.ratio == doctest::Approx(hi).epsilon(1e-12));
        CHECK(s.cut.side_a.front() == 0);
        CHECK(cut_ratio(g, s.cut) == doctest::Approx(s.ratio).epsilon(1e-12));
    }
}

TEST_CASE("sparsest cut ties go to the lexicographically smallest side") {
    const CutResult r = brute_sparsest_cut(unit_clique(4));
    CHECK(r.cut.side_a == VertexSet{0});
    CHECK(r.ratio == 1);
    const CutResult b = brute_sparsest_cut(fixtures::two_blocks());
    CHECK(b.cut.side_a == VertexSet{0, 1});
    CHECK(b.ratio == 1);
}

TEST_CASE("resource guards") {
    const CostFunction d = CostFunction::dasgupta();
    CHECK_THROWS_AS(exact_opt(d, WeightedGraph(17), Direction::minimize), ResourceGuardError);
    CHECK_THROWS_AS(exact_opt(d, WeightedGraph(21), Direction::minimize, 64), ResourceGuardError);
    CHECK_THROWS_AS(enumerate_tree_costs(d, WeightedGraph(11)), ResourceGuardError);
    CHECK_THROWS_AS(brute_sparsest_cut(WeightedGraph(25)), ResourceGuardError);
    try {
        exact_opt(d, WeightedGraph(18), Direction::minimize);
    } catch (const ResourceGuardError& e) {
        CHECK(e.size() == 18);
        CHECK(e.limit() == 16);
    }
}

TEST_SUITE_END();
