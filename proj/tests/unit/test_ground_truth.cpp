#include "doctest.h"
#include "fixtures.hpp"
#include "hicluster/errors.hpp"
#include "hicluster/ground_truth.hpp"
#include "hicluster/io.hpp"

using namespace hicluster;

namespace {

GeneratingTree gentree(const char* text) { return parse_gentree(text); }

// Independent triple check, no early exit ordering assumptions.
bool satisfies_triples(const WeightedGraph& g) {
    const int n = static_cast<int>(g.size());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (x == y || y == z || x == z) continue;
                const double a = g.weight(x, y), b = g.weight(x, z), c = g.weight(y, z);
                if (g.mode() == Mode::similarity ? a < std::min(b, c) : a > std::max(b, c)) return false;
            }
    return true;
}

}  // namespace

TEST_SUITE_BEGIN("ground_truth");

TEST_CASE("realize the two-block tree") {
    const GeneratingTree gt = gentree("hicluster-gentree 1 sim\n((0,1):3,(2,3):3):1\n");
    CHECK(realize(gt) == fixtures::two_blocks());
    CHECK(gt.strict());
}

TEST_CASE("is_generating verdicts on the two-block graph") {
    const WeightedGraph b = fixtures::two_blocks();
    const ClusterTree good = parse_tree("((0,1),(2,3))").tree;
    const GeneratingVerdict yes = is_generating(good, b);
    REQUIRE(yes.generating);
    CHECK(yes.node_weight[good.root()] == 1);
    CHECK(yes.node_weight[good.node(good.root()).left] == 3);
    CHECK(yes.node_weight[good.node(good.root()).right] == 3);

    const ClusterTree bad = parse_tree("((0,2),(1,3))").tree;
    const GeneratingVerdict no = is_generating(bad, b);
    CHECK_FALSE(no.generating);
    CHECK(no.witness_node == bad.root());
    CHECK(std::min(no.witness_first, no.witness_second) == 1);
    CHECK(std::max(no.witness_first, no.witness_second) == 3);
    CHECK_FALSE(no.witness.empty());
}

TEST_CASE("monotonicity failures are reported") {
    // Equal cross weights everywhere but the inner pair is lighter than the root.
    WeightedGraph g(3);
    g.set_weight(0, 1, 1);
    g.set_weight(0, 2, 2);
    g.set_weight(1, 2, 2);
    const ClusterTree t = parse_tree("((0,1),2)").tree;
    CHECK_FALSE(is_generating(t, g));
    g.set_mode(Mode::dissimilarity);
    CHECK(is_generating(t, g));
}

TEST_CASE("round trip over random generating trees") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        GeneratingTreeOptions opt;
        opt.mode = seed % 2 ? Mode::dissimilarity : Mode::similarity;
        opt.strict = seed % 3 != 0;
        opt.shape = static_cast<TreeShape>(seed % 3);
        const std::size_t n = 1 + seed % 20;
        const GeneratingTree gt = random_generating_tree(n, opt, seed);
        gt.validate();
        CHECK(gt.tree.leaf_count() == n);
        if (opt.strict) CHECK(gt.strict());
        const WeightedGraph g = realize(gt);
        CHECK(g.mode() == opt.mode);
        const GeneratingVerdict v = is_generating(gt.tree, g);
        REQUIRE(v.generating);
        for (NodeId id : gt.tree.internal_nodes()) CHECK(v.node_weight[id] == gt.node_weight[id]);
        CHECK(satisfies_triples(g));
    }
}

TEST_CASE("small strict draw generates its realization") {
    GeneratingTreeOptions opt;
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(is_generating(random_generating_tree(4, opt, s).tree,
                                                               realize(random_generating_tree(4, opt, s))));
}

TEST_CASE("generation is deterministic") {
    GeneratingTreeOptions opt;
    const GeneratingTree a = random_generating_tree(16, opt, 7);
    const GeneratingTree b = random_generating_tree(16, opt, 7);
    CHECK(serialize_tree(a.tree, a.node_weight) == serialize_tree(b.tree, b.node_weight));
    CHECK(realize(a) == realize(b));
}

TEST_CASE("validate rejects non-monotone weights") {
    CHECK_THROWS_AS(gentree("hicluster-gentree 1 sim\n((0,1):1,2):3\n"), ParseError);
    CHECK_NOTHROW(gentree("hicluster-gentree 1 dis\n((0,1):1,2):3\n"));
    CHECK_NOTHROW(gentree("hicluster-gentree 1 sim\n((0,1):3,2):3\n"));
    CHECK_FALSE(gentree("hicluster-gentree 1 sim\n((0,1):3,2):3\n").strict());
}

TEST_CASE("perturb") {
    const WeightedGraph b = fixtures::two_blocks();
    CHECK(perturb(b, {1.0, 3}) == b);
    const WeightedGraph p = perturb(b, {1.2, 9});
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) {
            CHECK(p.weight(u, v) >= b.weight(u, v));
            CHECK(p.weight(u, v) <= 1.2 * b.weight(u, v));
        }
    CHECK(p == perturb(b, {1.2, 9}));
    CHECK_FALSE(p == perturb(b, {1.2, 10}));
    CHECK_THROWS_AS(perturb(b, {0.9, 1}), InvalidArgument);
}

TEST_CASE("perturb never decreases weights") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const WeightedGraph g = fixtures::random_real_graph(10, seed, Mode::similarity);
        const WeightedGraph p = perturb(g, {1.5, seed});
        for (int u = 0; u < 10; ++u)
            for (int v = u + 1; v < 10; ++v) {
                CHECK(p.weight(u, v) >= g.weight(u, v));
                CHECK(p.weight(u, v) <= 1.5 * g.weight(u, v));
            }
    }
}

TEST_CASE("minimal representation of the two-block graph") {
    const GeneratingTree gt = minimal_representation(fixtures::two_blocks());
    CHECK(serialize_tree(gt.tree, gt.node_weight) == "((0,1):3,(2,3):3):1");
}

TEST_CASE("minimal representation of a unit clique") {
    WeightedGraph k(3);
    for (int u = 0; u < 3; ++u)
        for (int v = u + 1; v < 3; ++v) k.set_weight(u, v, 1);
    const GeneratingTree gt = minimal_representation(k);
    for (NodeId id : gt.tree.internal_nodes()) CHECK(gt.node_weight[id] == 1);
    CHECK(realize(gt) == k);
}

TEST_CASE("path is not ultrametric") {
    try {
        minimal_representation(fixtures::path4());
        FAIL("expected NotUltrametricError");
    } catch (const NotUltrametricError& e) {
        CHECK(e.x() == 0);
        CHECK(e.y() == 2);
        CHECK(e.z() == 1);
    }
    int x = -1, y = -1, z = -1;
    CHECK(find_triple_violation(fixtures::path4(), x, y, z));
    CHECK_FALSE(find_triple_violation(fixtures::two_blocks(), x, y, z));
}

TEST_CASE("minimal representation round trips random ground truth") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GeneratingTreeOptions opt;
        opt.mode = seed % 2 ? Mode::dissimilarity : Mode::similarity;
        opt.strict = seed % 4 != 0;
        const WeightedGraph g = realize(random_generating_tree(2 + seed % 15, opt, seed));
        const GeneratingTree gt = minimal_representation(g);
        CHECK(gt.mode == g.mode());
        CHECK(realize(gt) == g);
        CHECK(is_generating(gt.tree, g));
    }
}

TEST_CASE("random graphs that fail the triple check are rejected") {
    int rejected = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const WeightedGraph g = fixtures::random_graph(6, seed, Mode::similarity);
        if (satisfies_triples(g)) {
            CHECK(realize(minimal_representation(g)) == g);
        } else {
            ++rejected;
            CHECK_THROWS_AS(minimal_representation(g), NotUltrametricError);
        }
    }
    CHECK(rejected > 0);
}

TEST_SUITE_END();
