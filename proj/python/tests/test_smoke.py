import math

import pytest

import hicluster as hc


def triangle():
    return hc.Graph.from_matrix([[0, 1, 1], [1, 0, 3], [1, 3, 0]], mode="dis")


def two_blocks():
    g = hc.Graph(4)
    g.set_weight(0, 1, 3)
    g.set_weight(2, 3, 3)
    for u, v in [(0, 2), (0, 3), (1, 2), (1, 3)]:
        g.set_weight(u, v, 1)
    return g


def test_graph_round_trip():
    g = two_blocks()
    assert g.n == 4 and len(g) == 4 and g.mode == "sim"
    assert g.total_weight() == 10
    assert hc.Graph.parse(g.format()).to_matrix() == g.to_matrix()


def test_tree_text():
    t = hc.Tree.parse("((1,0),(3,2))")
    assert str(t) == "((0,1),(2,3))"
    assert t.leaf_count == 4
    assert t.root_split() == ([0, 1], [2, 3])
    assert str(hc.Tree.caterpillar([0, 1, 2])) == "((0,1),2)"


def test_evaluate_and_opt():
    g = two_blocks()
    t = hc.Tree.parse("((0,1),(2,3))")
    assert hc.evaluate(g, t) == 28
    assert hc.evaluate_via_lca(g, t) == 28
    value, best = hc.exact_opt(g)
    assert value == 28 and str(best) == "((0,1),(2,3))"
    assert hc.exact_opt(triangle())[0] == 14


def test_cost_functions():
    d = hc.CostFunction.dasgupta()
    assert [d.kappa(n) for n in range(2, 9)] == [2, 8, 20, 40, 70, 112, 168]
    assert hc.admissible(d, 6)
    sq = hc.CostFunction.from_base_sequence([float((i + 1) ** 2) for i in range(1, 16)], 16)
    assert math.isclose(sq.g(1, 1), 4.0)
    assert hc.CostFunction.parse(sq.format()).kappa(5) == pytest.approx(sq.kappa(5))


def test_algorithms_on_two_blocks():
    g = two_blocks()
    for kind in ("single", "complete", "average"):
        assert hc.evaluate(g, hc.linkage(g, kind)) == 28
        assert hc.evaluate(g, hc.linkage(g, kind, tie_seed=3)) == 28
    assert hc.evaluate(g, hc.recursive_cut_tree(g)) == 28
    assert hc.evaluate(g, hc.recursive_cut_tree(g, "gt-fast")) == 28
    assert hc.evaluate(g, hc.bisection_two_center(g)) == 28
    assert hc.evaluate(g, hc.fast_pivot(g, seed=5)) == 28
    assert hc.evaluate(g, hc.robust_pivot(g, 1.2)) == 28


def test_average_linkage_on_triangle():
    assert str(hc.linkage(triangle(), "average")) == "((0,1),2)"
    assert hc.evaluate(triangle(), hc.densest_cut_tree(triangle())) >= 9


def test_ground_truth():
    g, tree, text = hc.random_ground_truth(8, seed=4)
    assert hc.is_generating(tree, g)
    assert text.startswith("hicluster-gentree")
    assert hc.evaluate(g, hc.linkage(g)) == hc.exact_opt(g)[0]
    p = hc.perturb(g, 1.5, seed=1)
    assert hc.evaluate(p, hc.robust_pivot(p, 1.5)) <= 1.5 * hc.exact_opt(p)[0] + 1e-9
    assert hc.minimal_representation(two_blocks()).strip().endswith("((0,1):3,(2,3):3):1")


def test_hsbm():
    config = "k = 2\nn = 60\nalpha = 1\nf = [0.5, 0.5]\np = [0.9, 0.9]\ntop_tree = (0,1):0.1\nseed = 7\n"
    g, labels = hc.hsbm_sample(config)
    assert g.n == 60 and set(labels) <= {0, 1}
    tree, clusters = hc.recover_tree(g, 2)
    assert tree.leaf_count == 60
    assert sorted(len(c) for c in clusters) == sorted([labels.count(0), labels.count(1)])


def test_instances():
    assert hc.make_path(5).total_weight() == 4
    assert hc.make_star(5, 125).n == 5
    r = hc.random_graph(10, mode="dis", max_weight=3, seed=2)
    assert r.mode == "dis"
    assert hc.random_graph(10, mode="dis", max_weight=3, seed=2).to_matrix() == r.to_matrix()


def test_errors():
    with pytest.raises(hc.ParseError):
        hc.Tree.parse("((0,1)")
    with pytest.raises(hc.ResourceGuardError):
        hc.exact_opt(hc.make_path(18))
    with pytest.raises(ValueError):
        hc.Graph(3, mode="nope")
    with pytest.raises(ValueError):
        hc.densest_cut_tree(two_blocks())
