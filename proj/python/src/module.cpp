#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hicluster/divisive.hpp"
#include "hicluster/errors.hpp"
#include "hicluster/ground_truth.hpp"
#include "hicluster/hsbm.hpp"
#include "hicluster/instances.hpp"
#include "hicluster/io.hpp"
#include "hicluster/linkage.hpp"
#include "hicluster/objectives.hpp"
#include "hicluster/oracle.hpp"

namespace py = pybind11;
using namespace hicluster;

namespace {

Mode mode_of(const std::string& s) { return parse_mode(s); }

std::string mode_name(Mode m) { return std::string(to_string(m)); }

WeightedGraph graph_from_matrix(const std::vector<std::vector<double>>& m, const std::string& mode) {
    WeightedGraph g(m.size(), mode_of(mode));
    for (std::size_t u = 0; u < m.size(); ++u) {
        if (m[u].size() != m.size()) throw InvalidArgument("matrix must be square");
        for (std::size_t v = u + 1; v < m.size(); ++v) {
            if (m[u][v] != m[v][u]) throw InvalidArgument("matrix must be symmetric");
            g.set_weight(static_cast<int>(u), static_cast<int>(v), m[u][v]);
        }
    }
    return g;
}

std::vector<std::vector<double>> graph_to_matrix(const WeightedGraph& g) {
    std::vector<std::vector<double>> m(g.size(), std::vector<double>(g.size(), 0.0));
    for (std::size_t u = 0; u < g.size(); ++u)
        for (std::size_t v = 0; v < g.size(); ++v)
            if (u != v) m[u][v] = g.weight(static_cast<int>(u), static_cast<int>(v));
    return m;
}

CutFinderKind finder_kind(const std::string& s) {
    if (s == "brute") return CutFinderKind::exact_brute;
    if (s == "gt-fast") return CutFinderKind::ground_truth_fast;
    if (s == "local-search") return CutFinderKind::local_search;
    throw InvalidArgument("unknown cut finder '" + s + "' (brute, gt-fast, local-search)");
}

const CostFunction& default_cf() {
    static const CostFunction d = CostFunction::dasgupta();
    return d;
}

}  // namespace

PYBIND11_MODULE(_hicluster, m) {
    m.doc() = "Hierarchical clustering objectives, oracles and algorithms";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    // Registered most-derived last so pybind11 tries them first.
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<ResourceGuardError>(m, "ResourceGuardError", error.ptr());
    py::register_exception<InvariantError>(m, "InvariantError", error.ptr());

    py::class_<WeightedGraph>(m, "Graph")
        .def(py::init([](std::size_t n, const std::string& mode) { return WeightedGraph(n, mode_of(mode)); }),
             py::arg("n"), py::arg("mode") = "sim")
        .def_static("from_matrix", &graph_from_matrix, py::arg("matrix"), py::arg("mode") = "sim")
        .def_static("parse", [](const std::string& text) { return parse_graph(text); })
        .def("format", [](const WeightedGraph& g) { return format_graph(g); })
        .def("to_matrix", &graph_to_matrix)
        .def_property_readonly("n", &WeightedGraph::size)
        .def_property_readonly("mode", [](const WeightedGraph& g) { return mode_name(g.mode()); })
        .def("weight", &WeightedGraph::weight)
        .def("set_weight", &WeightedGraph::set_weight)
        .def("total_weight", &WeightedGraph::total_weight)
        .def("__len__", &WeightedGraph::size);

    py::class_<ClusterTree>(m, "Tree")
        .def_static("parse", [](const std::string& text) { return parse_tree(text).tree; })
        .def_static("balanced", [](const std::vector<int>& labels) { return balanced_tree(labels); })
        .def_static("caterpillar", [](const std::vector<int>& labels) { return caterpillar_tree(labels); })
        .def_property_readonly("leaf_count", &ClusterTree::leaf_count)
        .def("labels", &ClusterTree::labels)
        .def("root_split",
             [](const ClusterTree& t) {
                 if (t.leaf_count() < 2) throw InvalidArgument("a single leaf has no split");
                 const TreeNode& r = t.node(t.root());
                 return py::make_tuple(t.leaves(r.left), t.leaves(r.right));
             })
        .def("__str__", [](const ClusterTree& t) { return serialize_tree(t); })
        .def("__repr__", [](const ClusterTree& t) { return "Tree(\"" + serialize_tree(t) + "\")"; })
        .def("__eq__", [](const ClusterTree& a, const ClusterTree& b) { return serialize_tree(a) == serialize_tree(b); });

    py::class_<CostFunction>(m, "CostFunction")
        .def_static("dasgupta", &CostFunction::dasgupta, py::arg("n_max") = CostFunction::kDefaultMaxN)
        .def_static("from_base_sequence", &CostFunction::from_base_sequence, py::arg("base"), py::arg("n_max"),
                    py::arg("name") = "custom")
        .def_static("parse", [](const std::string& text) { return parse_cost_function(text); })
        .def("format", [](const CostFunction& cf) { return format_cost_function(cf); })
        .def_property_readonly("name", &CostFunction::name)
        .def_property_readonly("n_max", &CostFunction::n_max)
        .def("g", &CostFunction::g)
        .def("kappa", &CostFunction::kappa);

    m.def(
        "evaluate",
        [](const WeightedGraph& g, const ClusterTree& t, const CostFunction* cf) {
            return evaluate(cf ? *cf : default_cf(), g, t).total;
        },
        py::arg("graph"), py::arg("tree"), py::arg("objective") = nullptr);
    m.def(
        "evaluate_via_lca",
        [](const WeightedGraph& g, const ClusterTree& t, const CostFunction* cf) {
            return evaluate_via_lca(cf ? *cf : default_cf(), g, t);
        },
        py::arg("graph"), py::arg("tree"), py::arg("objective") = nullptr);
    m.def(
        "exact_opt",
        [](const WeightedGraph& g, const CostFunction* cf, std::size_t max_n) {
            OptResult r = exact_opt(cf ? *cf : default_cf(), g, objective_direction(g.mode()), max_n);
            return py::make_tuple(r.value, r.tree);
        },
        py::arg("graph"), py::arg("objective") = nullptr, py::arg("max_n") = OracleLimits::kExactOptDefault,
        "Optimal objective and a tree attaining it (minimum for sim, maximum for dis).");
    m.def(
        "admissible",
        [](const CostFunction& cf, std::size_t n_max) { return check_admissibility(cf, n_max).admissible(); },
        py::arg("objective"), py::arg("n_max") = 8);

    m.def(
        "linkage",
        [](const WeightedGraph& g, const std::string& kind, std::optional<std::string> merge,
           std::optional<std::uint64_t> tie_seed) {
            LinkagePolicy p{parse_linkage_kind(kind), g.mode(), {}, {}};
            if (merge) {
                if (*merge == "max") p.merge = MergeRule::max_link;
                else if (*merge == "min") p.merge = MergeRule::min_link;
                else throw InvalidArgument("merge must be 'max' or 'min'");
            }
            if (tie_seed) p.script = random_tie_script(g, p, *tie_seed);
            return linkage(g, p).tree;
        },
        py::arg("graph"), py::arg("kind") = "average", py::arg("merge") = py::none(),
        py::arg("tie_seed") = py::none());
    m.def(
        "recursive_cut_tree",
        [](const WeightedGraph& g, const std::string& finder, double epsilon) {
            CutFinder f;
            f.kind = finder_kind(finder);
            f.epsilon = epsilon;
            return recursive_cut_tree(g, f);
        },
        py::arg("graph"), py::arg("finder") = "brute", py::arg("epsilon") = 0.1);
    m.def(
        "densest_cut_tree",
        [](const WeightedGraph& g, double epsilon) { return recursive_densest_cut_tree(g, epsilon).tree; },
        py::arg("graph"), py::arg("epsilon") = 0.1);
    m.def(
        "bisection_two_center", [](const WeightedGraph& g) { return bisection_two_center(g, g.mode()); },
        py::arg("graph"));
    m.def(
        "fast_pivot",
        [](const WeightedGraph& g, std::uint64_t seed, double tolerance) {
            return fast_pivot(g, {seed, tolerance});
        },
        py::arg("graph"), py::arg("seed") = 0, py::arg("tolerance") = 0.0);
    m.def("robust_pivot", &robust_pivot, py::arg("graph"), py::arg("delta"));

    m.def(
        "random_ground_truth",
        [](std::size_t n, const std::string& mode, bool strict, std::uint64_t seed) {
            GeneratingTreeOptions o;
            o.mode = mode_of(mode);
            o.strict = strict;
            const GeneratingTree gt = random_generating_tree(n, o, seed);
            return py::make_tuple(realize(gt), gt.tree, format_gentree(gt));
        },
        py::arg("n"), py::arg("mode") = "sim", py::arg("strict") = true, py::arg("seed") = 0,
        "Returns (graph, generating tree, gentree text).");
    m.def(
        "is_generating", [](const ClusterTree& t, const WeightedGraph& g) { return is_generating(t, g).generating; },
        py::arg("tree"), py::arg("graph"));
    m.def(
        "minimal_representation",
        [](const WeightedGraph& g) { return format_gentree(minimal_representation(g)); }, py::arg("graph"));
    m.def(
        "perturb", [](const WeightedGraph& g, double delta, std::uint64_t seed) { return perturb(g, {delta, seed}); },
        py::arg("graph"), py::arg("delta"), py::arg("seed") = 0);

    m.def(
        "hsbm_sample",
        [](const std::string& config, std::optional<std::uint64_t> seed) {
            HsbmParams h = parse_hsbm_config(config);
            if (seed) h.seed = *seed;
            HsbmSample s = sample(h);
            return py::make_tuple(std::move(s.graph), std::move(s.labels));
        },
        py::arg("config"), py::arg("seed") = py::none(), "Returns (graph, labels).");
    m.def(
        "recover_tree",
        [](const WeightedGraph& g, std::size_t k, std::size_t repetitions, std::uint64_t seed) {
            RecoveryResult r = recover_tree(g, k, default_cf(), repetitions, seed);
            return py::make_tuple(r.tree, r.clusters);
        },
        py::arg("graph"), py::arg("k"), py::arg("repetitions") = 0, py::arg("seed") = 0,
        "Returns (tree, bottom clusters).");

    m.def("make_path", &make_path, py::arg("n"));
    m.def("make_spine", &make_spine, py::arg("k"));
    m.def("make_star", &make_star, py::arg("n"), py::arg("weight"));
    m.def(
        "random_graph",
        [](std::size_t n, const std::string& mode, int max_weight, double density, std::uint64_t seed) {
            return random_graph(n, {mode_of(mode), max_weight, density}, seed);
        },
        py::arg("n"), py::arg("mode") = "sim", py::arg("max_weight") = 0, py::arg("density") = 1.0,
        py::arg("seed") = 0);
}
