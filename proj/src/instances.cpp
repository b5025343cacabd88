#include "hicluster/instances.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <numeric>

#include "hicluster/errors.hpp"
#include "hicluster/objectives.hpp"
#include "hicluster/oracle.hpp"
#include "hicluster/random.hpp"

namespace hicluster {

WeightedGraph make_path(std::size_t n) {
    if (n < 2) throw InvalidArgument("make_path: n must be at least 2");
    WeightedGraph g(n, Mode::similarity);
    for (std::size_t i = 0; i + 1 < n; ++i) g.set_weight(static_cast<int>(i), static_cast<int>(i + 1), 1.0);
    return g;
}

WeightedGraph make_spine(std::size_t k) {
    if (k < 2) throw InvalidArgument("make_spine: k must be at least 2");
    if (k > 40) throw InvalidArgument("make_spine: k too large");
    const std::size_t n = k * k * k + k;
    WeightedGraph g(n, Mode::similarity);
    for (std::size_t i = 0; i + 1 < k; ++i) g.set_weight(static_cast<int>(i), static_cast<int>(i + 1), 1.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const int s = spine_path_start(k, i, j);
            for (std::size_t l = 0; l + 1 < k; ++l) g.set_weight(s + static_cast<int>(l), s + static_cast<int>(l) + 1, 1.0);
            g.set_weight(s + static_cast<int>(k) - 1, static_cast<int>(i), 1.0);
        }
    }
    return g;
}

WeightedGraph make_star(std::size_t n, double w) {
    if (n < 3) throw InvalidArgument("make_star: n must be at least 3");
    const double cube = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
    if (!(w >= cube)) throw InvalidArgument("make_star: W must be at least n^3");
    WeightedGraph g(n, Mode::dissimilarity);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) g.set_weight(static_cast<int>(a), static_cast<int>(b), 1.0);
    g.set_weight(0, static_cast<int>(n - 1), w);
    return g;
}

WeightedGraph random_graph(std::size_t n, const RandomGraphOptions& options, std::uint64_t seed) {
    if (options.max_weight < 0) throw InvalidArgument("random_graph: max_weight must be >= 0");
    if (!(options.density >= 0.0 && options.density <= 1.0)) throw InvalidArgument("random_graph: density must lie in [0, 1]");
    Rng rng(seed);
    WeightedGraph g(n, options.mode);
    for (int u = 0; u < static_cast<int>(n); ++u)
        for (int v = u + 1; v < static_cast<int>(n); ++v) {
            const bool on = rng.bernoulli(options.density);
            const double w = options.max_weight == 0
                                 ? 1.0 - rng.uniform()
                                 : 1.0 + static_cast<double>(rng.below(static_cast<std::uint64_t>(options.max_weight)));
            if (on) g.set_weight(u, v, w);
        }
    return g;
}

ClusterTree balanced_join(std::span<const ClusterTree> parts) {
    if (parts.empty()) throw InvalidArgument("balanced_join: nothing to join");
    if (parts.size() == 1) return parts.front();
    // Shape from balanced_tree over placeholder labels, then substitute.
    std::vector<int> idx(parts.size());
    std::iota(idx.begin(), idx.end(), 0);
    const ClusterTree shape = balanced_tree(idx);
    TreeBuilder b;
    std::vector<NodeId> built(shape.node_count(), kNoNode);
    for (NodeId id : shape.postorder()) {
        const TreeNode& nd = shape.node(id);
        built[id] = nd.is_leaf() ? b.graft(parts[nd.label]) : b.join(built[nd.left], built[nd.right]);
    }
    return std::move(b).build(built[shape.root()]).canonical();
}

ClusterTree path_reference_tree(std::size_t n) {
    if (n < 1) throw InvalidArgument("path_reference_tree: empty");
    return balanced_tree(all_vertices(n)).canonical();
}

ClusterTree spine_reference_tree(std::size_t k) {
    if (k < 2) throw InvalidArgument("spine_reference_tree: k must be at least 2");
    std::vector<ClusterTree> groups;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<ClusterTree> parts{ClusterTree::leaf(static_cast<int>(i))};
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<int> path(k);
            std::iota(path.begin(), path.end(), spine_path_start(k, i, j));
            parts.push_back(balanced_tree(path));
        }
        groups.push_back(balanced_join(parts));
    }
    return balanced_join(groups);
}

ClusterTree star_reference_tree(std::size_t n) {
    if (n < 3) throw InvalidArgument("star_reference_tree: n must be at least 3");
    std::vector<int> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 0);
    return union_tree(balanced_tree(rest), ClusterTree::leaf(static_cast<int>(n - 1))).canonical();
}

TieScript path_complete_linkage_script(std::size_t n) {
    TieScript s;
    for (std::size_t i = 1; i < n; ++i) s.emplace_back(0, static_cast<int>(i));
    return s;
}

TieScript spine_average_linkage_script(std::size_t k) {
    const WeightedGraph g = make_spine(k);
    std::vector<int> group(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) group[v] = v < k ? 0 : 1 + static_cast<int>((v - k) / k);
    auto one_group = [&](const VertexSet& a, const VertexSet& b) {
        const int first = group[a.front()];
        for (int v : a)
            if (group[v] != first) return false;
        for (int v : b)
            if (group[v] != first) return false;
        return true;
    };
    LinkagePolicy policy{LinkageKind::average, Mode::similarity, std::nullopt, {}};
    return record_tie_script(g, policy, [&](auto cands) -> std::size_t {
        for (std::size_t i = 0; i < cands.size(); ++i)
            if (one_group(*cands[i].first, *cands[i].second)) return i;
        return 0;
    });
}

TieScript star_single_linkage_script(std::size_t n) {
    if (n < 3) throw InvalidArgument("star script: n must be at least 3");
    return {{0, 1}, {0, static_cast<int>(n - 1)}};
}

BisectionScript star_bisection_script(std::size_t n) {
    if (n < 4) throw InvalidArgument("star bisection script: n must be at least 4");
    return {{1, 2, {0, 1, static_cast<int>(n - 1)}}};
}

namespace {

std::vector<std::string_view> script_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        out.push_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return out;
}

std::vector<long> parse_ints(std::string_view s, std::size_t offset) {
    std::vector<long> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == ' ' || s[i] == '\t' || s[i] == '\r') {
            ++i;
            continue;
        }
        long v = 0;
        auto res = std::from_chars(s.data() + i, s.data() + s.size(), v);
        if (res.ec != std::errc() || v < 0) throw ParseError("expected a vertex id", offset + i);
        i = static_cast<std::size_t>(res.ptr - s.data());
        if (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') throw ParseError("expected a vertex id", offset + i);
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string format_tie_script(const TieScript& script) {
    std::string out;
    for (const auto& [a, b] : script) out += std::to_string(a) + " " + std::to_string(b) + "\n";
    return out;
}

TieScript parse_tie_script(std::string_view text) {
    TieScript out;
    std::size_t offset = 0;
    for (std::string_view line : script_lines(text)) {
        const std::size_t start = offset;
        offset += line.size() + 1;
        if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        const std::vector<long> v = parse_ints(line, start);
        if (v.empty()) continue;
        if (v.size() != 2) throw ParseError("a tie script line holds exactly two vertex ids", start);
        out.emplace_back(static_cast<int>(v[0]), static_cast<int>(v[1]));
    }
    return out;
}

std::string format_bisection_script(const BisectionScript& script) {
    std::string out;
    for (const BisectionStep& s : script) {
        out += std::to_string(s.u) + " " + std::to_string(s.v) + " :";
        for (int a : s.side_a) out += " " + std::to_string(a);
        out += "\n";
    }
    return out;
}

BisectionScript parse_bisection_script(std::string_view text) {
    BisectionScript out;
    std::size_t offset = 0;
    for (std::string_view line : script_lines(text)) {
        const std::size_t start = offset;
        offset += line.size() + 1;
        if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) {
            if (!parse_ints(line, start).empty()) throw ParseError("expected 'u v : side'", start);
            continue;
        }
        const std::vector<long> c = parse_ints(line.substr(0, colon), start);
        if (c.size() != 2) throw ParseError("expected two centers before ':'", start);
        BisectionStep step{static_cast<int>(c[0]), static_cast<int>(c[1]), {}};
        for (long a : parse_ints(line.substr(colon + 1), start + colon + 1)) step.side_a.push_back(static_cast<int>(a));
        out.push_back(std::move(step));
    }
    return out;
}

Family parse_family(std::string_view text) {
    if (text == "path") return Family::path;
    if (text == "spine") return Family::spine;
    if (text == "star") return Family::star;
    throw InvalidArgument("unknown instance family '" + std::string(text) + "'");
}

std::string_view to_string(Family family) {
    switch (family) {
        case Family::path: return "path";
        case Family::spine: return "spine";
        case Family::star: return "star";
    }
    return "?";
}

namespace {

struct Instance {
    WeightedGraph graph;
    double bound = 0.0;
};

Instance build(Family family, std::size_t size) {
    switch (family) {
        case Family::path: {
            const auto n = static_cast<double>(size);
            return {make_path(size), n * std::log2(n)};
        }
        case Family::spine: {
            WeightedGraph g = make_spine(size);
            const auto n = static_cast<double>(g.size());
            return {std::move(g), 3.0 * std::pow(n, 4.0 / 3.0)};
        }
        case Family::star: {
            const auto n = static_cast<double>(size);
            const double w = n * n * n;
            return {make_star(size, w), n * w};
        }
    }
    throw InvalidArgument("unknown family");
}

ClusterTree run_algorithm(Family family, std::string_view algo, const WeightedGraph& g, std::size_t size,
                          std::uint64_t seed) {
    const Mode mode = g.mode();
    auto linkage_run = [&](LinkageKind kind, std::optional<MergeRule> merge, TieScript script) {
        LinkagePolicy policy{kind, mode, merge, std::move(script)};
        return linkage(g, policy).tree;
    };
    auto no_script = [&]() -> ClusterTree {
        throw InvalidArgument("no adversarial script for " + std::string(algo) + " on the " +
                              std::string(to_string(family)) + " family");
    };
    if (algo == "single") return linkage_run(LinkageKind::single, std::nullopt, {});
    if (algo == "complete") return linkage_run(LinkageKind::complete, std::nullopt, {});
    if (algo == "average") return linkage_run(LinkageKind::average, std::nullopt, {});
    if (algo == "average-random") {
        LinkagePolicy policy{LinkageKind::average, mode, std::nullopt, {}};
        policy.script = random_tie_script(g, policy, seed);
        return linkage(g, policy).tree;
    }
    if (algo == "complete-adversarial") {
        if (family == Family::path) return linkage_run(LinkageKind::complete, std::nullopt, path_complete_linkage_script(size));
        // Complete linkage as the worst-case argument runs it: the pair at maximum distance merges.
        if (family == Family::star) return linkage_run(LinkageKind::complete, MergeRule::max_link, {});
        return no_script();
    }
    if (algo == "single-adversarial") {
        if (family == Family::star) return linkage_run(LinkageKind::single, std::nullopt, star_single_linkage_script(size));
        return no_script();
    }
    if (algo == "average-adversarial") {
        if (family == Family::spine) return linkage_run(LinkageKind::average, std::nullopt, spine_average_linkage_script(size));
        return no_script();
    }
    if (algo == "bisect2c") return bisection_two_center(g, mode);
    if (algo == "bisect2c-adversarial") {
        if (family == Family::star) return bisection_two_center(g, mode, star_bisection_script(size));
        return no_script();
    }
    if (algo == "sparsest-exact") {
        CutFinder finder;
        return recursive_cut_tree(g, finder);
    }
    if (algo == "densest-ls") {
        if (mode != Mode::dissimilarity) throw InvalidArgument("densest-ls needs a dissimilarity family");
        return recursive_densest_cut_tree(g, 0.1).tree;
    }
    throw InvalidArgument("unknown algorithm '" + std::string(algo) + "'");
}

}  // namespace

std::vector<RatioRow> ratio_experiment(Family family, std::string_view algorithm, std::span<const std::size_t> sizes,
                                       std::span<const std::uint64_t> seeds, bool oracle) {
    std::vector<RatioRow> rows;
    const std::uint64_t default_seed[] = {0};
    if (seeds.empty()) seeds = default_seed;
    for (std::size_t size : sizes) {
        const Instance inst = build(family, size);
        const CostFunction cf = CostFunction::dasgupta(std::max<std::size_t>(inst.graph.size(), 2));
        double reference = inst.bound;
        if (oracle) reference = exact_opt(cf, inst.graph, objective_direction(inst.graph.mode())).value;
        for (std::uint64_t seed : seeds) {
            const auto t0 = std::chrono::steady_clock::now();
            const ClusterTree t = run_algorithm(family, algorithm, inst.graph, size, seed);
            const auto t1 = std::chrono::steady_clock::now();
            RatioRow r;
            r.family = std::string(to_string(family));
            r.size = size;
            r.n = inst.graph.size();
            r.seed = seed;
            r.algorithm = std::string(algorithm);
            r.objective = evaluate(cf, inst.graph, t).total;
            r.reference = reference;
            r.ratio = reference != 0.0 ? r.objective / reference : 0.0;
            r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

}  // namespace hicluster
