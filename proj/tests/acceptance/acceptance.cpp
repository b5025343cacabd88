// Acceptance checks 1-11. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. `acceptance 3 8` runs a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "all_trees.hpp"
#include "fixtures.hpp"
#include "hicluster/divisive.hpp"
#include "hicluster/ground_truth.hpp"
#include "hicluster/hsbm.hpp"
#include "hicluster/instances.hpp"
#include "hicluster/io.hpp"
#include "hicluster/linkage.hpp"
#include "hicluster/objectives.hpp"
#include "hicluster/oracle.hpp"
#include "hicluster/random.hpp"

using namespace hicluster;

namespace {

// Tolerances.
constexpr double kRelTol = 1e-9;            // fractional g tables (criterion 1)
constexpr double kAvgBoundTol = 1e-9;       // criterion 4
constexpr double kDensestBoundTol = 1e-6;   // criterion 5
constexpr double kRobustTol = 1e-9;         // criterion 7
constexpr double kHsbmCostSlack = 1.02;     // criterion 8
constexpr double kHsbmMinRate = 0.9;        // criterion 8
constexpr double kMonteCarloSigmas = 3.0;   // criterion 9
constexpr double kLcaTol = 1e-9;            // criterion 11

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string failure;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) failure = what;
        pass = pass && ok;
    }
};

const CostFunction& dasgupta() {
    static const CostFunction d = CostFunction::dasgupta();
    return d;
}

double cost(const CostFunction& cf, const WeightedGraph& g, const ClusterTree& t) { return evaluate(cf, g, t).total; }

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

GeneratingTree ground_truth_tree(std::uint64_t seed, std::size_t n, Mode mode, bool strict) {
    GeneratingTreeOptions opt;
    opt.mode = mode;
    opt.strict = strict;
    opt.max_step = 2;  // small steps make weight ties common
    opt.shape = static_cast<TreeShape>(seed % 3);
    return random_generating_tree(n, opt, seed);
}

// Same graph with vertex v renamed perm[v]; used as an alternative tie policy.
WeightedGraph relabel(const WeightedGraph& g, const std::vector<int>& perm) {
    WeightedGraph out(g.size(), g.mode());
    for (int u = 0; u < static_cast<int>(g.size()); ++u)
        for (int v = u + 1; v < static_cast<int>(g.size()); ++v) out.set_weight(perm[u], perm[v], g.weight(u, v));
    return out;
}

std::vector<int> random_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    Rng rng(seed);
    rng.shuffle(std::span<int>(p));
    return p;
}

CostFunction squared_base(std::size_t n_max) {
    std::vector<double> base;
    for (std::size_t i = 1; i < n_max; ++i) base.push_back(double(i + 1) * double(i + 1));
    return CostFunction::from_base_sequence(base, n_max, "squared");
}

CostFunction doubled_base(std::size_t n_max) {
    std::vector<double> base;
    for (std::size_t i = 1; i < n_max; ++i) base.push_back(2.0 * double(i + 1));
    return CostFunction::from_base_sequence(base, n_max, "doubled");
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const CostFunction cfs[] = {CostFunction::dasgupta(16), squared_base(16), doubled_base(16)};
    std::size_t inputs = 0, with_ties = 0, trees_checked = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 2 + seed % 7;
        const GeneratingTree gt = ground_truth_tree(seed, n, Mode::similarity, seed % 2 == 0);
        const WeightedGraph g = realize(gt);
        ++inputs;
        with_ties += !gt.strict();
        for (const CostFunction& cf : cfs) {
            const double opt = exact_opt(cf, g, Direction::minimize).value;
            const GeneratingSpectrum s = generating_spectrum(cf, g);
            const std::string where = cf.name() + " seed " + std::to_string(seed);
            o.require(s.generating_count > 0, where + ": no generating tree found");
            o.require(close(s.generating_min, opt, kRelTol) && close(s.generating_max, opt, kRelTol),
                      where + ": a generating tree misses OPT");
            if (s.other_count > 0)
                o.require(s.other_min > opt && !close(s.other_min, opt, kRelTol),
                          where + ": a non-generating tree reaches OPT");
            // Tree-by-tree pass, independent of the aggregated spectrum.
            if (n <= 7) {
                std::vector<int> labels(n);
                std::iota(labels.begin(), labels.end(), 0);
                for (const ClusterTree& t : fixtures::all_trees(labels)) {
                    const double c = cost(cf, g, t);
                    ++trees_checked;
                    if (is_generating(t, g))
                        o.require(close(c, opt, kRelTol), where + ": explicit generating tree misses OPT");
                    else
                        o.require(c > opt && !close(c, opt, kRelTol), where + ": explicit non-generating tree at OPT");
                }
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 120, "runtime over 2 minutes");
    o.detail = std::to_string(inputs) + " inputs (" + std::to_string(with_ties) + " with ties), 3 objectives, " +
               std::to_string(trees_checked) + " trees enumerated one by one, " +
               fmt("%.1fs", secs);
    return o;
}

Outcome criterion2() {
    Outcome o;
    const double kappa[] = {0, 0, 2, 8, 20, 40, 70, 112, 168};
    for (std::size_t n = 2; n <= 8; ++n) {
        const TreeCostSpectrum s = enumerate_tree_costs(dasgupta(), unit_clique(n));
        o.require(s.distinct_exact && s.distinct_count == 1, "K_" + std::to_string(n) + " has several tree costs");
        o.require(s.min == kappa[n] && s.max == kappa[n], "K_" + std::to_string(n) + " cost differs from kappa");
        o.require(dasgupta().kappa(n) == kappa[n], "kappa(" + std::to_string(n) + ") differs from the recurrence");
    }
    o.detail = "n = 2..8, costs 2 8 20 40 70 112 168";
    return o;
}

Outcome criterion3() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const std::size_t n = 3 + seed % 12;
        const WeightedGraph g = random_graph(n, {Mode::similarity, 5, 0.7}, derive_seed(3, seed));
        CutFinder f;
        const double c = cost(dasgupta(), g, recursive_cut_tree(g, f));
        const double opt = exact_opt(dasgupta(), g, Direction::minimize).value;
        o.require(c >= opt, "cost below OPT at seed " + std::to_string(seed));
        o.require(c <= 6.75 * opt, "ratio above 6.75 at seed " + std::to_string(seed));
        if (opt > 0) worst = std::max(worst, c / opt);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 600, "runtime over 10 minutes");
    o.detail = "500 graphs n <= 14, max ratio " + fmt("%.4f", worst) + ", " + fmt("%.1fs", secs);
    return o;
}

Outcome criterion4() {
    Outcome o;
    double min_bound_ratio = INFINITY, min_opt_ratio = INFINITY;
    std::size_t small = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const std::size_t n = 3 + seed % 38;
        const WeightedGraph g = random_graph(n, {Mode::dissimilarity, 0, 1.0}, derive_seed(4, seed));
        const ValueBoundCheck c = average_linkage_value_bound_check(g);
        o.require(c.value >= c.bound - kAvgBoundTol, "below n*sum(w)/2 at seed " + std::to_string(seed));
        min_bound_ratio = std::min(min_bound_ratio, c.value / c.bound);
        if (n <= 14) {
            ++small;
            const double opt = exact_opt(dasgupta(), g, Direction::maximize).value;
            o.require(c.value >= opt / 2, "below OPT/2 at seed " + std::to_string(seed));
            min_opt_ratio = std::min(min_opt_ratio, c.value / opt);
        }
    }
    o.detail = "1000 graphs n in [3,40], min val/bound " + fmt("%.4f", min_bound_ratio) + "; " +
               std::to_string(small) + " with n <= 14, min val/OPT " + fmt("%.4f", min_opt_ratio);
    return o;
}

Outcome criterion5() {
    Outcome o;
    std::size_t splits = 0, max_moves = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const std::size_t n = 2 + seed % 29;
        const WeightedGraph g = random_graph(n, {Mode::dissimilarity, 0, 1.0}, derive_seed(5, seed));
        for (double eps : {0.1, 0.25}) {
            const DensestTreeResult r = recursive_densest_cut_tree(g, eps);
            const double val = cost(dasgupta(), g, r.tree);
            o.require(val >= (2.0 * double(n) / 3.0) * (1 - eps) * g.total_weight() - kDensestBoundTol,
                      "value bound fails at seed " + std::to_string(seed));
            for (const DensestSplitRecord& s : r.splits) {
                ++splits;
                const double a = double(s.cut.side_a.size()), b = double(s.cut.side_b.size());
                const double wab = cut_weight(g, s.cut.side_a, s.cut.side_b);
                const double wa = inner_weight(g, s.cut.side_a), wb = inner_weight(g, s.cut.side_b);
                o.require((a + b) * wab >= 2 * (1 - eps) * (b * wa + a * wb) - kDensestBoundTol,
                          "split inequality fails at seed " + std::to_string(seed));
                const std::size_t m = s.vertices.size();
                const auto bound = static_cast<std::size_t>(
                                       std::ceil(std::log(double(m)) / std::log(1 + eps / double(m)))) + 1;
                o.require(s.search.moves <= bound, "iteration bound exceeded at seed " + std::to_string(seed));
                max_moves = std::max(max_moves, s.search.moves);
            }
        }
    }
    o.detail = "300 graphs x eps {0.1,0.25}, " + std::to_string(splits) + " splits checked, max moves " +
               std::to_string(max_moves);
    return o;
}

Outcome criterion6() {
    Outcome o;
    const LinkageKind kinds[] = {LinkageKind::single, LinkageKind::complete, LinkageKind::average};
    std::size_t runs = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 2 + seed % 11;
        const Mode mode = seed % 2 ? Mode::dissimilarity : Mode::similarity;
        const WeightedGraph g = realize(ground_truth_tree(seed, n, mode, seed % 4 < 2));
        const double opt = exact_opt(dasgupta(), g, objective_direction(mode)).value;
        const WeightedGraph shuffled = relabel(g, random_permutation(n, seed));
        const std::string at = " at seed " + std::to_string(seed);
        auto hit = [&](const WeightedGraph& h, const ClusterTree& t, const std::string& who) {
            ++runs;
            o.require(cost(dasgupta(), h, t) == opt, who + " misses OPT" + at);
        };

        for (LinkageKind k : kinds) {
            LinkagePolicy p{k, mode, {}, {}};
            hit(g, linkage(g, p).tree, std::string(to_string(k)) + " (lowest)");
            p.script = random_tie_script(g, p, derive_seed(seed, 6));
            hit(g, linkage(g, p).tree, std::string(to_string(k)) + " (random ties)");
        }
        CutFinder f;
        f.kind = CutFinderKind::ground_truth_fast;
        hit(g, recursive_cut_tree(g, f), "gt-fast cut");
        hit(shuffled, recursive_cut_tree(shuffled, f), "gt-fast cut (relabelled)");

        const WeightedGraph strict = realize(ground_truth_tree(seed + 1000, n, mode, true));
        const double strict_opt = exact_opt(dasgupta(), strict, objective_direction(mode)).value;
        const WeightedGraph strict_shuffled = relabel(strict, random_permutation(n, seed + 1));
        ++runs;
        o.require(cost(dasgupta(), strict, bisection_two_center(strict, mode)) == strict_opt,
                  "bisection 2-center misses OPT" + at);
        ++runs;
        o.require(cost(dasgupta(), strict_shuffled, bisection_two_center(strict_shuffled, mode)) == strict_opt,
                  "bisection 2-center (relabelled) misses OPT" + at);

        if (mode == Mode::similarity) {
            hit(g, fast_pivot(g, {derive_seed(seed, 1), 0.0}), "fast pivot");
            hit(g, fast_pivot(g, {derive_seed(seed, 2), 0.0}), "fast pivot (second seed)");
        }
    }
    o.detail = "200 inputs n <= 12 (both modes, ties), " + std::to_string(runs) + " runs";
    return o;
}

Outcome criterion7() {
    Outcome o;
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 2 + seed % 11;
        const WeightedGraph g = realize(ground_truth_tree(seed, n, Mode::similarity, seed % 2 == 0));
        for (double delta : {1.05, 1.2, 1.5}) {
            const WeightedGraph p = perturb(g, {delta, derive_seed(seed, 7)});
            const double c = cost(dasgupta(), p, robust_pivot(p, delta));
            const double opt = exact_opt(dasgupta(), p, Direction::minimize).value;
            o.require(c <= delta * opt + kRobustTol, "robust pivot above delta*OPT at seed " + std::to_string(seed));
            worst = std::max(worst, c / opt);
        }
    }
    o.detail = "200 inputs x 3 deltas, max cost/OPT " + fmt("%.4f", worst);
    return o;
}

HsbmParams hsbm_params(std::size_t n, std::size_t k, const char* top, std::uint64_t seed) {
    HsbmParams h;
    h.k = k;
    h.n = n;
    h.alpha = 1.0;
    h.f.assign(k, 1.0 / double(k));
    h.f.back() = 1.0 - std::accumulate(h.f.begin(), h.f.end() - 1, 0.0);
    h.p.assign(k, 0.9);
    h.top_tree = parse_gentree(std::string("hicluster-gentree 1 sim\n") + top);
    h.seed = seed;
    return h;
}

Outcome criterion8() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    struct Config {
        const char* name;
        std::size_t k;
        const char* top;
    };
    const Config configs[] = {{"k=2 cross 0.5", 2, "(0,1):0.5"},
                              {"k=2 cross 0.1", 2, "(0,1):0.1"},
                              {"k=3 nested", 3, "((0,1):0.5,2):0.1"}};
    const CostFunction cf = CostFunction::dasgupta(4096);
    std::string summary;
    for (const Config& c : configs) {
        std::size_t recovered = 0, topology = 0;
        double worst = 0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const HsbmParams h = hsbm_params(300, c.k, c.top, derive_seed(8, seed));
            const HsbmSample s = sample(h);
            const RecoveryResult r = recover_tree(s.graph, c.k, cf, 0, seed);
            recovered += same_partition(r.clusters, s.labels);
            if (c.k == 3) {
                // The third cluster must split off at the root.
                VertexSet third;
                for (int v = 0; v < 300; ++v)
                    if (s.labels[v] == 2) third.push_back(v);
                const auto& root = r.tree.node(r.tree.root());
                topology += r.tree.leaves(root.left) == third || r.tree.leaves(root.right) == third;
            }
            const double truth = cost(cf, s.graph, expected_graph(h, s.labels).tree.tree);
            const double ratio = cost(cf, s.graph, r.tree) / truth;
            worst = std::max(worst, ratio);
            o.require(ratio <= kHsbmCostSlack, std::string(c.name) + ": cost ratio above 1.02");
        }
        const double rate = double(recovered) / 20.0;
        o.require(rate >= kHsbmMinRate, std::string(c.name) + ": recovery rate below 0.9");
        summary += std::string(summary.empty() ? "" : "; ") + c.name + " rate " + fmt("%.2f", rate) +
                   " max cost ratio " + fmt("%.4f", worst);
        if (c.k == 3) {
            o.require(topology >= 18, "k=3 nested: top-tree topology recovered in fewer than 18 of 20 seeds");
            summary += " topology " + std::to_string(topology) + "/20";
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 300, "runtime over 5 minutes");
    o.detail = summary + ", " + fmt("%.1fs", secs);
    return o;
}

Outcome criterion9() {
    Outcome o;
    struct Config {
        std::size_t n, k;
        const char* top;
        double alpha;
    };
    const Config configs[] = {{10, 2, "(0,1):0.3", 0.8}, {12, 3, "((0,1):0.5,2):0.1", 1.0}};
    double worst = 0;
    for (const Config& c : configs) {
        HsbmParams h = hsbm_params(c.n, c.k, c.top, 9);
        h.alpha = c.alpha;
        h.p[0] = 0.7;
        const std::vector<int> labels = expected_labels(h);
        const ExpectedGraph e = expected_graph(h, labels);
        for (std::uint64_t t = 0; t < 5; ++t) {
            const ClusterTree tree = fixtures::random_tree(c.n, derive_seed(91, t + 10 * c.k));
            double sum = 0, sq = 0;
            const int reps = 2000;
            for (int i = 0; i < reps; ++i) {
                const double v = cost(dasgupta(), sample_with_labels(h, labels, derive_seed(t + 100 * c.k, i)).graph, tree);
                sum += v;
                sq += v * v;
            }
            const double mean = sum / reps;
            const double se = std::sqrt(std::max(0.0, sq / reps - mean * mean) / (reps - 1));
            const double z = std::abs(mean - cost(dasgupta(), e.graph, tree)) / se;
            worst = std::max(worst, z);
            o.require(z <= kMonteCarloSigmas, "Monte-Carlo mean off by more than 3 standard errors");
        }
    }
    o.detail = "2 instances x 5 trees x 2000 samples, max |z| " + fmt("%.3f", worst);
    return o;
}

Outcome criterion10() {
    Outcome o;
    std::string path_ratios;
    double prev = 0;
    for (std::size_t n : {8, 16, 32, 64}) {
        const WeightedGraph g = make_path(n);
        LinkagePolicy p{LinkageKind::complete, Mode::similarity, {}, path_complete_linkage_script(n)};
        const double ratio = cost(dasgupta(), g, linkage(g, p).tree) / (double(n) * std::log2(double(n)));
        o.require(ratio > prev, "path ratio not strictly increasing at n = " + std::to_string(n));
        prev = ratio;
        path_ratios += (path_ratios.empty() ? "" : " ") + fmt("%.3f", ratio);
    }
    std::string star;
    for (std::size_t n : {5, 10, 20}) {
        const double w = double(n) * double(n) * double(n);
        const WeightedGraph s = make_star(n, w);
        const std::string at = " at n = " + std::to_string(n);
        o.require(cost(dasgupta(), s, star_reference_tree(n)) >= double(n) * w, "u-split tree below nW" + at);
        LinkagePolicy single{LinkageKind::single, Mode::dissimilarity, {}, star_single_linkage_script(n)};
        LinkagePolicy complete{LinkageKind::complete, Mode::dissimilarity, MergeRule::max_link, {}};
        const double vs = cost(dasgupta(), s, linkage(s, single).tree);
        const double vc = cost(dasgupta(), s, linkage(s, complete).tree);
        const double vb = cost(dasgupta(), s, bisection_two_center(s, Mode::dissimilarity, star_bisection_script(n)));
        o.require(vs <= 4 * w, "single linkage above 4W" + at);
        o.require(vc <= 4 * w, "complete linkage above 4W" + at);
        o.require(vb <= 4 * w, "bisection 2-center above 4W" + at);
        star += (star.empty() ? "" : " ") + fmt("%.3f", std::max({vs, vc, vb}) / w);
    }
    o.detail = "path cost/(n log n) " + path_ratios + "; star max val/W " + star;
    return o;
}

Outcome criterion11() {
    Outcome o;
    double worst = 0;
    const CostFunction sq = squared_base(64);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const std::size_t n = 1 + seed % 64;
        const WeightedGraph g = random_graph(n, {seed % 2 ? Mode::dissimilarity : Mode::similarity, 0, 0.8},
                                             derive_seed(11, seed));
        const ClusterTree t = fixtures::random_tree(n, derive_seed(12, seed));
        const CostFunction& cf = seed % 3 == 0 ? sq : dasgupta();
        const double a = evaluate(cf, g, t).total, b = evaluate_via_lca(cf, g, t);
        const double rel = std::abs(a - b) / std::max(1.0, std::abs(a));
        worst = std::max(worst, rel);
        o.require(rel <= kLcaTol, "evaluators disagree at seed " + std::to_string(seed));
    }
    o.detail = "1000 pairs n <= 64, max relative gap " + fmt("%.2e", worst);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,  criterion4,
                                                            criterion5, criterion6, criterion7,  criterion8,
                                                            criterion9, criterion10, criterion11};
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.failure = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("criterion %2d: %s  %s%s%s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    o.pass ? "" : "  -- ", o.pass ? "" : o.failure.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
