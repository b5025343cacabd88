#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hicluster/divisive.hpp"
#include "hicluster/errors.hpp"
#include "hicluster/ground_truth.hpp"
#include "hicluster/hsbm.hpp"
#include "hicluster/instances.hpp"
#include "hicluster/io.hpp"
#include "hicluster/linkage.hpp"
#include "hicluster/objectives.hpp"
#include "hicluster/oracle.hpp"
#include "hicluster/random.hpp"

using namespace hicluster;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;
constexpr int kExitInvariant = 4;

struct Global {
    bool json = false;
};

std::size_t env_max_n(std::size_t fallback) {
    const char* v = std::getenv("HICLUSTER_MAX_N");
    if (!v || !*v) return fallback;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v, &end, 10);
    if (*end != '\0' || x == 0) throw InvalidArgument("HICLUSTER_MAX_N must be a positive integer");
    return static_cast<std::size_t>(x);
}

WeightedGraph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

// A tree argument is either literal text "(...)" or a file holding one.
ClusterTree load_tree(const std::string& arg) {
    const std::string text = !arg.empty() && arg.front() == '(' ? arg : read_file(arg);
    std::string_view body = text;
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
    return parse_tree(body).tree;
}

CostFunction load_objective(const std::string& spec, std::size_t n) {
    if (spec == "dasgupta") return CostFunction::dasgupta(std::max<std::size_t>(n, CostFunction::kDefaultMaxN));
    if (spec.rfind("file:", 0) == 0) return parse_cost_function(read_file(spec.substr(5)));
    throw InvalidArgument("unknown objective '" + spec + "' (use dasgupta or file:<path>)");
}

Mode parse_mode_arg(const std::string& s) {
    if (s == "sim" || s == "similarity") return Mode::similarity;
    if (s == "dis" || s == "dissimilarity") return Mode::dissimilarity;
    throw InvalidArgument("mode must be sim or dis");
}

std::uint64_t parse_seed(const std::string& s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InvalidArgument("bad seed '" + s + "'");
    return v;
}

std::string real(double x) { return format_real(x); }

// Writes `content` to `out` (printing path and hash) or to stdout.
void emit(const Global& gl, const std::string& out, const std::string& content, const std::string& kind) {
    if (out.empty()) {
        std::cout << content;
        return;
    }
    write_file(out, content);
    if (gl.json) {
        json j{{"schema", 1}, {"kind", kind}, {"path", out}, {"hash", content_hash_hex(content)}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << out << " " << content_hash_hex(content) << "\n";
    }
}

std::string format_labels(std::span<const int> labels, std::size_t k) {
    std::string s = "hicluster-labels 1 " + std::to_string(labels.size()) + " " + std::to_string(k) + "\n";
    for (int c : labels) s += std::to_string(c) + "\n";
    return s;
}

json split_json(const Cut& c) { return json{{"a", c.side_a}, {"b", c.side_b}}; }

// ---------------------------------------------------------------- gen

void add_gen(CLI::App& app, Global& gl) {
    auto* gen = app.add_subcommand("gen", "Generate instances, scripts and configs");
    gen->require_subcommand(1);
    auto out = std::make_shared<std::string>();

    auto* path = gen->add_subcommand("path", "Unit path");
    auto pn = std::make_shared<std::size_t>(4);
    path->add_option("--n", *pn, "vertex count")->required();
    path->add_option("-o,--output", *out, "output file");
    path->callback([&gl, out, pn] { emit(gl, *out, format_graph(make_path(*pn)), "graph"); });

    auto* spine = gen->add_subcommand("spine", "Spine of paths (k^3 + k vertices)");
    auto sk = std::make_shared<std::size_t>(2);
    spine->add_option("--k", *sk, "spine length")->required();
    spine->add_option("-o,--output", *out, "output file");
    spine->callback([&gl, out, sk] { emit(gl, *out, format_graph(make_spine(*sk)), "graph"); });

    auto* star = gen->add_subcommand("star", "Heavy-edge star (dissimilarity)");
    auto sn = std::make_shared<std::size_t>(5);
    auto sw = std::make_shared<double>(0.0);
    star->add_option("--n", *sn, "vertex count")->required();
    star->add_option("--weight", *sw, "heavy weight W (default n^3)");
    star->add_option("-o,--output", *out, "output file");
    star->callback([&gl, out, sn, sw] {
        const double w = *sw > 0 ? *sw : std::pow(static_cast<double>(*sn), 3);
        emit(gl, *out, format_graph(make_star(*sn, w)), "graph");
    });

    auto* ultra = gen->add_subcommand("ultrametric", "Random ground-truth input");
    struct UltraArgs {
        std::size_t n = 8;
        bool strict = false;
        std::string mode = "sim", shape = "random", tree_out;
        std::uint64_t seed = 0;
        int root_max = 4, max_step = 3;
    };
    auto ua = std::make_shared<UltraArgs>();
    ultra->add_option("--n", ua->n, "vertex count")->required();
    ultra->add_flag("--strict", ua->strict, "strictly monotone weights");
    ultra->add_option("--mode", ua->mode, "sim or dis");
    ultra->add_option("--shape", ua->shape, "random, balanced or caterpillar");
    ultra->add_option("--seed", ua->seed, "seed");
    ultra->add_option("--root-max", ua->root_max, "largest root weight");
    ultra->add_option("--max-step", ua->max_step, "largest parent-child weight step");
    ultra->add_option("--tree-out", ua->tree_out, "also write the generating tree here");
    ultra->add_option("-o,--output", *out, "output file");
    ultra->callback([&gl, out, ua] {
        GeneratingTreeOptions opt;
        opt.mode = parse_mode_arg(ua->mode);
        opt.strict = ua->strict;
        opt.root_max = ua->root_max;
        opt.max_step = ua->max_step;
        if (ua->shape == "random") opt.shape = TreeShape::random;
        else if (ua->shape == "balanced") opt.shape = TreeShape::balanced;
        else if (ua->shape == "caterpillar") opt.shape = TreeShape::caterpillar;
        else throw InvalidArgument("shape must be random, balanced or caterpillar");
        const GeneratingTree gt = random_generating_tree(ua->n, opt, ua->seed);
        if (!ua->tree_out.empty()) write_file(ua->tree_out, format_gentree(gt));
        emit(gl, *out, format_graph(realize(gt)), "graph");
    });

    auto* rnd = gen->add_subcommand("random", "Arbitrary random graph");
    struct RandomArgs {
        std::size_t n = 8;
        std::string mode = "sim";
        std::uint64_t seed = 0;
        int max_weight = 0;
        double density = 1.0;
    };
    auto ra = std::make_shared<RandomArgs>();
    rnd->add_option("--n", ra->n, "vertex count")->required();
    rnd->add_option("--mode", ra->mode, "sim or dis");
    rnd->add_option("--seed", ra->seed, "seed");
    rnd->add_option("--max-weight", ra->max_weight, "integer weights in [1, M]; 0 for reals in (0, 1]");
    rnd->add_option("--density", ra->density, "edge probability");
    rnd->add_option("-o,--output", *out, "output file");
    rnd->callback([&gl, out, ra] {
        RandomGraphOptions opt{parse_mode_arg(ra->mode), ra->max_weight, ra->density};
        emit(gl, *out, format_graph(random_graph(ra->n, opt, ra->seed)), "graph");
    });

    auto* hs = gen->add_subcommand("hsbm", "Sample a hierarchical stochastic block model");
    struct HsbmArgs {
        std::string config, labels;
        std::optional<std::uint64_t> seed;
    };
    auto ha = std::make_shared<HsbmArgs>();
    hs->add_option("--config", ha->config, "config file")->required();
    hs->add_option("--seed", ha->seed, "seed (overrides the config)");
    hs->add_option("--labels", ha->labels, "hidden labels sidecar (default <output>.labels)");
    hs->add_option("-o,--output", *out, "output file");
    hs->callback([&gl, out, ha] {
        HsbmParams params = parse_hsbm_config(read_file(ha->config));
        if (ha->seed) params.seed = *ha->seed;
        const HsbmSample s = sample(params);
        std::string labels_path = ha->labels;
        if (labels_path.empty() && !out->empty()) labels_path = *out + ".labels";
        if (labels_path.empty()) throw InvalidArgument("gen hsbm writing to stdout needs --labels");
        write_file(labels_path, format_labels(s.labels, params.k));
        emit(gl, *out, format_graph(s.graph), "graph");
    });

    auto* ties = gen->add_subcommand("ties", "Adversarial tie-break script");
    struct TiesArgs {
        std::string family;
        std::size_t size = 0;
        bool bisection = false;
    };
    auto ta = std::make_shared<TiesArgs>();
    ties->add_option("--family", ta->family, "path, spine or star")->required();
    ties->add_option("--size", ta->size, "n (path, star) or k (spine)")->required();
    ties->add_flag("--bisection", ta->bisection, "star bisection script instead of a linkage script");
    ties->add_option("-o,--output", *out, "output file");
    ties->callback([&gl, out, ta] {
        const Family f = parse_family(ta->family);
        std::string text;
        if (ta->bisection) {
            if (f != Family::star) throw InvalidArgument("bisection scripts exist for the star family only");
            text = format_bisection_script(star_bisection_script(ta->size));
        } else if (f == Family::path) {
            text = format_tie_script(path_complete_linkage_script(ta->size));
        } else if (f == Family::spine) {
            text = format_tie_script(spine_average_linkage_script(ta->size));
        } else {
            text = format_tie_script(star_single_linkage_script(ta->size));
        }
        emit(gl, *out, text, "script");
    });
}

// ---------------------------------------------------------------- perturb

void add_perturb(CLI::App& app, Global& gl) {
    auto* cmd = app.add_subcommand("perturb", "Multiply every weight by a draw from [1, delta]");
    struct Args {
        std::string input, output;
        double delta = 1.0;
        std::uint64_t seed = 0;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("-i,--input", a->input, "graph file")->required();
    cmd->add_option("--delta", a->delta, "perturbation factor >= 1")->required();
    cmd->add_option("--seed", a->seed, "seed");
    cmd->add_option("-o,--output", a->output, "output file");
    cmd->callback([&gl, a] {
        emit(gl, a->output, format_graph(perturb(load_graph(a->input), {a->delta, a->seed})), "graph");
    });
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
    std::string input, output, algo = "average", mode, ties = "lowest", merge, cutfinder = "brute";
    std::string objective = "dasgupta", bisection_script;
    double epsilon = 0.1, delta = 1.0, tolerance = 0.0;
    std::uint64_t seed = 0;
    std::size_t k = 0, repetitions = 0;
    bool trace = false, per_node = false;
};

void run_cluster(const Global& gl, const ClusterArgs& a) {
    WeightedGraph g = load_graph(a.input);
    if (!a.mode.empty()) g.set_mode(parse_mode_arg(a.mode));
    const CostFunction cf = load_objective(a.objective, g.size());
    const std::size_t n = g.size();
    json stats = json::object();
    std::vector<json> trace;
    ClusterTree tree;

    auto need = [&](Mode m) {
        if (g.mode() != m) {
            throw InvalidArgument("--algo " + a.algo + " needs a " + std::string(to_string(m)) + " graph");
        }
    };

    const auto t0 = std::chrono::steady_clock::now();
    if (a.algo == "single" || a.algo == "complete" || a.algo == "average") {
        LinkagePolicy p;
        p.kind = parse_linkage_kind(a.algo);
        p.mode = g.mode();
        if (a.merge == "max") p.merge = MergeRule::max_link;
        else if (a.merge == "min") p.merge = MergeRule::min_link;
        else if (!a.merge.empty()) throw InvalidArgument("--merge must be max or min");
        if (a.ties.rfind("script:", 0) == 0) {
            p.script = parse_tie_script(read_file(a.ties.substr(7)));
        } else if (a.ties.rfind("random:", 0) == 0) {
            p.script = random_tie_script(g, p, parse_seed(a.ties.substr(7)));
        } else if (a.ties != "lowest") {
            throw InvalidArgument("--ties must be lowest, random:<seed> or script:<file>");
        }
        const LinkageResult r = linkage(g, p);
        tree = r.tree;
        if (a.trace)
            for (const MergeStep& s : r.trace) trace.push_back(json{{"a", s.a}, {"b", s.b}, {"link", s.link}});
        stats["merges"] = r.trace.size();
    } else if (a.algo == "sparsest") {
        CutFinder f;
        if (a.cutfinder == "brute") {
            f.kind = CutFinderKind::exact_brute;
            f.max_n = env_max_n(OracleLimits::kBruteCutDefault);
        } else if (a.cutfinder == "gt-fast") {
            f.kind = CutFinderKind::ground_truth_fast;
        } else if (a.cutfinder.rfind("plugin:", 0) == 0) {
            f.kind = CutFinderKind::plugin;
            f.command = a.cutfinder.substr(7);
        } else {
            throw InvalidArgument("--cutfinder must be brute, gt-fast or plugin:<cmd>");
        }
        tree = recursive_cut_tree(g, f);
        stats["cuts"] = f.stats.cuts;
    } else if (a.algo == "densest-ls") {
        need(Mode::dissimilarity);
        const DensestTreeResult r = recursive_densest_cut_tree(g, a.epsilon);
        tree = r.tree;
        std::size_t moves = 0;
        bool lemma = true, bound = true;
        for (const DensestSplitRecord& s : r.splits) {
            moves += s.search.moves;
            lemma = lemma && s.lemma_ok;
            bound = bound && s.search.moves <= s.search.iteration_bound;
            if (a.trace) trace.push_back(json{{"split", split_json(s.cut)}, {"moves", s.search.moves},
                                              {"lemma_ok", s.lemma_ok}});
        }
        stats["splits"] = r.splits.size();
        stats["moves"] = moves;
        stats["lemma_ok"] = lemma;
        stats["iteration_bound_ok"] = bound;
    } else if (a.algo == "bisect2c") {
        BisectionScript script;
        if (!a.bisection_script.empty()) script = parse_bisection_script(read_file(a.bisection_script));
        tree = bisection_two_center(g, g.mode(), script);
    } else if (a.algo == "pivot") {
        need(Mode::similarity);
        tree = fast_pivot(g, {a.seed, a.tolerance});
    } else if (a.algo == "robust") {
        need(Mode::similarity);
        tree = robust_pivot(g, a.delta);
    } else if (a.algo == "hsbm") {
        need(Mode::similarity);
        if (a.k == 0) throw InvalidArgument("--algo hsbm needs --k");
        const RecoveryResult r = recover_tree(g, a.k, cf, a.repetitions, a.seed);
        tree = r.tree;
        stats["repetitions"] = r.repetitions.size();
        stats["best_repetition"] = r.best_repetition;
        stats["projection_rank"] = r.projection_rank;
        stats["rank_deficient"] = r.rank_deficient;
        std::vector<std::size_t> sizes;
        for (const VertexSet& c : r.clusters) sizes.push_back(c.size());
        stats["cluster_sizes"] = sizes;
    } else {
        throw InvalidArgument("unknown --algo '" + a.algo + "'");
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!tree.spans_vertices(n)) throw InvariantError("algorithm returned a tree that does not span the graph");

    const ObjectiveReport rep = evaluate(cf, g, tree);
    const std::string text = serialize_tree(tree);
    if (!a.output.empty()) write_file(a.output, text + "\n");

    if (gl.json) {
        for (const json& t : trace) std::cout << t.dump() << "\n";
        json j{{"schema", 1},
               {"algo", a.algo},
               {"mode", to_string(g.mode())},
               {"n", n},
               {"tree", text},
               {"objective", rep.total},
               {"direction", g.mode() == Mode::similarity ? "minimize" : "maximize"},
               {"runtime_ms", ms},
               {"stats", stats}};
        if (a.per_node) j["per_node"] = rep.per_node;
        std::cout << j.dump() << "\n";
    } else {
        for (const json& t : trace) std::cout << t.dump() << "\n";
        std::cout << text << "\n" << "objective " << real(rep.total) << "\n";
    }
}

void add_cluster(CLI::App& app, Global& gl) {
    auto* cmd = app.add_subcommand("cluster", "Build a hierarchy with one of the algorithms");
    auto a = std::make_shared<ClusterArgs>();
    cmd->add_option("-i,--input", a->input, "graph file")->required();
    cmd->add_option("--algo", a->algo,
                    "single, complete, average, sparsest, densest-ls, bisect2c, pivot, robust or hsbm");
    cmd->add_option("--mode", a->mode, "sim or dis (default: the graph file's mode)");
    cmd->add_option("--ties", a->ties, "lowest, random:<seed> or script:<file>");
    cmd->add_option("--merge", a->merge, "max or min: which linkage value is merged");
    cmd->add_flag("--trace", a->trace, "emit merges or splits as JSON lines");
    cmd->add_option("--epsilon", a->epsilon, "local search epsilon");
    cmd->add_option("--delta", a->delta, "robust pivot delta");
    cmd->add_option("--tolerance", a->tolerance, "pivot bucket tolerance");
    cmd->add_option("--cutfinder", a->cutfinder, "brute, gt-fast or plugin:<cmd>");
    cmd->add_option("--objective", a->objective, "dasgupta or file:<path>");
    cmd->add_option("--bisection-script", a->bisection_script, "scripted 2-center steps");
    cmd->add_option("--seed", a->seed, "seed for pivot and hsbm");
    cmd->add_option("--k", a->k, "hsbm bottom clusters");
    cmd->add_option("--repetitions", a->repetitions, "hsbm repetitions (0 = default)");
    cmd->add_flag("--per-node", a->per_node, "include the per-node objective (JSON)");
    cmd->add_option("-o,--output", a->output, "write the tree here");
    cmd->callback([&gl, a] { run_cluster(gl, *a); });
}

// ---------------------------------------------------------------- eval / opt / check

void add_eval(CLI::App& app, Global& gl) {
    auto* cmd = app.add_subcommand("eval", "Objective of a tree on a graph");
    struct Args {
        std::string input, tree, objective = "dasgupta";
        bool per_node = false;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("-i,--input", a->input, "graph file")->required();
    cmd->add_option("-t,--tree", a->tree, "tree file or literal")->required();
    cmd->add_option("--objective", a->objective, "dasgupta or file:<path>");
    cmd->add_flag("--per-node", a->per_node, "per-node breakdown");
    cmd->callback([&gl, a] {
        const WeightedGraph g = load_graph(a->input);
        const ClusterTree t = load_tree(a->tree);
        if (!t.spans_vertices(g.size())) throw InvalidArgument("tree leaves must be exactly 0..n-1");
        const ObjectiveReport r = evaluate(load_objective(a->objective, g.size()), g, t);
        if (gl.json) {
            json j{{"schema", 1}, {"objective", r.total}};
            if (a->per_node) {
                json nodes = json::array();
                for (NodeId id : t.internal_nodes())
                    nodes.push_back(json{{"leaves", t.leaves(id)}, {"value", r.per_node[id]}});
                j["per_node"] = nodes;
            }
            std::cout << j.dump() << "\n";
            return;
        }
        std::cout << real(r.total) << "\n";
        if (a->per_node)
            for (NodeId id : t.internal_nodes()) {
                std::string leaves;
                for (int v : t.leaves(id)) leaves += (leaves.empty() ? "" : " ") + std::to_string(v);
                std::cout << "{" << leaves << "} " << real(r.per_node[id]) << "\n";
            }
    });
}

void add_opt(CLI::App& app, Global& gl) {
    auto* cmd = app.add_subcommand("opt", "Exact optimum by subset dynamic programming");
    struct Args {
        std::string input, objective = "dasgupta", direction;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("-i,--input", a->input, "graph file")->required();
    cmd->add_option("--objective", a->objective, "dasgupta or file:<path>");
    cmd->add_option("--direction", a->direction, "min or max (default from the graph mode)");
    cmd->callback([&gl, a] {
        const WeightedGraph g = load_graph(a->input);
        Direction d = objective_direction(g.mode());
        if (a->direction == "min") d = Direction::minimize;
        else if (a->direction == "max") d = Direction::maximize;
        else if (!a->direction.empty()) throw InvalidArgument("--direction must be min or max");
        const OptResult r =
            exact_opt(load_objective(a->objective, g.size()), g, d, env_max_n(OracleLimits::kExactOptDefault));
        if (gl.json) {
            std::cout << json{{"schema", 1}, {"opt", r.value}, {"tree", serialize_tree(r.tree)}}.dump() << "\n";
        } else {
            std::cout << real(r.value) << "\n" << serialize_tree(r.tree) << "\n";
        }
    });
}

void add_check(CLI::App& app, Global& gl) {
    auto* cmd = app.add_subcommand("check", "Generating-tree, ultrametric and admissibility checks");
    struct Args {
        std::string input, tree, objective = "dasgupta";
        bool generating = false, admissible = false, ultrametric = false;
        std::size_t n_max = 8;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("-i,--input", a->input, "graph file");
    cmd->add_option("-t,--tree", a->tree, "tree file or literal");
    cmd->add_option("--objective", a->objective, "dasgupta or file:<path>");
    cmd->add_option("--n-max", a->n_max, "largest clique for --admissible");
    auto* g1 = cmd->add_flag("--generating", a->generating, "does the tree generate the graph");
    auto* g2 = cmd->add_flag("--admissible", a->admissible, "is the objective admissible");
    auto* g3 = cmd->add_flag("--ultrametric", a->ultrametric, "is the graph a ground-truth input");
    g1->excludes(g2)->excludes(g3);
    g2->excludes(g3);
    cmd->callback([&gl, a] {
        json j{{"schema", 1}};
        std::string verdict, detail;
        if (a->generating) {
            if (a->input.empty() || a->tree.empty()) throw InvalidArgument("--generating needs --input and --tree");
            const WeightedGraph g = load_graph(a->input);
            const ClusterTree t = load_tree(a->tree);
            if (!t.spans_vertices(g.size())) throw InvalidArgument("tree leaves must be exactly 0..n-1");
            const GeneratingVerdict v = is_generating(t, g);
            verdict = v.generating ? "yes" : "no";
            j["check"] = "generating";
            if (v.generating) {
                std::vector<double> w(t.node_count(), 0.0);
                for (NodeId id : t.internal_nodes()) w[id] = v.node_weight[id];
                detail = serialize_tree(t, w);
                j["weighted_tree"] = detail;
            } else {
                detail = v.witness;
                j["witness"] = json{{"node_leaves", t.leaves(v.witness_node)},
                                    {"first", v.witness_first},
                                    {"second", v.witness_second},
                                    {"text", v.witness}};
            }
        } else if (a->admissible) {
            const AdmissibilityReport r = check_admissibility(load_objective(a->objective, a->n_max), a->n_max);
            verdict = r.admissible() ? "yes" : "no";
            j["check"] = "admissible";
            j["clique_invariance"] = r.clique_invariance.pass;
            j["symmetry"] = r.symmetry.pass;
            j["monotonicity"] = r.monotonicity.pass;
            for (const ConditionResult* c : {&r.clique_invariance, &r.symmetry, &r.monotonicity})
                if (!c->pass) detail += (detail.empty() ? "" : "; ") + c->witness;
            if (r.cheap_witness) {
                j["cheap_tree"] = serialize_tree(*r.cheap_witness);
                j["costly_tree"] = serialize_tree(*r.costly_witness);
                detail += " cheap " + serialize_tree(*r.cheap_witness) + " costly " +
                          serialize_tree(*r.costly_witness);
            }
            if (!detail.empty()) j["witness"] = detail;
        } else if (a->ultrametric) {
            if (a->input.empty()) throw InvalidArgument("--ultrametric needs --input");
            j["check"] = "ultrametric";
            try {
                const GeneratingTree gt = minimal_representation(load_graph(a->input));
                verdict = "yes";
                detail = format_gentree(gt);
                while (!detail.empty() && detail.back() == '\n') detail.pop_back();
                j["gentree"] = detail;
            } catch (const NotUltrametricError& e) {
                verdict = "no";
                detail = e.what();
                j["witness"] = json{{"x", e.x()}, {"y", e.y()}, {"z", e.z()}, {"text", e.what()}};
            }
        } else {
            throw InvalidArgument("check needs one of --generating, --admissible, --ultrametric");
        }
        j["verdict"] = verdict;
        if (gl.json) std::cout << j.dump() << "\n";
        else std::cout << verdict << (detail.empty() ? "" : "\n" + detail) << "\n";
    });
}

// ---------------------------------------------------------------- bench

struct BenchRow {
    std::string instance;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string algo;
    double objective = 0, reference = 0, ratio = 0, wall_ms = 0;
    bool ok = true;
};

std::vector<std::uint64_t> seed_list(const json& e) {
    const json& s = e.at("seeds");
    if (s.is_number_integer()) {
        std::vector<std::uint64_t> out(s.get<std::size_t>());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
        return out;
    }
    return s.get<std::vector<std::uint64_t>>();
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void bench_ratio(const json& e, std::vector<BenchRow>& rows) {
    const Family f = parse_family(e.at("family").get<std::string>());
    const std::string algo = e.at("algorithm").get<std::string>();
    const auto sizes = e.at("sizes").get<std::vector<std::size_t>>();
    const auto seeds = e.contains("seeds") ? seed_list(e) : std::vector<std::uint64_t>{0};
    for (const RatioRow& r : ratio_experiment(f, algo, sizes, seeds, e.value("oracle", false))) {
        rows.push_back({r.family, r.n, r.seed, r.algorithm, r.objective, r.reference, r.ratio, r.wall_ms, true});
    }
}

void bench_avg_bound(const json& e, std::vector<BenchRow>& rows) {
    const auto range = e.at("n").get<std::vector<std::size_t>>();
    if (range.size() != 2 || range[0] < 2 || range[0] > range[1]) throw InvalidArgument("avg-bound: n must be [lo, hi]");
    const auto seeds = seed_list(e);
    for (std::size_t n = range[0]; n <= range[1]; ++n)
        for (std::uint64_t s : seeds) {
            const WeightedGraph g = random_graph(n, {Mode::dissimilarity, e.value("max_weight", 0), 1.0},
                                                 derive_seed(s, n));
            const auto t0 = std::chrono::steady_clock::now();
            const ValueBoundCheck c = average_linkage_value_bound_check(g);
            rows.push_back({"random-dis", n, s, "average", c.value, c.bound, c.bound > 0 ? c.value / c.bound : 0,
                            elapsed_ms(t0), c.ok});
        }
}

void bench_hsbm(const json& e, std::vector<BenchRow>& rows) {
    HsbmParams base = e.at("config").is_string() ? parse_hsbm_config(read_file(e.at("config").get<std::string>()))
                                                 : parse_hsbm_config(e.at("config").at("text").get<std::string>());
    const double slack = e.value("cost_slack", 1.02);
    const std::size_t reps = e.value("repetitions", std::size_t{0});
    const CostFunction cf = CostFunction::dasgupta(std::max<std::size_t>(base.n, CostFunction::kDefaultMaxN));
    std::size_t recovered = 0, total = 0;
    for (std::uint64_t s : seed_list(e)) {
        HsbmParams p = base;
        p.seed = s;
        const HsbmSample smp = sample(p);
        const auto t0 = std::chrono::steady_clock::now();
        const RecoveryResult r = recover_tree(smp.graph, p.k, cf, reps, s);
        const double ms = elapsed_ms(t0);
        const double cost = evaluate(cf, smp.graph, r.tree).total;
        const double truth = evaluate(cf, smp.graph, expected_graph(p, smp.labels).tree.tree).total;
        const bool exact = same_partition(r.clusters, smp.labels);
        recovered += exact;
        ++total;
        rows.push_back({"hsbm", p.n, s, "hsbm-recover", cost, truth, truth > 0 ? cost / truth : 0, ms,
                        exact && cost <= slack * truth});
    }
    const double rate = total ? static_cast<double>(recovered) / static_cast<double>(total) : 0.0;
    rows.push_back({"hsbm-summary", base.n, 0, "recovery-rate", static_cast<double>(recovered),
                    static_cast<double>(total), rate, 0.0, rate >= e.value("min_rate", 0.9)});
}

void add_bench(CLI::App& app, Global& gl) {
    auto* cmd = app.add_subcommand("bench", "Run an experiment spec and emit a table");
    struct Args {
        std::string spec, output, format = "csv";
        bool no_timing = false;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--spec", a->spec, "experiment spec (JSON)")->required();
    cmd->add_option("--format", a->format, "csv or json");
    cmd->add_flag("--no-timing", a->no_timing, "report wall_ms as 0 for byte-stable output");
    cmd->add_option("-o,--output", a->output, "output file");
    cmd->callback([&gl, a] {
        json spec;
        try {
            spec = json::parse(read_file(a->spec));
        } catch (const json::exception& e) {
            throw ParseError(std::string("bench spec: ") + e.what(), 0);
        }
        if (a->format != "csv" && a->format != "json") throw InvalidArgument("--format must be csv or json");
        std::vector<BenchRow> rows;
        const json experiments = spec.is_object() ? spec.value("experiments", json::array()) : json::array();
        try {
            for (const json& e : experiments) {
                const std::string type = e.at("type").get<std::string>();
                if (type == "ratio") bench_ratio(e, rows);
                else if (type == "avg-bound") bench_avg_bound(e, rows);
                else if (type == "hsbm-recovery") bench_hsbm(e, rows);
                else throw InvalidArgument("unknown experiment type '" + type + "'");
            }
        } catch (const json::exception& e) {
            throw ParseError(std::string("bench spec: ") + e.what(), 0);
        }
        if (a->no_timing)
            for (BenchRow& r : rows) r.wall_ms = 0;

        std::ostringstream out;
        if (a->format == "csv") {
            out << "instance,n,seed,algo,objective_value,oracle_or_bound,ratio,wall_ms,ok\n";
            for (const BenchRow& r : rows)
                out << r.instance << ',' << r.n << ',' << r.seed << ',' << r.algo << ',' << real(r.objective) << ','
                    << real(r.reference) << ',' << real(r.ratio) << ',' << real(r.wall_ms) << ','
                    << (r.ok ? "true" : "false") << '\n';
        } else {
            json arr = json::array();
            for (const BenchRow& r : rows)
                arr.push_back(json{{"instance", r.instance}, {"n", r.n}, {"seed", r.seed}, {"algo", r.algo},
                                   {"objective_value", r.objective}, {"oracle_or_bound", r.reference},
                                   {"ratio", r.ratio}, {"wall_ms", r.wall_ms}, {"ok", r.ok}});
            out << json{{"schema", 1}, {"rows", arr}}.dump() << "\n";
        }
        emit(gl, a->output, out.str(), "table");
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical clustering toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Global gl;
    app.add_flag("--json", gl.json, "machine-readable output");
    add_gen(app, gl);
    add_perturb(app, gl);
    add_cluster(app, gl);
    add_eval(app, gl);
    add_opt(app, gl);
    add_check(app, gl);
    add_bench(app, gl);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const ResourceGuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const InvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return 0;
}
