#include "hicluster/divisive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sys/wait.h>
#include <unistd.h>

#include "hicluster/errors.hpp"
#include "hicluster/io.hpp"
#include "hicluster/random.hpp"

namespace hicluster {

namespace {

Cut cut_from_side(VertexSet a, std::size_t n) {
    std::sort(a.begin(), a.end());
    Cut c;
    c.side_b = complement(a, n);
    c.side_a = std::move(a);
    return c;
}

bool has_positive_edge(const WeightedGraph& g) { return g.max_weight() > 0.0; }

Cut split_off_first(std::size_t n) { return cut_from_side({0}, n); }

// Closes the temp file on every exit path.
struct TempFile {
    std::string path;
    ~TempFile() {
        if (!path.empty()) std::remove(path.c_str());
    }
};

Cut run_plugin(const std::string& command, const WeightedGraph& g) {
    if (command.empty()) throw InvalidArgument("plugin cut finder needs a command");
    const char* dir = std::getenv("TMPDIR");
    std::string tmpl = std::string(dir && *dir ? dir : "/tmp") + "/hicluster-cut-XXXXXX";
    const int fd = mkstemp(tmpl.data());
    if (fd < 0) throw InvalidArgument("plugin: cannot create a temporary file");
    TempFile tmp{tmpl};
    const std::string text = format_graph(g);
    const bool wrote = ::write(fd, text.data(), text.size()) == static_cast<ssize_t>(text.size());
    ::close(fd);
    if (!wrote) throw InvalidArgument("plugin: cannot write the temporary graph file");

    const std::string full = "(" + command + "\n) < '" + tmp.path + "'";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw InvalidArgument("plugin: cannot start '" + command + "'");
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        throw InvalidArgument("plugin '" + command + "' failed");
    }

    const std::size_t n = g.size();
    std::vector<char> in(n, 0);
    VertexSet side;
    const char* p = out.c_str();
    char* end = nullptr;
    while (true) {
        while (*p == ' ' || *p == '\t' || *p == '\n' || *p == '\r') ++p;
        if (!*p) break;
        const long v = std::strtol(p, &end, 10);
        if (end == p || v < 0 || static_cast<std::size_t>(v) >= n) {
            throw InvalidArgument("plugin '" + command + "' printed an invalid vertex id");
        }
        if (in[v]) throw InvalidArgument("plugin '" + command + "' repeated vertex " + std::to_string(v));
        in[v] = 1;
        side.push_back(static_cast<int>(v));
        p = end;
    }
    if (side.empty() || side.size() == n) {
        throw InvalidArgument("plugin '" + command + "' did not return a proper nonempty side");
    }
    return cut_from_side(std::move(side), n);
}

}  // namespace

ClusterTree divide(const WeightedGraph& g, const Splitter& split) {
    const std::size_t n = g.size();
    if (n == 0) throw InvalidArgument("cannot cluster an empty graph");
    struct Part {
        VertexSet verts;
        std::vector<std::size_t> children;
    };
    std::vector<Part> plan;
    plan.push_back({all_vertices(n), {}});
    std::vector<int> mark(n, -1);
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (plan[i].verts.size() < 2) continue;
        std::vector<VertexSet> groups;
        VertexSet verts = plan[i].verts;
        {
            const InducedSubgraph sub = induced_subgraph(g, verts);
            groups = split(sub);
        }
        const std::size_t m = verts.size();
        if (groups.size() < 2) throw InvariantError("splitter returned fewer than two groups");
        std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(m), -1);
        std::size_t covered = 0;
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            if (groups[gi].empty()) throw InvariantError("splitter returned an empty group");
            for (int v : groups[gi]) {
                if (v < 0 || static_cast<std::size_t>(v) >= m || mark[v] != -1) {
                    throw InvariantError("splitter groups do not partition the subproblem");
                }
                mark[v] = static_cast<int>(gi);
                ++covered;
            }
        }
        if (covered != m) throw InvariantError("splitter groups do not cover the subproblem");
        for (VertexSet& grp : groups) {
            for (int& v : grp) v = verts[v];
            std::sort(grp.begin(), grp.end());
            plan[i].children.push_back(plan.size());
            plan.push_back({std::move(grp), {}});
        }
    }
    TreeBuilder b;
    std::vector<NodeId> id(plan.size(), kNoNode);
    for (std::size_t i = plan.size(); i-- > 0;) {
        if (plan[i].children.empty()) {
            id[i] = b.add_leaf(plan[i].verts.front());
            continue;
        }
        NodeId acc = id[plan[i].children.front()];
        for (std::size_t c = 1; c < plan[i].children.size(); ++c) acc = b.join(acc, id[plan[i].children[c]]);
        id[i] = acc;
    }
    return std::move(b).build(id[0]).canonical();
}

Cut CutFinder::find(const WeightedGraph& g, Mode objective) {
    if (g.size() < 2) throw InvalidArgument("a cut needs at least two vertices");
    ++stats.cuts;
    switch (kind) {
        case CutFinderKind::exact_brute:
            return objective == Mode::similarity ? brute_sparsest_cut(g, max_n).cut : brute_densest_cut(g, max_n).cut;
        case CutFinderKind::ground_truth_fast:
            return objective == Mode::similarity ? ground_truth_sparsest_cut(g) : ground_truth_densest_cut(g);
        case CutFinderKind::local_search: {
            if (objective != Mode::dissimilarity) {
                throw InvalidArgument("local-search cut finder computes densest cuts and needs a dissimilarity objective");
            }
            if (!has_positive_edge(g)) return split_off_first(g.size());
            LocalSearchResult r = local_search_densest_cut(g, epsilon);
            stats.moves += r.stats.moves;
            stats.max_moves = std::max(stats.max_moves, r.stats.moves);
            if (r.stats.moves > r.stats.iteration_bound) stats.iteration_bound_ok = false;
            return std::move(r.cut);
        }
        case CutFinderKind::plugin: return run_plugin(command, g);
    }
    throw InvalidArgument("unknown cut finder");
}

ClusterTree recursive_cut_tree(const WeightedGraph& g, CutFinder& finder, Mode objective) {
    return divide(g, [&](const InducedSubgraph& sub) {
        Cut c = finder.find(sub.graph, objective);
        return std::vector<VertexSet>{std::move(c.side_a), std::move(c.side_b)};
    });
}

Cut ground_truth_sparsest_cut(const WeightedGraph& g) {
    const std::size_t n = g.size();
    if (n < 2) throw InvalidArgument("ground_truth_sparsest_cut needs at least two vertices");
    const auto row = g.row(0);
    const double w_min = *std::min_element(row.begin() + 1, row.end());
    VertexSet a{0};
    for (std::size_t x = 1; x < n; ++x)
        if (row[x] > w_min) a.push_back(static_cast<int>(x));
    return cut_from_side(std::move(a), n);
}

Cut ground_truth_densest_cut(const WeightedGraph& g) {
    const std::size_t n = g.size();
    if (n < 2) throw InvalidArgument("ground_truth_densest_cut needs at least two vertices");
    const auto row = g.row(0);
    const double w_max = *std::max_element(row.begin() + 1, row.end());
    VertexSet a{0};
    for (std::size_t x = 1; x < n; ++x)
        if (row[x] < w_max) a.push_back(static_cast<int>(x));
    return cut_from_side(std::move(a), n);
}

namespace {

std::size_t local_search_bound(std::size_t n, double epsilon) {
    if (n < 2) return 1;
    return static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n)) / std::log1p(epsilon / n))) + 1;
}

/// Density after moving x across, given weight sums from x to each side.
double moved_density(double cut, bool x_in_a, double to_a, double to_b, std::size_t a, std::size_t b) {
    if (x_in_a) return (cut - to_b + to_a) / (static_cast<double>(a - 1) * static_cast<double>(b + 1));
    return (cut - to_a + to_b) / (static_cast<double>(a + 1) * static_cast<double>(b - 1));
}

}  // namespace

LocalSearchResult local_search_densest_cut(const WeightedGraph& g, double epsilon) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be positive");
    const std::size_t n = g.size();
    if (n < 2) throw InvalidArgument("local_search_densest_cut needs at least two vertices");
    int su = -1, sv = -1;
    double best = 0.0;
    for (int u = 0; u < static_cast<int>(n); ++u)
        for (int v = u + 1; v < static_cast<int>(n); ++v)
            if (g.weight(u, v) > best) {
                best = g.weight(u, v);
                su = u;
                sv = v;
            }
    if (su < 0) throw DegenerateInputError("local_search_densest_cut: all weights are zero");

    std::vector<char> in_a(n, 0);
    std::vector<double> to_a(n, 0.0), rowsum(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        const auto r = g.row(static_cast<int>(x));
        rowsum[x] = std::accumulate(r.begin(), r.end(), 0.0);
        to_a[x] = r[sv];
    }
    in_a[sv] = 1;
    std::size_t a = 1, b = n - 1;
    auto cut_value = [&] {
        double c = 0.0;
        for (std::size_t x = 0; x < n; ++x)
            if (in_a[x]) c += rowsum[x] - to_a[x];
        return c;
    };
    double cut = cut_value();

    LocalSearchResult out;
    out.stats.n = n;
    out.stats.iteration_bound = local_search_bound(n, epsilon);
    out.stats.initial_density = cut / (static_cast<double>(a) * static_cast<double>(b));
    const double factor = 1.0 + epsilon / static_cast<double>(n);
    // Never reached on valid input; the cap only catches a broken invariant.
    const std::size_t cap = out.stats.iteration_bound + n + 16;
    while (true) {
        const double density = cut / (static_cast<double>(a) * static_cast<double>(b));
        const double threshold = factor * density;
        std::size_t pick = n;
        double pick_density = threshold;
        for (std::size_t x = 0; x < n; ++x) {
            const bool xa = in_a[x] != 0;
            if ((xa && a == 1) || (!xa && b == 1)) continue;
            const double d = moved_density(cut, xa, to_a[x], rowsum[x] - to_a[x], a, b);
            if (d > pick_density) {
                pick_density = d;
                pick = x;
            }
        }
        if (pick == n) break;
        if (out.stats.moves >= cap) throw InvariantError("local search exceeded its iteration bound");
        const bool leaving_a = in_a[pick] != 0;
        in_a[pick] = leaving_a ? 0 : 1;
        const auto r = g.row(static_cast<int>(pick));
        for (std::size_t y = 0; y < n; ++y) to_a[y] += leaving_a ? -r[y] : r[y];
        if (leaving_a) {
            --a;
            ++b;
        } else {
            ++a;
            --b;
        }
        cut = cut_value();
        ++out.stats.moves;
    }
    out.stats.final_density = cut / (static_cast<double>(a) * static_cast<double>(b));
    VertexSet side;
    for (std::size_t x = 0; x < n; ++x)
        if (in_a[x]) side.push_back(static_cast<int>(x));
    out.cut = cut_from_side(std::move(side), n);
    return out;
}

bool is_locally_densest(const WeightedGraph& g, const Cut& cut, double epsilon) {
    const std::size_t n = g.size();
    const std::size_t a = cut.side_a.size(), b = cut.side_b.size();
    if (a == 0 || b == 0 || a + b != n) throw InvalidArgument("is_locally_densest: not a cut of g");
    const double w = cut_weight(g, cut.side_a, cut.side_b);
    const double density = w / (static_cast<double>(a) * static_cast<double>(b));
    const double limit = (1.0 + epsilon / static_cast<double>(n)) * density;
    std::vector<char> in_a(n, 0);
    for (int v : cut.side_a) in_a[v] = 1;
    for (std::size_t x = 0; x < n; ++x) {
        const bool xa = in_a[x] != 0;
        if ((xa && a == 1) || (!xa && b == 1)) continue;
        double ta = 0.0, tb = 0.0;
        for (std::size_t y = 0; y < n; ++y) (in_a[y] ? ta : tb) += g.weight(static_cast<int>(x), static_cast<int>(y));
        if (moved_density(w, xa, ta, tb, a, b) > limit * (1.0 + 1e-12)) return false;
    }
    return true;
}

DensestTreeResult recursive_densest_cut_tree(const WeightedGraph& g, double epsilon) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be positive");
    if (g.mode() != Mode::dissimilarity) {
        throw InvalidArgument("recursive_densest_cut_tree needs a dissimilarity graph");
    }
    DensestTreeResult out;
    out.tree = divide(g, [&](const InducedSubgraph& sub) {
        const WeightedGraph& h = sub.graph;
        DensestSplitRecord rec;
        rec.vertices = sub.to_parent;
        Cut local;
        if (has_positive_edge(h)) {
            LocalSearchResult r = local_search_densest_cut(h, epsilon);
            local = std::move(r.cut);
            rec.search = r.stats;
        } else {
            local = split_off_first(h.size());
            rec.search.n = h.size();
            rec.search.iteration_bound = local_search_bound(h.size(), epsilon);
        }
        rec.w_ab = cut_weight(h, local.side_a, local.side_b);
        rec.w_a = inner_weight(h, local.side_a);
        rec.w_b = inner_weight(h, local.side_b);
        const auto na = static_cast<double>(local.side_a.size());
        const auto nb = static_cast<double>(local.side_b.size());
        rec.lhs = (na + nb) * rec.w_ab;
        rec.rhs = 2.0 * (1.0 - epsilon) * (nb * rec.w_a + na * rec.w_b);
        rec.lemma_ok = rec.lhs >= rec.rhs - 1e-9 * std::max(1.0, std::abs(rec.rhs));
        for (int v : local.side_a) rec.cut.side_a.push_back(sub.to_parent[v]);
        for (int v : local.side_b) rec.cut.side_b.push_back(sub.to_parent[v]);
        out.splits.push_back(std::move(rec));
        return std::vector<VertexSet>{std::move(local.side_a), std::move(local.side_b)};
    });
    return out;
}

namespace {

double center_score(const WeightedGraph& g, Mode mode, int u, int v) {
    const int n = static_cast<int>(g.size());
    const bool sim = mode == Mode::similarity;
    double score = sim ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    for (int x = 0; x < n; ++x) {
        if (x == u || x == v) continue;
        const double a = g.weight(x, u), b = g.weight(x, v);
        score = sim ? std::min(score, std::max(a, b)) : std::max(score, std::min(a, b));
    }
    return score;
}

/// +1 if x strictly prefers u, -1 if it strictly prefers v, 0 on a tie.
int preference(const WeightedGraph& g, Mode mode, int x, int u, int v) {
    const double a = g.weight(x, u), b = g.weight(x, v);
    if (a == b) return 0;
    const bool closer_to_u = mode == Mode::similarity ? a > b : a < b;
    return closer_to_u ? 1 : -1;
}

}  // namespace

ClusterTree bisection_two_center(const WeightedGraph& g, Mode mode, const BisectionScript& script) {
    std::size_t next_step = 0;
    return divide(g, [&](const InducedSubgraph& sub) {
        const WeightedGraph& h = sub.graph;
        const int n = static_cast<int>(h.size());
        const bool sim = mode == Mode::similarity;
        int bu = 0, bv = 1;
        double best = center_score(h, mode, 0, 1);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                const double s = center_score(h, mode, u, v);
                if (sim ? s > best : s < best) {
                    best = s;
                    bu = u;
                    bv = v;
                }
            }

        VertexSet side_a;
        if (next_step < script.size()) {
            const BisectionStep& step = script[next_step++];
            const std::string where = "bisection script step " + std::to_string(next_step - 1);
            auto local_id = [&](int parent) {
                auto it = std::lower_bound(sub.to_parent.begin(), sub.to_parent.end(), parent);
                if (it == sub.to_parent.end() || *it != parent) {
                    throw InvalidArgument(where + ": vertex " + std::to_string(parent) + " is not in the subproblem");
                }
                return static_cast<int>(it - sub.to_parent.begin());
            };
            const int u = local_id(step.u), v = local_id(step.v);
            if (u == v) throw InvalidArgument(where + ": centers must differ");
            if (center_score(h, mode, std::min(u, v), std::max(u, v)) != best) {
                throw InvalidArgument(where + ": centers are not an optimal pair");
            }
            std::vector<char> in_a(n, 0);
            for (int p : step.side_a) {
                const int x = local_id(p);
                if (in_a[x]) throw InvalidArgument(where + ": side A repeats a vertex");
                in_a[x] = 1;
            }
            if (!in_a[u] || in_a[v]) throw InvalidArgument(where + ": side A must hold u and not v");
            for (int x = 0; x < n; ++x) {
                if (x == u || x == v) continue;
                const int pref = preference(h, mode, x, u, v);
                if ((pref > 0 && !in_a[x]) || (pref < 0 && in_a[x])) {
                    throw InvalidArgument(where + ": vertex " + std::to_string(sub.to_parent[x]) +
                                          " is assigned to the farther center");
                }
                if (in_a[x]) side_a.push_back(x);
            }
            side_a.push_back(u);
        } else {
            side_a.push_back(bu);
            for (int x = 0; x < n; ++x) {
                if (x == bu || x == bv) continue;
                if (preference(h, mode, x, bu, bv) >= 0) side_a.push_back(x);
            }
        }
        std::sort(side_a.begin(), side_a.end());
        VertexSet side_b = complement(side_a, h.size());
        return std::vector<VertexSet>{std::move(side_a), std::move(side_b)};
    });
}

ClusterTree fast_pivot(const WeightedGraph& g, const PivotOptions& options) {
    if (!(options.tolerance >= 0)) throw InvalidArgument("pivot tolerance must be nonnegative");
    Rng rng(options.seed);
    return divide(g, [&](const InducedSubgraph& sub) {
        const WeightedGraph& h = sub.graph;
        const int n = static_cast<int>(h.size());
        const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        std::vector<int> others;
        others.reserve(n - 1);
        for (int x = 0; x < n; ++x)
            if (x != p) others.push_back(x);
        std::stable_sort(others.begin(), others.end(),
                         [&](int a, int b) { return h.weight(p, a) > h.weight(p, b); });
        std::vector<VertexSet> groups{{p}};
        double head = 0.0;
        for (int x : others) {
            const double w = h.weight(p, x);
            if (groups.size() == 1 || w < head - options.tolerance) {
                groups.emplace_back();
                head = w;
            }
            groups.back().push_back(x);
        }
        return groups;
    });
}

ClusterTree robust_pivot(const WeightedGraph& g, double delta) {
    if (!(delta >= 1.0) || !std::isfinite(delta)) throw InvalidArgument("delta must be a finite number >= 1");
    return divide(g, [&](const InducedSubgraph& sub) {
        const WeightedGraph& h = sub.graph;
        const int n = static_cast<int>(h.size());
        std::vector<char> placed(n, 0);  // in V~_i or the current B_i
        std::vector<int> inside{0};
        placed[0] = 1;
        std::vector<VertexSet> groups{{0}};
        std::size_t count = 1;
        while (count < static_cast<std::size_t>(n)) {
            int p1 = -1, p2 = -1;
            double wi = -1.0;
            for (int a : inside) {
                for (int b = 0; b < n; ++b) {
                    if (placed[b]) continue;
                    const double w = h.weight(a, b);
                    if (w > wi || (w == wi && (a < p1 || (a == p1 && b < p2)))) {
                        wi = w;
                        p1 = a;
                        p2 = b;
                    }
                }
            }
            VertexSet bucket;
            for (int u = 0; u < n; ++u) {
                if (!placed[u] && h.weight(p1, u) == wi) bucket.push_back(u);
            }
            // Grow: u joins if it has an edge of weight >= wi into B_i or V~_i.
            std::vector<double> reach(n, 0.0);
            auto absorb = [&](int v) {
                for (int u = 0; u < n; ++u) reach[u] = std::max(reach[u], h.weight(u, v));
            };
            for (int v : inside) absorb(v);
            for (int u : bucket) placed[u] = 1;
            for (std::size_t q = 0; q < bucket.size(); ++q) absorb(bucket[q]);
            for (bool grew = true; grew;) {
                grew = false;
                for (int u = 0; u < n; ++u) {
                    if (placed[u] || reach[u] < wi) continue;
                    placed[u] = 1;
                    bucket.push_back(u);
                    absorb(u);
                    grew = true;
                }
            }
            count += bucket.size();
            inside.insert(inside.end(), bucket.begin(), bucket.end());
            std::sort(bucket.begin(), bucket.end());
            groups.push_back(std::move(bucket));
        }
        return groups;
    });
}

}  // namespace hicluster
