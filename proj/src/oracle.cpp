#include "hicluster/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <vector>

#include "hicluster/errors.hpp"

namespace hicluster {

namespace {

using Mask = std::uint32_t;

void guard(const char* what, std::size_t n, std::size_t requested, std::size_t hard) {
    const std::size_t limit = std::min(requested, hard);
    if (n > limit) throw ResourceGuardError(what, n, limit);
}

/// inner[mask] = total weight inside mask.
std::vector<double> inner_weights(const WeightedGraph& g) {
    const std::size_t n = g.size();
    std::vector<double> inner(std::size_t{1} << n, 0.0);
    for (Mask mask = 1; mask < (Mask{1} << n); ++mask) {
        const int low = std::countr_zero(mask);
        const Mask rest = mask & (mask - 1);
        double add = 0.0;
        auto row = g.row(low);
        for (Mask r = rest; r != 0; r &= r - 1) add += row[std::countr_zero(r)];
        inner[mask] = inner[rest] + add;
    }
    return inner;
}

/// Lexicographic order of masks viewed as sorted element sequences.
bool lex_less(Mask a, Mask b) {
    if (a == b) return false;
    const Mask x = (a ^ b) & (~(a ^ b) + 1);
    const Mask above = ~(x | (x - 1));
    if (a & x) return (b & above) != 0;
    return (a & above) == 0;
}

/// g(a,b) for a+b <= n as a flat (n+1)^2 array.
std::vector<double> g_table(const CostFunction& cf, std::size_t n) {
    if (n > cf.n_max()) {
        throw TableRangeError("graph has " + std::to_string(n) + " vertices; objective '" + cf.name() +
                              "' is tabulated up to " + std::to_string(cf.n_max()));
    }
    std::vector<double> tab((n + 1) * (n + 1), 0.0);
    for (std::size_t a = 1; a < n; ++a)
        for (std::size_t b = 1; a + b <= n; ++b) tab[a * (n + 1) + b] = cf.g(a, b);
    return tab;
}

ClusterTree tree_from_choices(std::size_t n, const std::vector<Mask>& choice) {
    if (n == 1) return ClusterTree::leaf(0);
    TreeBuilder builder;
    struct Frame {
        Mask mask;
        int stage;
        NodeId left;
    };
    std::vector<Frame> stack{{(Mask{1} << n) - 1, 0, kNoNode}};
    NodeId result = kNoNode;
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (std::popcount(f.mask) == 1) {
            result = builder.add_leaf(std::countr_zero(f.mask));
            stack.pop_back();
        } else if (f.stage == 0) {
            f.stage = 1;
            stack.push_back({choice[f.mask], 0, kNoNode});
        } else if (f.stage == 1) {
            f.stage = 2;
            f.left = result;
            stack.push_back({f.mask ^ choice[f.mask], 0, kNoNode});
        } else {
            result = builder.join(f.left, result);
            stack.pop_back();
        }
    }
    return std::move(builder).build(result).canonical();
}

/// Shared min/max subset DP. Returns the value table and the argbest split per mask.
template <bool Maximize>
void subset_dp(std::size_t n, const std::vector<double>& inner, const std::vector<double>& gtab,
               std::vector<double>& best, std::vector<Mask>& choice) {
    const std::size_t stride = n + 1;
    const Mask full = (Mask{1} << n) - 1;
    best.assign(std::size_t{full} + 1, 0.0);
    choice.assign(std::size_t{full} + 1, 0);
    for (Mask mask = 1; mask <= full; ++mask) {
        const int size = std::popcount(mask);
        if (size < 2) continue;
        const Mask low = mask & (~mask + 1);
        const Mask rest = mask ^ low;
        double top = Maximize ? -std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::infinity();
        Mask arg = 0;
        // sub ranges over proper submasks of rest; A = low | sub keeps min(S) on side A.
        for (Mask sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
            const Mask a = low | sub;
            const Mask b = mask ^ a;
            const int sa = std::popcount(a);
            const double cross = inner[mask] - inner[a] - inner[b];
            const double v = cross * gtab[static_cast<std::size_t>(sa) * stride + (size - sa)] + best[a] + best[b];
            const bool better = Maximize ? v > top : v < top;
            if (better || (v == top && lex_less(a, arg))) {
                top = v;
                arg = a;
            }
            if (sub == 0) break;
        }
        best[mask] = top;
        choice[mask] = arg;
    }
}

}  // namespace

OptResult exact_opt(const CostFunction& cf, const WeightedGraph& g, Direction direction,
                    std::size_t max_n) {
    const std::size_t n = g.size();
    if (n == 0) throw InvalidArgument("exact_opt: empty graph");
    guard("exact_opt", n, max_n, OracleLimits::kExactOptHard);
    const auto inner = inner_weights(g);
    const auto gtab = g_table(cf, n);
    std::vector<double> best;
    std::vector<Mask> choice;
    if (direction == Direction::maximize) {
        subset_dp<true>(n, inner, gtab, best, choice);
    } else {
        subset_dp<false>(n, inner, gtab, best, choice);
    }
    return {best.back(), tree_from_choices(n, choice)};
}

TreeCostSpectrum enumerate_tree_costs(const CostFunction& cf, const WeightedGraph& g,
                                      std::size_t max_n) {
    const std::size_t n = g.size();
    if (n == 0) throw InvalidArgument("enumerate_tree_costs: empty graph");
    guard("enumerate_tree_costs", n, max_n, OracleLimits::kEnumerateHard);
    const auto inner = inner_weights(g);
    const auto gtab = g_table(cf, n);

    TreeCostSpectrum out;
    std::vector<double> best;
    std::vector<Mask> choice;
    subset_dp<false>(n, inner, gtab, best, choice);
    out.min = best.back();
    out.min_tree = tree_from_choices(n, choice);
    subset_dp<true>(n, inner, gtab, best, choice);
    out.max = best.back();
    out.max_tree = tree_from_choices(n, choice);

    // (2n-3)!! binary trees on n labelled leaves.
    out.tree_count = 1;
    for (std::uint64_t k = 3; k + 3 <= 2 * n; k += 2) out.tree_count *= k;

    // Distinct values per subset, combined bottom-up while the sets stay small.
    constexpr std::size_t kCap = std::size_t{1} << 18;
    const std::size_t stride = n + 1;
    const Mask full = (Mask{1} << n) - 1;
    std::vector<std::vector<double>> values(std::size_t{full} + 1);
    bool exact = true;
    for (Mask mask = 1; mask <= full && exact; ++mask) {
        const int size = std::popcount(mask);
        if (size == 1) {
            values[mask] = {0.0};
            continue;
        }
        std::vector<double>& acc = values[mask];
        const Mask low = mask & (~mask + 1);
        const Mask rest = mask ^ low;
        for (Mask sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
            const Mask a = low | sub;
            const Mask b = mask ^ a;
            const int sa = std::popcount(a);
            const double node = (inner[mask] - inner[a] - inner[b]) * gtab[sa * stride + (size - sa)];
            if (acc.size() + values[a].size() * values[b].size() > 4 * kCap) {
                exact = false;
                break;
            }
            for (double va : values[a])
                for (double vb : values[b]) acc.push_back(node + va + vb);
            std::sort(acc.begin(), acc.end());
            acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
            if (acc.size() > kCap) {
                exact = false;
                break;
            }
            if (sub == 0) break;
        }
    }
    if (exact) {
        out.distinct_count = values[full].size();
    } else {
        out.distinct_exact = false;
        out.distinct_count = out.min == out.max ? 1 : 2;
    }
    return out;
}

namespace {

struct Agg {
    std::uint64_t count = 0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();

    void add(double lo, double hi, std::uint64_t c) {
        if (c == 0) return;
        count += c;
        min = std::min(min, lo);
        max = std::max(max, hi);
    }
    void add(const Agg& o) { add(o.min, o.max, o.count); }
};

/// Generating trees on a subset, grouped by the weight at their root.
struct GenEntry {
    double root_weight;
    Agg agg;
};

struct SubsetState {
    bool singleton = false;
    std::vector<GenEntry> generating;
    Agg other;  // non-generating trees
    Agg all;
};

}  // namespace

GeneratingSpectrum generating_spectrum(const CostFunction& cf, const WeightedGraph& g,
                                       std::size_t max_n) {
    const std::size_t n = g.size();
    if (n == 0) throw InvalidArgument("generating_spectrum: empty graph");
    guard("generating_spectrum", n, max_n, OracleLimits::kEnumerateHard);
    const auto inner = inner_weights(g);
    const auto gtab = g_table(cf, n);
    const std::size_t stride = n + 1;
    const bool similarity = g.mode() == Mode::similarity;
    // A child rooted at weight w may sit under a parent of weight c iff:
    auto compatible = [similarity](double c, double w) { return similarity ? c <= w : c >= w; };

    const Mask full = (Mask{1} << n) - 1;
    std::vector<SubsetState> state(std::size_t{full} + 1);
    for (Mask mask = 1; mask <= full; ++mask) {
        SubsetState& st = state[mask];
        const int size = std::popcount(mask);
        if (size == 1) {
            st.singleton = true;
            st.all.add(0.0, 0.0, 1);
            continue;
        }
        const Mask low = mask & (~mask + 1);
        const Mask rest = mask ^ low;
        for (Mask sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
            const Mask a = low | sub;
            const Mask b = mask ^ a;
            const int sa = std::popcount(a);
            const double node = (inner[mask] - inner[a] - inner[b]) * gtab[sa * stride + (size - sa)];

            double cmin = std::numeric_limits<double>::infinity();
            double cmax = -cmin;
            for (Mask ra = a; ra; ra &= ra - 1) {
                auto row = g.row(std::countr_zero(ra));
                for (Mask rb = b; rb; rb &= rb - 1) {
                    const double w = row[std::countr_zero(rb)];
                    cmin = std::min(cmin, w);
                    cmax = std::max(cmax, w);
                }
            }
            const SubsetState& A = state[a];
            const SubsetState& B = state[b];
            const auto shift = [node](const Agg& x, const Agg& y) {
                Agg r;
                if (x.count && y.count) r.add(node + x.min + y.min, node + x.max + y.max, x.count * y.count);
                return r;
            };
            st.all.add(shift(A.all, B.all));

            if (cmin != cmax) {
                st.other.add(shift(A.all, B.all));
            } else {
                const double c = cmin;
                // Split each side into trees that may hang below c and trees that may not.
                auto split_side = [&](const SubsetState& side, Agg& ok, Agg& bad) {
                    if (side.singleton) {
                        ok.add(0.0, 0.0, 1);
                        return;
                    }
                    for (const GenEntry& e : side.generating) (compatible(c, e.root_weight) ? ok : bad).add(e.agg);
                    bad.add(side.other);
                };
                Agg okA, badA, okB, badB;
                split_side(A, okA, badA);
                split_side(B, okB, badB);
                const Agg gen = shift(okA, okB);
                if (gen.count) {
                    auto it = std::find_if(st.generating.begin(), st.generating.end(),
                                           [c](const GenEntry& e) { return e.root_weight == c; });
                    if (it == st.generating.end()) {
                        st.generating.push_back({c, gen});
                    } else {
                        it->agg.add(gen);
                    }
                }
                // Non-generating: at least one side is bad.
                Agg other = shift(badA, B.all);
                other.add(shift(okA, badB));
                st.other.add(other);
            }
            if (sub == 0) break;
        }
    }

    GeneratingSpectrum out;
    const SubsetState& top = state[full];
    if (top.singleton) {
        out.generating_count = 1;
        return out;
    }
    Agg gen;
    for (const GenEntry& e : top.generating) gen.add(e.agg);
    out.generating_count = gen.count;
    out.other_count = top.other.count;
    if (gen.count) {
        out.generating_min = gen.min;
        out.generating_max = gen.max;
    }
    if (top.other.count) {
        out.other_min = top.other.min;
        out.other_max = top.other.max;
    }
    return out;
}

namespace {

template <bool Densest>
CutResult brute_cut(const WeightedGraph& g, std::size_t max_n, const char* what) {
    const std::size_t n = g.size();
    if (n < 2) throw InvalidArgument(std::string(what) + ": need at least 2 vertices");
    guard(what, n, max_n, OracleLimits::kBruteCutHard);

    const Mask full = (Mask{1} << n) - 1;
    Mask side = 1;  // vertex 0 always on side A
    double cut = 0.0;
    for (std::size_t v = 1; v < n; ++v) cut += g.weight(0, static_cast<int>(v));

    Mask best_side = 1;
    double best_ratio = cut / static_cast<double>(n - 1);
    // Gray code over vertices 1..n-1.
    const std::uint64_t steps = (std::uint64_t{1} << (n - 1)) - 1;
    for (std::uint64_t i = 1; i <= steps; ++i) {
        const int v = std::countr_zero(i) + 1;
        const Mask bit = Mask{1} << v;
        auto row = g.row(v);
        double to_a = 0.0;
        double to_b = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            if (static_cast<int>(u) == v) continue;
            ((side >> u) & 1 ? to_a : to_b) += row[u];
        }
        // Moving v across flips which of its edges are cut.
        if (side & bit) {
            cut += to_a - to_b;
        } else {
            cut += to_b - to_a;
        }
        side ^= bit;
        if (side == full) continue;
        const int sa = std::popcount(side);
        const double ratio = cut / (static_cast<double>(sa) * static_cast<double>(n - sa));
        const bool better = Densest ? ratio > best_ratio : ratio < best_ratio;
        if (better || (ratio == best_ratio && lex_less(side, best_side))) {
            best_ratio = ratio;
            best_side = side;
        }
    }

    CutResult out;
    for (std::size_t v = 0; v < n; ++v)
        ((best_side >> v) & 1 ? out.cut.side_a : out.cut.side_b).push_back(static_cast<int>(v));
    // Recompute from scratch so accumulated rounding does not leak out.
    out.ratio = cut_ratio(g, out.cut);
    return out;
}

}  // namespace

CutResult brute_sparsest_cut(const WeightedGraph& g, std::size_t max_n) {
    return brute_cut<false>(g, max_n, "brute_sparsest_cut");
}

CutResult brute_densest_cut(const WeightedGraph& g, std::size_t max_n) {
    return brute_cut<true>(g, max_n, "brute_densest_cut");
}

}  // namespace hicluster
