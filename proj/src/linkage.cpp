#include "hicluster/linkage.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hicluster/errors.hpp"
#include "hicluster/objectives.hpp"
#include "hicluster/random.hpp"

namespace hicluster {

std::string_view to_string(LinkageKind kind) {
    switch (kind) {
        case LinkageKind::single: return "single";
        case LinkageKind::complete: return "complete";
        case LinkageKind::average: return "average";
    }
    return "?";
}

LinkageKind parse_linkage_kind(std::string_view text) {
    if (text == "single") return LinkageKind::single;
    if (text == "complete") return LinkageKind::complete;
    if (text == "average") return LinkageKind::average;
    throw InvalidArgument("unknown linkage '" + std::string(text) + "'");
}

namespace {

/// Pairwise cluster statistics kept in n x n slots; slot i holds the cluster
/// whose representative (smallest vertex) was vertex i at creation.
class LinkageEngine {
  public:
    LinkageEngine(const WeightedGraph& g, const LinkagePolicy& policy)
        : n_(g.size()), policy_(policy), sum_(n_ * n_), min_(n_ * n_), max_(n_ * n_),
          members_(n_), slot_of_(n_), node_(n_), active_(n_) {
        for (std::size_t i = 0; i < n_; ++i) {
            members_[i] = {static_cast<int>(i)};
            slot_of_[i] = i;
            node_[i] = builder_.add_leaf(static_cast<int>(i));
            active_[i] = i;
            for (std::size_t j = 0; j < n_; ++j) {
                const double w = i == j ? 0.0 : g.weight(static_cast<int>(i), static_cast<int>(j));
                sum_[i * n_ + j] = min_[i * n_ + j] = max_[i * n_ + j] = w;
            }
        }
    }

    /// choose(ties, step) returns the index of the pair to merge.
    template <typename Choose>
    LinkageResult run(Choose&& choose) {
        LinkageResult out;
        out.trace.reserve(n_ ? n_ - 1 : 0);
        std::vector<std::pair<std::size_t, std::size_t>> ties;
        for (std::size_t step = 0; active_.size() > 1; ++step) {
            ties.clear();
            const bool want_max = policy_.merge_rule() == MergeRule::max_link;
            double best = want_max ? -std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::infinity();
            // active_ is kept sorted by representative, so ties come out in lowest-index order.
            for (std::size_t x = 0; x < active_.size(); ++x) {
                for (std::size_t y = x + 1; y < active_.size(); ++y) {
                    const double d = link(active_[x], active_[y]);
                    if (d == best) {
                        ties.emplace_back(active_[x], active_[y]);
                    } else if (want_max ? d > best : d < best) {
                        best = d;
                        ties.assign(1, {active_[x], active_[y]});
                    }
                }
            }
            const std::size_t pick = choose(ties, step);
            const auto [i, j] = ties.at(pick);
            out.trace.push_back({members_[i], members_[j], best});
            merge(i, j);
        }
        const NodeId root = active_.empty() ? kNoNode : node_[active_.front()];
        if (root != kNoNode) out.tree = std::move(builder_).build(root).canonical();
        return out;
    }

    std::size_t slot_of(int v) const { return slot_of_.at(static_cast<std::size_t>(v)); }
    const VertexSet& members(std::size_t slot) const { return members_[slot]; }

  private:
    double link(std::size_t i, std::size_t j) const {
        switch (policy_.kind) {
            case LinkageKind::single: return min_[i * n_ + j];
            case LinkageKind::complete: return max_[i * n_ + j];
            case LinkageKind::average:
                return sum_[i * n_ + j] /
                       (static_cast<double>(members_[i].size()) * static_cast<double>(members_[j].size()));
        }
        return 0.0;
    }

    void merge(std::size_t i, std::size_t j) {
        // i has the smaller representative; the merged cluster keeps slot i.
        for (std::size_t k : active_) {
            if (k == i || k == j) continue;
            const double s = sum_[i * n_ + k] + sum_[j * n_ + k];
            const double lo = std::min(min_[i * n_ + k], min_[j * n_ + k]);
            const double hi = std::max(max_[i * n_ + k], max_[j * n_ + k]);
            sum_[i * n_ + k] = sum_[k * n_ + i] = s;
            min_[i * n_ + k] = min_[k * n_ + i] = lo;
            max_[i * n_ + k] = max_[k * n_ + i] = hi;
        }
        for (int v : members_[j]) slot_of_[v] = i;
        VertexSet merged;
        merged.reserve(members_[i].size() + members_[j].size());
        std::merge(members_[i].begin(), members_[i].end(), members_[j].begin(), members_[j].end(),
                   std::back_inserter(merged));
        members_[i] = std::move(merged);
        VertexSet().swap(members_[j]);
        node_[i] = builder_.join(node_[i], node_[j]);
        active_.erase(std::find(active_.begin(), active_.end(), j));
    }

    std::size_t n_;
    const LinkagePolicy& policy_;
    std::vector<double> sum_, min_, max_;
    std::vector<VertexSet> members_;
    std::vector<std::size_t> slot_of_;
    std::vector<NodeId> node_;
    std::vector<std::size_t> active_;
    TreeBuilder builder_;
};

using Candidates = std::vector<std::pair<const VertexSet*, const VertexSet*>>;

}  // namespace

LinkageResult linkage(const WeightedGraph& g, const LinkagePolicy& policy) {
    if (g.size() == 0) throw InvalidArgument("linkage: empty graph");
    LinkageEngine engine(g, policy);
    const TieScript& script = policy.script;
    return engine.run([&](const auto& ties, std::size_t step) -> std::size_t {
        if (step >= script.size()) return 0;
        const auto [x, y] = script[step];
        if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= g.size() || static_cast<std::size_t>(y) >= g.size()) {
            throw InvalidArgument("tie script step " + std::to_string(step) + ": vertex out of range");
        }
        std::size_t sx = engine.slot_of(x);
        std::size_t sy = engine.slot_of(y);
        if (sx == sy) {
            throw InvalidArgument("tie script step " + std::to_string(step) + ": vertices " + std::to_string(x) +
                                  " and " + std::to_string(y) + " are already in one cluster");
        }
        if (sx > sy) std::swap(sx, sy);
        for (std::size_t k = 0; k < ties.size(); ++k)
            if (ties[k].first == sx && ties[k].second == sy) return k;
        throw InvalidArgument("tie script step " + std::to_string(step) + ": merging the clusters of " +
                              std::to_string(x) + " and " + std::to_string(y) + " is not among the best pairs");
    });
}

TieScript record_tie_script(const WeightedGraph& g, const LinkagePolicy& policy, const TieChooser& chooser) {
    if (g.size() == 0) throw InvalidArgument("linkage: empty graph");
    LinkagePolicy plain = policy;
    plain.script.clear();
    LinkageEngine engine(g, plain);
    TieScript script;
    Candidates cands;
    engine.run([&](const auto& ties, std::size_t) -> std::size_t {
        cands.clear();
        for (const auto& [i, j] : ties) cands.emplace_back(&engine.members(i), &engine.members(j));
        const std::size_t pick = chooser(cands);
        if (pick >= ties.size()) throw InvalidArgument("tie chooser returned an out-of-range index");
        script.emplace_back(engine.members(ties[pick].first).front(), engine.members(ties[pick].second).front());
        return pick;
    });
    return script;
}

TieScript random_tie_script(const WeightedGraph& g, const LinkagePolicy& policy, std::uint64_t seed) {
    Rng rng(seed);
    return record_tie_script(g, policy, [&rng](auto cands) { return static_cast<std::size_t>(rng.below(cands.size())); });
}

ClusterTree replay_trace(std::size_t n, const MergeTrace& trace) {
    if (n == 0) throw InvalidArgument("replay_trace: no vertices");
    if (trace.size() + 1 != n) throw InvalidArgument("replay_trace: a trace on n vertices has n-1 merges");
    TreeBuilder builder;
    std::vector<NodeId> node_of(n);
    std::vector<std::size_t> owner(n);
    for (std::size_t v = 0; v < n; ++v) {
        node_of[v] = builder.add_leaf(static_cast<int>(v));
        owner[v] = v;
    }
    NodeId last = node_of[0];
    for (const MergeStep& step : trace) {
        if (step.a.empty() || step.b.empty()) throw InvalidArgument("replay_trace: empty cluster in trace");
        const std::size_t ra = owner.at(static_cast<std::size_t>(step.a.front()));
        const std::size_t rb = owner.at(static_cast<std::size_t>(step.b.front()));
        if (ra == rb) throw InvalidArgument("replay_trace: merge of a cluster with itself");
        last = builder.join(node_of[ra], node_of[rb]);
        for (std::size_t v = 0; v < n; ++v)
            if (owner[v] == rb) owner[v] = ra;
        node_of[ra] = last;
    }
    return std::move(builder).build(last).canonical();
}

ValueBoundCheck average_linkage_value_bound_check(const WeightedGraph& g) {
    if (g.mode() != Mode::dissimilarity) {
        throw InvalidArgument("average_linkage_value_bound_check needs a dissimilarity graph");
    }
    LinkagePolicy policy{LinkageKind::average, Mode::dissimilarity, std::nullopt, {}};
    ValueBoundCheck out;
    out.tree = linkage(g, policy).tree;
    out.value = evaluate(CostFunction::dasgupta(std::max<std::size_t>(g.size(), 2)), g, out.tree).total;
    out.bound = static_cast<double>(g.size()) * g.total_weight() / 2.0;
    out.ok = out.value >= out.bound - 1e-9;
    return out;
}

}  // namespace hicluster
