#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hicluster/graph.hpp"
#include "hicluster/tree.hpp"

namespace hicluster {

/// Cluster-to-cluster link over cross pairs:
///   single   = min w,  complete = max w,  average = w(C1,C2)/(|C1||C2|).
///
/// This is the similarity-setting table exactly as published, which swaps
/// the textbook names: textbook single linkage on similarities is the
/// `complete` row here.
enum class LinkageKind { single, complete, average };

/// Which pair is merged at each step.
enum class MergeRule { max_link, min_link };

std::string_view to_string(LinkageKind kind);
LinkageKind parse_linkage_kind(std::string_view text);

/// A tie script: step i merges the clusters holding vertices first/second.
/// Every scripted merge must be one of the best pairs at its step; once the
/// script runs out the lowest-index pair wins ties.
using TieScript = std::vector<std::pair<int, int>>;

struct LinkagePolicy {
    LinkageKind kind = LinkageKind::average;
    Mode mode = Mode::similarity;
    /// Defaults to max_link for similarity and min_link for dissimilarity.
    std::optional<MergeRule> merge;
    TieScript script;

    MergeRule merge_rule() const {
        return merge.value_or(mode == Mode::similarity ? MergeRule::max_link : MergeRule::min_link);
    }
};

struct MergeStep {
    VertexSet a;  ///< cluster with the smaller minimum vertex
    VertexSet b;
    double link = 0.0;
};

using MergeTrace = std::vector<MergeStep>;

struct LinkageResult {
    ClusterTree tree;
    MergeTrace trace;
};

/// Agglomerative clustering: start from singletons, repeatedly merge the
/// best pair under `policy` until one cluster remains. O(n^3) time.
LinkageResult linkage(const WeightedGraph& g, const LinkagePolicy& policy);

/// Picks one of the tied best pairs. Each candidate is (cluster a, cluster b)
/// with min(a) < min(b); candidates come in lowest-index order.
using TieChooser =
    std::function<std::size_t(std::span<const std::pair<const VertexSet*, const VertexSet*>>)>;

/// Runs linkage choosing among ties with `chooser` and returns the resulting
/// merge sequence as a script that linkage() replays exactly.
TieScript record_tie_script(const WeightedGraph& g, const LinkagePolicy& policy, const TieChooser& chooser);

/// A script choosing uniformly at random among tied pairs.
TieScript random_tie_script(const WeightedGraph& g, const LinkagePolicy& policy, std::uint64_t seed);

/// Rebuilds the canonical tree from a merge trace on vertices 0..n-1.
ClusterTree replay_trace(std::size_t n, const MergeTrace& trace);

struct ValueBoundCheck {
    double value = 0.0;  ///< val(T) of the average-linkage tree (Dasgupta form)
    double bound = 0.0;  ///< n * sum w / 2
    bool ok = false;
    ClusterTree tree;
};

/// Average linkage on a dissimilarity graph against the n*sum(w)/2 guarantee.
ValueBoundCheck average_linkage_value_bound_check(const WeightedGraph& g);

}  // namespace hicluster
