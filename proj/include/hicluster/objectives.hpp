#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hicluster/errors.hpp"
#include "hicluster/graph.hpp"
#include "hicluster/tree.hpp"

namespace hicluster {

/// The base sequence violates the g(n,1)/(n+1) non-decreasing requirement,
/// or the derived table is not strictly increasing.
class AdmissibilityError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

/// A tree or graph is larger than the cost function's table.
class TableRangeError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

/// Similarity objectives are costs (minimized); dissimilarity objectives are values (maximized).
enum class Direction { minimize, maximize };

constexpr Direction objective_direction(Mode mode) noexcept {
    return mode == Mode::similarity ? Direction::minimize : Direction::maximize;
}

/// An objective of the form  sum over internal nodes N of  w(V(L),V(R)) * g(|V(L)|,|V(R)|).
///
/// Built from the base sequence g(i,1). The clique cost
/// kappa(n) = sum_{i<n} i * g(i,1) then fixes
/// g(a,b) = (kappa(a+b) - kappa(a) - kappa(b)) / (a*b), which makes every tree
/// on a unit clique cost exactly kappa(n).
class CostFunction {
  public:
    static constexpr std::size_t kDefaultMaxN = 4096;

    /// g(a,b) = a + b.
    static CostFunction dasgupta(std::size_t n_max = kDefaultMaxN);

    /// base[i-1] = g(i,1) for i = 1..base.size(). Needs base.size() >= n_max - 1.
    static CostFunction from_base_sequence(std::vector<double> base, std::size_t n_max,
                                           std::string name = "custom");

    /// Explicit g table, not validated. Meant for probing admissibility of
    /// arbitrary (possibly broken) g; n_max is limited to 512.
    static CostFunction from_table(std::string name, std::size_t n_max,
                                   const std::function<double(std::size_t, std::size_t)>& g);

    /// g(a,b) for a,b >= 1, a+b <= n_max.
    double g(std::size_t a, std::size_t b) const {
        if (a + b > n_max_ || a == 0 || b == 0) range_error(a, b);
        if (!table_.empty()) return table_[a * (n_max_ + 1) + b];
        if (dasgupta_) return static_cast<double>(a + b);
        return (kappa_[a + b] - kappa_[a] - kappa_[b]) / (static_cast<double>(a) * static_cast<double>(b));
    }

    /// Cost of any tree on the unit clique K_n (for admissible g).
    double kappa(std::size_t n) const;

    /// max { g(a,b) : a + b = n }.
    double g_max(std::size_t n) const;

    std::size_t n_max() const noexcept { return n_max_; }
    const std::string& name() const noexcept { return name_; }
    /// g(i,1) for i = 1..; empty for explicit tables.
    const std::vector<double>& base() const noexcept { return base_; }

  private:
    CostFunction() = default;
    [[noreturn]] void range_error(std::size_t a, std::size_t b) const;

    std::string name_;
    std::size_t n_max_ = 0;
    bool dasgupta_ = false;
    std::vector<double> base_;
    std::vector<double> kappa_;
    std::vector<double> table_;  // (n_max+1)^2, explicit tables only
};

/// Per-node breakdown of an objective. `per_node` is indexed by node id; leaves hold 0.
struct ObjectiveReport {
    double total = 0.0;
    std::vector<double> per_node;
};

/// Gamma(T) node by node. The same formula is a cost for similarity graphs
/// and a value for dissimilarity graphs.
ObjectiveReport evaluate(const CostFunction& cf, const WeightedGraph& g, const ClusterTree& t);

/// Gamma(T) accumulated edge by edge at each pair's lowest common ancestor.
/// Independent of evaluate(); the two must agree.
double evaluate_via_lca(const CostFunction& cf, const WeightedGraph& g, const ClusterTree& t);

/// n * sum of all edge weights.
double trivial_upper_bound(const WeightedGraph& g);

/// g_max(n) * n^2 / kappa(n).
double smoothness_ratio(const CostFunction& cf, std::size_t n);

struct ConditionResult {
    bool pass = true;
    std::string witness;  // empty when pass
};

struct AdmissibilityReport {
    ConditionResult clique_invariance;  ///< all trees on unit K_n cost the same
    ConditionResult symmetry;           ///< g(a,b) == g(b,a)
    ConditionResult monotonicity;       ///< g strictly increasing in each argument
    std::vector<double> clique_costs;   ///< index n -> common cost on K_n (n >= 2)
    std::optional<ClusterTree> cheap_witness;   ///< cheapest tree on the failing clique
    std::optional<ClusterTree> costly_witness;  ///< most expensive tree on the failing clique

    bool admissible() const {
        return clique_invariance.pass && symmetry.pass && monotonicity.pass;
    }
};

/// Checks the three admissibility conditions on cliques up to n_max (<= 10)
/// by exhaustive min/max over all trees, and on g over the same range.
AdmissibilityReport check_admissibility(const CostFunction& cf, std::size_t n_max);

/// Unit-weight complete graph on n vertices.
WeightedGraph unit_clique(std::size_t n, Mode mode = Mode::similarity);

}  // namespace hicluster
