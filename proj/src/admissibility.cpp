#include <cmath>
#include <sstream>

#include "hicluster/errors.hpp"
#include "hicluster/objectives.hpp"
#include "hicluster/oracle.hpp"

namespace hicluster {

namespace {

bool close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

AdmissibilityReport check_admissibility(const CostFunction& cf, std::size_t n_max) {
    if (n_max > OracleLimits::kEnumerateDefault) {
        throw ResourceGuardError("check_admissibility", n_max, OracleLimits::kEnumerateDefault);
    }
    if (n_max > cf.n_max()) {
        throw TableRangeError("check_admissibility: objective '" + cf.name() + "' is tabulated up to " +
                              std::to_string(cf.n_max()));
    }
    AdmissibilityReport report;
    report.clique_costs.assign(n_max + 1, 0.0);

    for (std::size_t n = 2; n <= n_max; ++n) {
        const TreeCostSpectrum spec = enumerate_tree_costs(cf, unit_clique(n), n_max);
        report.clique_costs[n] = spec.min;
        if (report.clique_invariance.pass && !close(spec.min, spec.max, 1e-9)) {
            std::ostringstream msg;
            msg << "K_" << n << ": tree " << serialize_tree(spec.min_tree) << " costs " << format_real(spec.min)
                << " but " << serialize_tree(spec.max_tree) << " costs " << format_real(spec.max);
            report.clique_invariance = {false, msg.str()};
            report.cheap_witness = spec.min_tree;
            report.costly_witness = spec.max_tree;
        }
    }

    for (std::size_t a = 1; a < n_max && report.symmetry.pass; ++a) {
        for (std::size_t b = a + 1; a + b <= n_max; ++b) {
            if (!close(cf.g(a, b), cf.g(b, a), 1e-12)) {
                report.symmetry = {false, "g(" + std::to_string(a) + "," + std::to_string(b) + ") = " +
                                              format_real(cf.g(a, b)) + " but g(" + std::to_string(b) + "," +
                                              std::to_string(a) + ") = " + format_real(cf.g(b, a))};
                break;
            }
        }
    }

    for (std::size_t a = 1; a < n_max && report.monotonicity.pass; ++a) {
        for (std::size_t b = 1; a + b < n_max; ++b) {
            const double here = cf.g(a, b);
            std::string bad;
            if (!(cf.g(a + 1, b) > here)) {
                bad = "g(" + std::to_string(a + 1) + "," + std::to_string(b) + ")";
            } else if (!(cf.g(a, b + 1) > here)) {
                bad = "g(" + std::to_string(a) + "," + std::to_string(b + 1) + ")";
            }
            if (!bad.empty()) {
                report.monotonicity = {false, bad + " is not larger than g(" + std::to_string(a) + "," +
                                                  std::to_string(b) + ") = " + format_real(here)};
                break;
            }
        }
    }
    return report;
}

}  // namespace hicluster
