#ifndef EHCONTRACT_FEASIBILITY_HPP
#define EHCONTRACT_FEASIBILITY_HPP

// Exhaustive IR / IC / monotonicity / self-reveal checks for a contract, and a
// brute-force grid oracle for the optimal contract at small K.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "contract_solver.hpp"
#include "market_model.hpp"
#include "type_distribution.hpp"

namespace ehc {

inline constexpr double kDefaultSlackTol = 1e-9;

struct FeasibilityReport {
    std::vector<double> ir_slacks;
    std::vector<std::vector<double>> ic_slack_matrix;
    bool monotone_q = false;
    bool monotone_pi = false;
    std::vector<bool> self_reveal_by_type;
    bool self_reveal = false;
    double min_slack = 0.0;
    double tol = kDefaultSlackTol;

    bool ir_ok() const {
        return std::all_of(ir_slacks.begin(), ir_slacks.end(),
                           [&](double s) { return s >= -tol; });
    }
    bool ic_ok() const {
        for (std::size_t k = 0; k < ic_slack_matrix.size(); ++k)
            for (std::size_t j = 0; j < ic_slack_matrix[k].size(); ++j)
                if (j != k && ic_slack_matrix[k][j] < -tol) return false;
        return true;
    }
    bool feasible() const { return ir_ok() && ic_ok(); }
};

namespace detail {

inline void require_aligned(const Contract& c, const TypeProfile& p) {
    require_same_size(c.size(), p.size(), "contract vs type profile");
}

}  // namespace detail

/// slack_k = pi_k - q_k^2 / theta_k.
inline std::vector<double> check_ir(const Contract& contract, const TypeProfile& profile) {
    detail::require_aligned(contract, profile);
    std::vector<double> s(contract.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = eap_utility(contract.items[k], profile.theta(k));
    return s;
}

/// slack[k][j] = U_k(item_k) - U_k(item_j); row k is the type doing the choosing.
inline std::vector<std::vector<double>> check_ic(const Contract& contract,
                                                 const TypeProfile& profile) {
    detail::require_aligned(contract, profile);
    const std::size_t n = contract.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        const double own = eap_utility(contract.items[k], profile.theta(k));
        for (std::size_t j = 0; j < n; ++j)
            if (j != k) m[k][j] = own - eap_utility(contract.items[j], profile.theta(k));
    }
    return m;
}

/// For each type k, whether its own item attains the maximum utility over the
/// menu. A tie within `tol` counts for the designated type.
inline std::vector<bool> check_self_reveal(const Contract& contract, const TypeProfile& profile,
                                           double tol = kDefaultSlackTol) {
    detail::require_aligned(contract, profile);
    std::vector<bool> out(contract.size());
    for (std::size_t k = 0; k < contract.size(); ++k) {
        const double own = eap_utility(contract.items[k], profile.theta(k));
        bool best = true;
        for (std::size_t j = 0; j < contract.size() && best; ++j)
            if (eap_utility(contract.items[j], profile.theta(k)) > own + tol) best = false;
        out[k] = best;
    }
    return out;
}

inline FeasibilityReport verify_contract(const Contract& contract, const TypeProfile& profile,
                                         double tol = kDefaultSlackTol) {
    FeasibilityReport r;
    r.tol = tol;
    r.ir_slacks = check_ir(contract, profile);
    r.ic_slack_matrix = check_ic(contract, profile);
    r.self_reveal_by_type = check_self_reveal(contract, profile, tol);
    r.self_reveal = std::all_of(r.self_reveal_by_type.begin(), r.self_reveal_by_type.end(),
                                [](bool b) { return b; });
    r.monotone_q = true;
    r.monotone_pi = true;
    for (std::size_t k = 1; k < contract.size(); ++k) {
        if (contract.items[k].q < contract.items[k - 1].q) r.monotone_q = false;
        if (contract.items[k].pi < contract.items[k - 1].pi) r.monotone_pi = false;
    }
    double worst = std::numeric_limits<double>::infinity();
    for (double s : r.ir_slacks) worst = std::min(worst, s);
    for (std::size_t k = 0; k < r.ic_slack_matrix.size(); ++k)
        for (std::size_t j = 0; j < r.ic_slack_matrix.size(); ++j)
            if (j != k) worst = std::min(worst, r.ic_slack_matrix[k][j]);
    r.min_slack = std::isfinite(worst) ? worst : 0.0;
    return r;
}

struct GridSearchConfig {
    int points_per_dim = 21;
    double min_step = 1e-3;  // refine until the grid step is at most this
    int max_levels = 60;
    /// Extra candidate q vectors evaluated alongside the grid.
    std::vector<std::vector<double>> extra_points;
};

struct GridSearchResult {
    Contract contract;
    double objective = -std::numeric_limits<double>::infinity();
    int evaluations = 0;
    double final_step = 0.0;
};

/// Exhaustive search over a q-grid with rewards from reward_recovery. The
/// objective is the unreduced expected DAP utility, independent of the reduced
/// program the solver uses. Coarse-to-fine: each level re-centres a smaller
/// box on the incumbent.
inline GridSearchResult brute_force_best_contract(const TypeProfile& profile, double gamma,
                                                  double bandwidth_w, int n_total,
                                                  const GridSearchConfig& cfg = {}) {
    const std::size_t k_types = profile.size();
    if (k_types > 3) throw std::invalid_argument("brute_force_best_contract: K > 3 is refused");
    if (cfg.points_per_dim < 3) throw std::invalid_argument("brute_force_best_contract: need >= 3 points per dimension");
    if (!(cfg.min_step > 0.0)) throw std::invalid_argument("brute_force_best_contract: min_step must be positive");

    const CountDistribution dist(n_total, static_cast<int>(k_types));
    GridSearchResult best;

    auto consider = [&](const std::vector<double>& q) {
        const auto pi = reward_recovery(q, profile);
        const double v = expected_dap_utility(dist, q, pi, gamma, bandwidth_w);
        ++best.evaluations;
        if (v > best.objective) {
            best.objective = v;
            best.contract = Contract::from(q, pi);
        }
    };

    // Beyond q_k = gamma W E[n_k] / (2 ln2 E[D_k]) the partial derivative is negative.
    const auto quad = expected_quadratic_coefficients(profile, n_total);
    const double mean = static_cast<double>(n_total) / static_cast<double>(k_types);
    std::vector<double> lo(k_types, 0.0), hi(k_types, 0.0);
    for (std::size_t k = 0; k < k_types; ++k)
        hi[k] = quad[k] > 0.0 ? gamma * bandwidth_w * mean / (2.0 * kLn2 * quad[k]) : 0.0;

    for (const auto& q : cfg.extra_points) {
        detail::require_same_size(q.size(), k_types, "grid extra point");
        consider(q);
    }

    const int m = cfg.points_per_dim;
    std::vector<double> q(k_types);
    std::vector<int> idx(k_types);
    for (int level = 0; level < cfg.max_levels; ++level) {
        std::vector<double> step(k_types);
        double max_step = 0.0;
        for (std::size_t k = 0; k < k_types; ++k) {
            step[k] = (hi[k] - lo[k]) / (m - 1);
            max_step = std::max(max_step, step[k]);
        }
        std::fill(idx.begin(), idx.end(), 0);
        for (;;) {
            for (std::size_t k = 0; k < k_types; ++k) q[k] = lo[k] + idx[k] * step[k];
            consider(q);
            std::size_t d = 0;
            while (d < k_types && ++idx[d] == m) idx[d++] = 0;
            if (d == k_types) break;
        }
        best.final_step = max_step;
        if (max_step <= cfg.min_step) break;
        const auto centre = best.contract.q();
        for (std::size_t k = 0; k < k_types; ++k) {
            lo[k] = std::max(0.0, centre[k] - 2.0 * step[k]);
            hi[k] = centre[k] + 2.0 * step[k];
        }
    }
    return best;
}

}  // namespace ehc

#endif
