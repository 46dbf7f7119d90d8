#ifndef EHCONTRACT_CONTRACT_SOLVER_HPP
#define EHCONTRACT_CONTRACT_SOLVER_HPP

// Optimal contract under asymmetric information.
//
// With IR binding at the lowest type and every local downward IC binding, the
// rewards are a fixed function of q (reward_recovery). Substituting them into
// the DAP's expected utility leaves a concave program in q alone:
//
//   max_{q >= 0}  E[W log2(1 + gamma sum_k n_k q_k)] - sum_k E[D_k] q_k^2
//
// where D_k(n) is given by quadratic_coefficients(). The expectation of the
// quadratic part is taken in closed form; only the log term is enumerated.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "market_model.hpp"
#include "projected_ascent.hpp"
#include "type_distribution.hpp"

namespace ehc {

struct SolverConfig {
    double grad_tol = 1e-8;
    int max_iters = 10000;
    double backtrack_beta = 0.5;
    double backtrack_c = 1e-4;
    std::optional<std::vector<double>> init_q;

    void validate() const { ascent_options().validate(); }

    AscentOptions ascent_options() const {
        return {grad_tol, max_iters, backtrack_beta, backtrack_c};
    }
};

enum class SolveStatus {
    converged,
    max_iterations,
    monotonicity_violation,
};

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::monotonicity_violation: return "monotonicity_violation";
    }
    return "unknown";
}

struct SolveResult {
    Contract contract;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double kkt_residual = 0.0;
    SolveStatus status = SolveStatus::max_iterations;

    bool ok() const noexcept { return status == SolveStatus::converged; }
};

/// Coefficients D_k(n) with sum_k n_k pi_k(q) = sum_k D_k(n) q_k^2 when pi is
/// produced by reward_recovery(q).
inline std::vector<double> quadratic_coefficients(const TypeProfile& profile,
                                                  const Composition& comp) {
    detail::require_same_size(comp.size(), profile.size(), "quadratic_coefficients");
    const std::size_t k_types = profile.size();
    std::vector<double> d(k_types, 0.0);
    int above = 0;  // sum_{i > k} n_i
    for (std::size_t k = k_types; k-- > 0;) {
        const double inv = 1.0 / profile.theta(k);
        d[k] = comp[k] * inv;
        if (k + 1 < k_types) d[k] += (inv - 1.0 / profile.theta(k + 1)) * above;
        above += comp[k];
    }
    return d;
}

/// E[D_k] under uniform types: (N/K)[1/theta_k + (K-k)(1/theta_k - 1/theta_{k+1})].
inline std::vector<double> expected_quadratic_coefficients(const TypeProfile& profile,
                                                           int n_total) {
    const std::size_t k_types = profile.size();
    const double mean = static_cast<double>(n_total) / static_cast<double>(k_types);
    std::vector<double> d(k_types);
    for (std::size_t k = 0; k < k_types; ++k) {
        const double inv = 1.0 / profile.theta(k);
        d[k] = inv;
        if (k + 1 < k_types)
            d[k] += static_cast<double>(k_types - 1 - k) * (inv - 1.0 / profile.theta(k + 1));
        d[k] *= mean;
    }
    return d;
}

/// pi_1 = q_1^2/theta_1, pi_k = pi_{k-1} + (q_k^2 - q_{k-1}^2)/theta_k.
inline std::vector<double> reward_recovery(std::span<const double> q, const TypeProfile& profile) {
    detail::require_same_size(q.size(), profile.size(), "reward_recovery");
    std::vector<double> pi(q.size());
    double prev_q2 = 0.0;
    double prev_pi = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k] < 0.0) throw std::invalid_argument("reward_recovery: negative q");
        const double q2 = q[k] * q[k];
        pi[k] = prev_pi + (q2 - prev_q2) / profile.theta(k);
        prev_pi = pi[k];
        prev_q2 = q2;
    }
    return pi;
}

/// The reduced concave program for a fixed market, with cached enumeration.
class ReducedProblem {
public:
    ReducedProblem(TypeProfile profile, double gamma, double bandwidth_w, int n_total)
        : profile_(std::move(profile)),
          gamma_(gamma),
          bandwidth_w_(bandwidth_w),
          dist_(n_total, static_cast<int>(profile_.size())),
          quad_(expected_quadratic_coefficients(profile_, n_total)) {}

    const TypeProfile& profile() const noexcept { return profile_; }
    const CountDistribution& distribution() const noexcept { return dist_; }
    double gamma() const noexcept { return gamma_; }
    double bandwidth() const noexcept { return bandwidth_w_; }
    std::span<const double> expected_quadratic() const noexcept { return quad_; }

    double value(std::span<const double> q) const {
        check(q);
        double v = dist_.expect([&](const Composition& n) {
            return bandwidth_w_ * std::log2(1.0 + gamma_ * dot(n, q));
        });
        for (std::size_t k = 0; k < q.size(); ++k) v -= quad_[k] * q[k] * q[k];
        return v;
    }

    std::vector<double> gradient(std::span<const double> q) const {
        check(q);
        const double scale = bandwidth_w_ / kLn2 * gamma_;
        std::vector<double> g(q.size(), 0.0);
        for (const auto& e : dist_.entries()) {
            const double w = e.prob * scale / (1.0 + gamma_ * dot(e.composition, q));
            for (std::size_t k = 0; k < q.size(); ++k) g[k] += w * e.composition[k];
        }
        for (std::size_t k = 0; k < q.size(); ++k) g[k] -= 2.0 * quad_[k] * q[k];
        return g;
    }

    /// Magnitudes of the Hessian diagonal (the objective is concave).
    std::vector<double> curvature(std::span<const double> q) const {
        const double scale = bandwidth_w_ / kLn2 * gamma_ * gamma_;
        std::vector<double> h(q.size(), 0.0);
        for (const auto& e : dist_.entries()) {
            const double s = 1.0 + gamma_ * dot(e.composition, q);
            const double w = e.prob * scale / (s * s);
            for (std::size_t k = 0; k < q.size(); ++k)
                h[k] += w * e.composition[k] * e.composition[k];
        }
        for (std::size_t k = 0; k < q.size(); ++k) {
            h[k] += 2.0 * quad_[k];
            if (!(h[k] > 0.0)) h[k] = 1.0;
        }
        return h;
    }

private:
    static double dot(const Composition& n, std::span<const double> q) {
        double s = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) s += n[k] * q[k];
        return s;
    }

    void check(std::span<const double> q) const {
        detail::require_same_size(q.size(), profile_.size(), "reduced problem");
        for (double v : q)
            if (v < 0.0) throw std::invalid_argument("reduced problem: negative q");
    }

    TypeProfile profile_;
    double gamma_;
    double bandwidth_w_;
    CountDistribution dist_;
    std::vector<double> quad_;
};

inline double reduced_objective(std::span<const double> q, const TypeProfile& profile,
                                double gamma, double bandwidth_w, int n_total) {
    return ReducedProblem(profile, gamma, bandwidth_w, n_total).value(q);
}

inline std::vector<double> reduced_gradient(std::span<const double> q, const TypeProfile& profile,
                                            double gamma, double bandwidth_w, int n_total) {
    return ReducedProblem(profile, gamma, bandwidth_w, n_total).gradient(q);
}

/// q nondecreasing and pi nondecreasing in type index, up to relative rounding.
inline bool is_monotone(const Contract& c, double rel_tol = 1e-12) {
    double q_scale = 0.0, pi_scale = 0.0;
    for (const auto& it : c.items) {
        q_scale = std::max(q_scale, std::abs(it.q));
        pi_scale = std::max(pi_scale, std::abs(it.pi));
    }
    for (std::size_t k = 1; k < c.size(); ++k) {
        if (c.items[k].q < c.items[k - 1].q - rel_tol * q_scale) return false;
        if (c.items[k].pi < c.items[k - 1].pi - rel_tol * pi_scale) return false;
    }
    return true;
}

/// Builds the full contract from an optimized q vector.
inline Contract contract_from_q(std::span<const double> q, const TypeProfile& profile) {
    const auto pi = reward_recovery(q, profile);
    return Contract::from(q, pi);
}

inline SolveResult solve(const ReducedProblem& problem, const SolverConfig& cfg) {
    cfg.validate();
    const auto& profile = problem.profile();
    const std::size_t k_types = profile.size();
    SolveResult out;

    if (problem.distribution().n_total() == 0) {
        out.contract.items.assign(k_types, ContractItem{});
        out.converged = true;
        out.status = SolveStatus::converged;
        return out;
    }

    std::vector<double> x0 = cfg.init_q.value_or(std::vector<double>(k_types, 1e-3));
    detail::require_same_size(x0.size(), k_types, "solve(init_q)");

    const AscentResult r = projected_gradient_ascent(
        [&](std::span<const double> q) { return problem.value(q); },
        [&](std::span<const double> q) { return problem.gradient(q); },
        [&](std::span<const double> q) { return problem.curvature(q); }, std::move(x0),
        cfg.ascent_options());

    out.contract = contract_from_q(r.x, profile);
    out.objective = expected_dap_utility(problem.distribution(), r.x, out.contract.pi(),
                                         problem.gamma(), problem.bandwidth());
    out.iterations = r.iterations;
    out.converged = r.converged;
    out.kkt_residual = r.kkt_residual;
    if (!r.converged)
        out.status = SolveStatus::max_iterations;
    else if (!is_monotone(out.contract))
        out.status = SolveStatus::monotonicity_violation;
    else
        out.status = SolveStatus::converged;
    return out;
}

inline SolveResult solve(const TypeProfile& profile, double gamma, double bandwidth_w,
                         int n_total, const SolverConfig& cfg = {}) {
    return solve(ReducedProblem(profile, gamma, bandwidth_w, n_total), cfg);
}

}  // namespace ehc

#endif
