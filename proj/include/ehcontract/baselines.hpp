#ifndef EHCONTRACT_BASELINES_HPP
#define EHCONTRACT_BASELINES_HPP

// Comparison mechanisms: the complete-information contract (the DAP observes
// the per-type counts) and a single linear price per unit of received power.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "golden_section.hpp"
#include "market_model.hpp"
#include "type_distribution.hpp"

namespace ehc {

struct CompleteInfoSolution {
    std::vector<double> q;
    std::vector<double> pi;
    double lambda = 0.0;
    double welfare = 0.0;

    Contract contract() const { return Contract::from(q, pi); }
};

/// Positive root of gamma T l^2 + l - W gamma / (2 ln 2) = 0, written in a
/// cancellation-free form.
inline double complete_info_lambda(double t_sum, double gamma, double bandwidth_w) {
    if (!(t_sum > 0.0) || !(gamma > 0.0) || !(bandwidth_w > 0.0)) return 0.0;
    const double x = 2.0 * gamma * gamma * t_sum * bandwidth_w / kLn2;
    // (sqrt(1+x) - 1) / (2 gamma T) = x / ((sqrt(1+x) + 1) 2 gamma T)
    return x / ((std::sqrt(1.0 + x) + 1.0) * 2.0 * gamma * t_sum);
}

/// Welfare-maximizing contract when the counts are known: q_k = lambda theta_k
/// and every IR constraint binds, so the DAP keeps the whole surplus.
inline CompleteInfoSolution complete_info_contract(const Composition& counts,
                                                   const TypeProfile& profile, double gamma,
                                                   double bandwidth_w) {
    detail::require_same_size(counts.size(), profile.size(), "complete_info_contract");
    double t_sum = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) t_sum += counts[k] * profile.theta(k);

    CompleteInfoSolution s;
    s.lambda = complete_info_lambda(t_sum, gamma, bandwidth_w);
    s.q.resize(profile.size());
    s.pi.resize(profile.size());
    for (std::size_t k = 0; k < profile.size(); ++k) {
        s.q[k] = s.lambda * profile.theta(k);
        s.pi[k] = s.q[k] * s.q[k] / profile.theta(k);
    }
    s.welfare = (t_sum > 0.0) ? social_welfare(counts, s.contract(), profile, gamma, bandwidth_w)
                              : 0.0;
    return s;
}

/// Expectation of the per-realization complete-information optimum.
inline double expected_complete_info_welfare(const CountDistribution& dist,
                                             const TypeProfile& profile, double gamma,
                                             double bandwidth_w) {
    return dist.expect([&](const Composition& n) {
        return complete_info_contract(n, profile, gamma, bandwidth_w).welfare;
    });
}

inline double expected_complete_info_welfare(const TypeProfile& profile, double gamma,
                                             double bandwidth_w, int n_total) {
    return expected_complete_info_welfare(CountDistribution(n_total, static_cast<int>(profile.size())),
                                          profile, gamma, bandwidth_w);
}

struct LinearPricingConfig {
    double width_tol = 1e-10;  // relative to max(1, bracket upper end)
    int max_expansions = 200;
};

struct LinearPricingSolution {
    double price = 0.0;
    double expected_dap_utility = 0.0;
    double expected_welfare = 0.0;
    std::vector<double> q_response;
};

/// EAP best response to a unit price: argmax_q P q - q^2/theta = P theta / 2.
inline double linear_best_response(double price, double theta) { return 0.5 * price * theta; }

/// E[W log2(1 + gamma (P/2) sum n_k theta_k)] - P^2 (N/K) sum_k theta_k / 2.
inline double linear_pricing_expected_utility(double price, const CountDistribution& dist,
                                              const TypeProfile& profile, double gamma,
                                              double bandwidth_w) {
    const auto th = profile.thetas();
    const double benefit = dist.expect([&](const Composition& n) {
        double t = 0.0;
        for (std::size_t k = 0; k < th.size(); ++k) t += n[k] * th[k];
        return bandwidth_w * std::log2(1.0 + gamma * 0.5 * price * t);
    });
    const double theta_sum = std::accumulate(th.begin(), th.end(), 0.0);
    return benefit - price * price * dist.mean_count() * theta_sum / 2.0;
}

inline double linear_pricing_utility_derivative(double price, const CountDistribution& dist,
                                                const TypeProfile& profile, double gamma,
                                                double bandwidth_w) {
    const auto th = profile.thetas();
    const double d_benefit = dist.expect([&](const Composition& n) {
        double t = 0.0;
        for (std::size_t k = 0; k < th.size(); ++k) t += n[k] * th[k];
        return bandwidth_w * gamma * 0.5 * t / (kLn2 * (1.0 + gamma * 0.5 * price * t));
    });
    const double theta_sum = std::accumulate(th.begin(), th.end(), 0.0);
    return d_benefit - price * dist.mean_count() * theta_sum;
}

/// Expected social welfare when every EAP best-responds to price P.
inline double linear_pricing_expected_welfare(double price, const CountDistribution& dist,
                                              const TypeProfile& profile, double gamma,
                                              double bandwidth_w) {
    std::vector<double> q(profile.size()), pi(profile.size());
    for (std::size_t k = 0; k < profile.size(); ++k) {
        q[k] = linear_best_response(price, profile.theta(k));
        pi[k] = price * q[k];
    }
    return expected_social_welfare(dist, Contract::from(q, pi), profile, gamma, bandwidth_w);
}

/// Optimal uniform price by golden-section search over [0, P_max]; P_max is
/// doubled until the concave objective turns down.
inline LinearPricingSolution linear_pricing_optimize(const CountDistribution& dist,
                                                     const TypeProfile& profile, double gamma,
                                                     double bandwidth_w,
                                                     const LinearPricingConfig& cfg = {}) {
    auto f = [&](double p) {
        return linear_pricing_expected_utility(p, dist, profile, gamma, bandwidth_w);
    };

    double price = 0.0;
    if (gamma > 0.0 && dist.n_total() > 0) {
        double hi = std::max(bandwidth_w * gamma / kLn2, 1e-300);
        int expansions = 0;
        while (!(f(hi) < f(0.5 * hi))) {
            if (++expansions > cfg.max_expansions)
                throw std::runtime_error("linear_pricing_optimize: bracket expansion failed");
            hi *= 2.0;
        }
        const auto gs = golden_section_maximize(f, 0.0, hi, cfg.width_tol * std::max(1.0, hi));
        price = (gs.value > f(0.0)) ? gs.argmax : 0.0;
    }

    LinearPricingSolution s;
    s.price = price;
    s.expected_dap_utility = f(price);
    s.expected_welfare = linear_pricing_expected_welfare(price, dist, profile, gamma, bandwidth_w);
    s.q_response.resize(profile.size());
    for (std::size_t k = 0; k < profile.size(); ++k)
        s.q_response[k] = linear_best_response(price, profile.theta(k));
    return s;
}

inline LinearPricingSolution linear_pricing_optimize(const TypeProfile& profile, double gamma,
                                                     double bandwidth_w, int n_total,
                                                     const LinearPricingConfig& cfg = {}) {
    return linear_pricing_optimize(CountDistribution(n_total, static_cast<int>(profile.size())),
                                   profile, gamma, bandwidth_w, cfg);
}

}  // namespace ehc

#endif
