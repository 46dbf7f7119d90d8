#ifndef EHCONTRACT_SCENARIO_HPP
#define EHCONTRACT_SCENARIO_HPP

// Physical scenario generation, type-ladder quantization, gamma sweeps and
// utility curves.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "baselines.hpp"
#include "contract_solver.hpp"
#include "feasibility.hpp"
#include "market_model.hpp"
#include "type_distribution.hpp"

namespace ehc {

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    double mid() const noexcept { return 0.5 * (lo + hi); }
    friend bool operator==(const Range&, const Range&) = default;
};

struct ScenarioConfig {
    int n_eaps = 2;
    int k_types = 5;
    Range a_range{0.1, 1.0};
    Range d_ms_range{5.0, 10.0};    // EAP -> source, m
    Range d_as_range{15.0, 25.0};   // source -> DAP, m
    double path_loss_alpha = 2.0;
    double ref_atten_db = 30.0;     // at 1 m
    double eta = 0.5;
    double bandwidth = 1.0;         // MHz; throughput in Mbps
    double noise = 1e-8;            // mW
    std::uint64_t rng_seed = 42;
    /// Internal power unit relative to mW (1e3 = work in uW).
    double power_scale = 1e3;

    void validate() const {
        auto range_ok = [](const Range& r, const char* name) {
            if (!(r.lo > 0.0) || !(r.hi >= r.lo))
                throw std::invalid_argument(std::string(name) + ": range must satisfy 0 < lo <= hi");
        };
        if (n_eaps < 0) throw std::invalid_argument("n_eaps must be >= 0");
        if (k_types < 1) throw std::invalid_argument("k_types must be >= 1");
        range_ok(a_range, "a_range");
        range_ok(d_ms_range, "d_ms_range");
        range_ok(d_as_range, "d_as_range");
        if (d_ms_range.lo < 1.0 || d_as_range.lo < 1.0)
            throw std::invalid_argument("distances must be >= 1 m (reference distance)");
        if (!(path_loss_alpha > 0.0)) throw std::invalid_argument("path_loss_alpha must be positive");
        if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
        if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
        if (!(noise > 0.0)) throw std::invalid_argument("noise must be positive");
        if (!(power_scale > 0.0)) throw std::invalid_argument("power_scale must be positive");
    }
};

/// 10^(-ref_atten_db/10) * d^(-alpha), valid for d >= 1 m.
inline double channel_gain(double distance_m, double alpha, double ref_atten_db) {
    if (!(distance_m >= 1.0))
        throw std::invalid_argument("channel_gain: distance below the 1 m reference");
    return std::pow(10.0, -ref_atten_db / 10.0) * std::pow(distance_m, -alpha);
}

/// [theta_min, theta_max] attainable from the scenario's parameter ranges.
inline Range theta_bounds(const ScenarioConfig& cfg) {
    const double g_far = channel_gain(cfg.d_ms_range.hi, cfg.path_loss_alpha, cfg.ref_atten_db);
    const double g_near = channel_gain(cfg.d_ms_range.lo, cfg.path_loss_alpha, cfg.ref_atten_db);
    return {type_of({cfg.a_range.hi, g_far}), type_of({cfg.a_range.lo, g_near})};
}

/// K equally spaced types over [theta_min, theta_max] (the midpoint when K = 1), in mW units.
inline TypeProfile build_type_ladder(const ScenarioConfig& cfg) {
    if (cfg.k_types < 1) throw std::invalid_argument("build_type_ladder: K must be >= 1");
    const Range b = theta_bounds(cfg);
    if (cfg.k_types == 1) return TypeProfile({b.mid()});
    if (!(b.hi > b.lo)) throw std::invalid_argument("build_type_ladder: degenerate theta range");
    std::vector<double> t(static_cast<std::size_t>(cfg.k_types));
    const double step = (b.hi - b.lo) / (cfg.k_types - 1);
    for (int k = 0; k < cfg.k_types; ++k) t[k] = b.lo + k * step;
    t.back() = b.hi;
    return TypeProfile(std::move(t));
}

inline double gamma_at(const ScenarioConfig& cfg, double d_as) {
    return PhysicalParams{cfg.eta, cfg.bandwidth, cfg.noise,
                          channel_gain(d_as, cfg.path_loss_alpha, cfg.ref_atten_db)}
        .gamma();
}

/// gamma at the far and near ends of the source-DAP distance range.
inline Range gamma_range(const ScenarioConfig& cfg) {
    return {gamma_at(cfg, cfg.d_as_range.hi), gamma_at(cfg, cfg.d_as_range.lo)};
}

inline std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("linspace: steps must be >= 1");
    if (steps == 1) return {lo};
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) v[i] = lo + (hi - lo) * i / (steps - 1);
    v.back() = hi;
    return v;
}

/// Maps a market in mW onto internal units where powers are multiplied by
/// `scale`: theta scales by scale^2, gamma by 1/scale, rewards unchanged.
struct UnitScale {
    double scale = 1.0;

    TypeProfile profile(const TypeProfile& p) const { return p.rescaled(scale); }
    double gamma(double g) const { return g / scale; }
    double power_to_internal(double q_mw) const { return q_mw * scale; }
    double power_to_mw(double q) const { return q / scale; }

    Contract contract_to_mw(const Contract& c) const {
        Contract out = c;
        for (auto& it : out.items) it.q = power_to_mw(it.q);
        return out;
    }
};

/// Solves the asymmetric-information contract for a physical (mW) market,
/// working internally in the scaled unit. The returned contract is in mW.
inline SolveResult solve_scaled(const TypeProfile& profile_mw, double gamma_mw, double bandwidth,
                                int n_total, double power_scale, const SolverConfig& cfg = {}) {
    const UnitScale u{power_scale};
    SolverConfig c = cfg;
    if (c.init_q)
        for (auto& v : *c.init_q) v = u.power_to_internal(v);
    SolveResult r = solve(u.profile(profile_mw), u.gamma(gamma_mw), bandwidth, n_total, c);
    r.contract = u.contract_to_mw(r.contract);
    return r;
}

struct SweepResult {
    std::vector<double> gamma_grid;
    std::vector<double> welfare_contract;
    std::vector<double> welfare_complete;
    std::vector<double> welfare_linear;
    std::vector<double> normalized_contract;
    std::vector<double> normalized_linear;
    /// DAP utility under the optimal linear price, for reference.
    std::vector<double> linear_dap_utility;
};

class SweepError : public std::runtime_error {
public:
    SweepError(double gamma, const std::string& what)
        : std::runtime_error("sweep failed at gamma=" + std::to_string(gamma) + ": " + what),
          gamma_(gamma) {}
    double gamma() const noexcept { return gamma_; }

private:
    double gamma_;
};

inline double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

/// Expected social welfare of the three mechanisms at each gamma (mW units).
inline SweepResult run_sweep(const ScenarioConfig& cfg, const std::vector<double>& gamma_grid,
                             const SolverConfig& solver_cfg = {}) {
    cfg.validate();
    const UnitScale u{cfg.power_scale};
    const TypeProfile profile = u.profile(build_type_ladder(cfg));
    const CountDistribution dist(cfg.n_eaps, cfg.k_types);

    SweepResult out;
    out.gamma_grid = gamma_grid;
    for (double g_mw : gamma_grid) {
        const double g = u.gamma(g_mw);
        const SolveResult s = solve(ReducedProblem(profile, g, cfg.bandwidth, cfg.n_eaps), solver_cfg);
        if (!s.ok()) throw SweepError(g_mw, to_string(s.status));
        const double wc = expected_social_welfare(dist, s.contract, profile, g, cfg.bandwidth);
        const double wf = expected_complete_info_welfare(dist, profile, g, cfg.bandwidth);
        const LinearPricingSolution lin = linear_pricing_optimize(dist, profile, g, cfg.bandwidth);
        out.welfare_contract.push_back(wc);
        out.welfare_complete.push_back(wf);
        out.welfare_linear.push_back(lin.expected_welfare);
        out.normalized_contract.push_back(safe_ratio(wc, wf));
        out.normalized_linear.push_back(safe_ratio(lin.expected_welfare, wf));
        out.linear_dap_utility.push_back(lin.expected_dap_utility);
    }
    return out;
}

struct UtilityCurves {
    std::vector<int> probe_types;                 // 1-based
    std::vector<std::vector<double>> utilities;   // utilities[p][j] for item j (0-based)
};

/// For each probe type t (1-based), pi_j - q_j^2 / theta_t over every item j.
inline UtilityCurves utility_curves(const Contract& contract, const TypeProfile& profile,
                                    const std::vector<int>& probe_types) {
    detail::require_same_size(contract.size(), profile.size(), "utility_curves");
    UtilityCurves out;
    for (int t : probe_types) {
        if (t < 1 || static_cast<std::size_t>(t) > profile.size())
            throw std::invalid_argument("utility_curves: probe type " + std::to_string(t) +
                                        " out of range 1.." + std::to_string(profile.size()));
        std::vector<double> row(contract.size());
        for (std::size_t j = 0; j < contract.size(); ++j)
            row[j] = eap_utility(contract.items[j], profile.theta(static_cast<std::size_t>(t - 1)));
        out.probe_types.push_back(t);
        out.utilities.push_back(std::move(row));
    }
    return out;
}

inline constexpr const char* kRngName = "std::mt19937_64";

/// Uniform integer in [0, n) by rejection, so the mapping from the engine's
/// output stream is fully specified.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % n + 1) % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x > limit);
    return x % n;
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Monte Carlo estimate of a contract's expected social welfare: each EAP's
/// type is drawn i.i.d. uniform over the K types.
inline MonteCarloEstimate monte_carlo_expected_welfare(const Contract& contract,
                                                       const TypeProfile& profile, double gamma,
                                                       double bandwidth, int n_total,
                                                       std::size_t samples,
                                                       std::uint64_t rng_seed) {
    if (samples < 1) throw std::invalid_argument("monte_carlo_expected_welfare: samples must be >= 1");
    std::mt19937_64 rng(rng_seed);
    const std::size_t k = profile.size();
    Composition n{std::vector<int>(k, 0)};
    double mean = 0.0, m2 = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        std::fill(n.counts.begin(), n.counts.end(), 0);
        for (int m = 0; m < n_total; ++m) ++n.counts[uniform_index(rng, k)];
        const double w = social_welfare(n, contract, profile, gamma, bandwidth);
        const double delta = w - mean;  // Welford
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (w - mean);
    }
    MonteCarloEstimate e;
    e.mean = mean;
    e.samples = samples;
    e.std_error = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) /
                                          static_cast<double>(samples))
                              : 0.0;
    return e;
}

}  // namespace ehc

#endif
