#ifndef EHCONTRACT_MARKET_MODEL_HPP
#define EHCONTRACT_MARKET_MODEL_HPP

// Domain types and closed-form utilities of the DAP/EAP energy-trading market.
//
// Conventions: powers in mW, bandwidth in MHz (so throughput is in Mbps),
// rewards are dimensionless with unit cost c = 1.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehc {

inline constexpr double kLn2 = std::numbers::ln2;

struct PhysicalParams {
    double eta = 0.5;
    double bandwidth_w = 1.0;
    double noise_n0 = 1e-8;
    double dap_channel_gain = 1e-3 / 400.0;
    double unit_cost_c = 1.0;

    void validate() const {
        if (!(eta > 0.0 && eta < 1.0))
            throw std::invalid_argument("eta must lie in (0, 1)");
        if (!(bandwidth_w > 0.0))
            throw std::invalid_argument("bandwidth must be positive");
        if (!(noise_n0 > 0.0))
            throw std::invalid_argument("noise power must be positive");
        if (!(dap_channel_gain > 0.0))
            throw std::invalid_argument("DAP channel gain must be positive");
    }

    /// Received-SNR slope: eta * G_{a,s} / N0.
    double gamma() const { return eta * dap_channel_gain / noise_n0; }
};

struct EapPhysical {
    double cost_coeff_a = 1.0;
    double channel_gain_g = 1.0;
};

/// Ordered ladder of K strictly increasing, positive EAP types with uniform
/// type probability 1/K.
class TypeProfile {
public:
    TypeProfile() = default;

    explicit TypeProfile(std::vector<double> thetas) : thetas_(std::move(thetas)) {
        if (thetas_.empty())
            throw std::invalid_argument("type profile needs at least one type");
        for (std::size_t k = 0; k < thetas_.size(); ++k) {
            if (!(thetas_[k] > 0.0) || !std::isfinite(thetas_[k]))
                throw std::invalid_argument("type values must be positive and finite");
            if (k > 0 && !(thetas_[k] > thetas_[k - 1]))
                throw std::invalid_argument("type values must be strictly increasing");
        }
    }

    std::size_t size() const noexcept { return thetas_.size(); }
    double theta(std::size_t k) const { return thetas_.at(k); }
    std::span<const double> thetas() const noexcept { return thetas_; }
    double type_prob() const noexcept { return 1.0 / static_cast<double>(thetas_.size()); }

    /// Same ladder expressed with powers multiplied by `scale` (theta ~ power^2).
    TypeProfile rescaled(double scale) const {
        std::vector<double> t(thetas_);
        for (auto& v : t) v *= scale * scale;
        return TypeProfile(std::move(t));
    }

private:
    std::vector<double> thetas_;
};

struct ContractItem {
    double q = 0.0;
    double pi = 0.0;

    bool is_null() const noexcept { return q == 0.0 && pi == 0.0; }
    friend bool operator==(const ContractItem&, const ContractItem&) = default;
};

/// One item per type, index-aligned with TypeProfile::thetas().
struct Contract {
    std::vector<ContractItem> items;

    std::size_t size() const noexcept { return items.size(); }

    std::vector<double> q() const {
        std::vector<double> out;
        out.reserve(items.size());
        for (const auto& it : items) out.push_back(it.q);
        return out;
    }
    std::vector<double> pi() const {
        std::vector<double> out;
        out.reserve(items.size());
        for (const auto& it : items) out.push_back(it.pi);
        return out;
    }

    static Contract from(std::span<const double> q, std::span<const double> pi) {
        if (q.size() != pi.size())
            throw std::invalid_argument("q and pi must have equal length");
        Contract c;
        c.items.reserve(q.size());
        for (std::size_t k = 0; k < q.size(); ++k) c.items.push_back({q[k], pi[k]});
        return c;
    }
};

/// Per-type EAP counts (n_1, ..., n_K).
struct Composition {
    std::vector<int> counts;

    std::size_t size() const noexcept { return counts.size(); }
    int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }
    int operator[](std::size_t k) const { return counts[k]; }
    friend bool operator==(const Composition&, const Composition&) = default;
};

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
}

/// Sum_k n_k q_k.
inline double received_total(const Composition& n, const Contract& c) {
    double s = 0.0;
    for (std::size_t k = 0; k < n.size(); ++k) s += n[k] * c.items[k].q;
    return s;
}

}  // namespace detail

/// Energy harvested by the source in one block: eta * sum p_m G_{m,s}.
inline double harvested_energy(std::span<const double> charging_powers,
                               std::span<const double> channel_gains, double eta) {
    detail::require_same_size(charging_powers.size(), channel_gains.size(), "harvested_energy");
    double s = 0.0;
    for (std::size_t m = 0; m < charging_powers.size(); ++m) {
        if (charging_powers[m] < 0.0 || channel_gains[m] < 0.0)
            throw std::invalid_argument("harvested_energy: negative power or gain");
        s += charging_powers[m] * channel_gains[m];
    }
    return eta * s;
}

/// W log2(1 + gamma * q_total).
inline double throughput(double total_received_q, double gamma, double bandwidth_w) {
    if (total_received_q < 0.0)
        throw std::invalid_argument("throughput: negative received power");
    return bandwidth_w * std::log2(1.0 + gamma * total_received_q);
}

inline double eap_utility(const ContractItem& item, double theta) {
    if (!(theta > 0.0))
        throw std::invalid_argument("eap_utility: theta must be positive");
    return item.pi - item.q * item.q / theta;
}

inline double dap_utility(const Composition& counts, const Contract& contract, double gamma,
                          double bandwidth_w) {
    detail::require_same_size(counts.size(), contract.size(), "dap_utility");
    double paid = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) paid += counts[k] * contract.items[k].pi;
    return throughput(detail::received_total(counts, contract), gamma, bandwidth_w) - paid;
}

/// Throughput minus total energy cost; the rewards cancel out.
inline double social_welfare(const Composition& counts, const Contract& contract,
                             const TypeProfile& profile, double gamma, double bandwidth_w) {
    detail::require_same_size(counts.size(), contract.size(), "social_welfare");
    detail::require_same_size(counts.size(), profile.size(), "social_welfare");
    double cost = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double q = contract.items[k].q;
        cost += counts[k] * q * q / profile.theta(k);
    }
    return throughput(detail::received_total(counts, contract), gamma, bandwidth_w) - cost;
}

/// theta = G^2 / a.
inline double type_of(const EapPhysical& eap) {
    if (!(eap.cost_coeff_a > 0.0) || !(eap.channel_gain_g > 0.0))
        throw std::invalid_argument("type_of: cost coefficient and channel gain must be positive");
    return eap.channel_gain_g * eap.channel_gain_g / eap.cost_coeff_a;
}

}  // namespace ehc

#endif
