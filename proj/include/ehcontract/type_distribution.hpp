#ifndef EHCONTRACT_TYPE_DISTRIBUTION_HPP
#define EHCONTRACT_TYPE_DISTRIBUTION_HPP

// Compositions of N EAPs into K equiprobable types and their multinomial
// weights. Everything downstream that takes an expectation over the unknown
// per-type counts goes through expect().

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "market_model.hpp"

namespace ehc {

struct WeightedComposition {
    Composition composition;
    double prob = 0.0;
};

/// All non-negative integer vectors of length k_types summing to n_total, in
/// lexicographic order of (n_1, ..., n_K).
inline std::vector<Composition> enumerate_compositions(int n_total, int k_types) {
    if (k_types < 1) throw std::invalid_argument("enumerate_compositions: k_types must be >= 1");
    if (n_total < 0) throw std::invalid_argument("enumerate_compositions: n_total must be >= 0");

    std::vector<Composition> out;
    std::vector<int> cur(static_cast<std::size_t>(k_types), 0);
    const std::size_t last = cur.size() - 1;

    // Odometer over the first K-1 entries; the last one takes the remainder.
    auto emit = [&](int used) {
        cur[last] = n_total - used;
        out.push_back(Composition{cur});
    };
    if (last == 0) {
        emit(0);
        return out;
    }
    int used = 0;
    for (;;) {
        emit(used);
        // advance: increment the rightmost free slot that still has room
        std::size_t pos = last - 1;
        for (;;) {
            if (used < n_total) {
                ++cur[pos];
                ++used;
                break;
            }
            used -= cur[pos];
            cur[pos] = 0;
            if (pos == 0) return out;
            --pos;
        }
    }
}

/// N! / (n_1! ... n_K! K^N), evaluated through log-factorials.
inline double multinomial_prob(const Composition& comp) {
    const auto k = static_cast<double>(comp.size());
    const int n = comp.total();
    // N!/prod(n_k!) as a product of binomials, each exact while it fits in 53 bits.
    double coeff = 1.0;
    int seen = 0;
    for (int c : comp.counts) {
        seen += c;
        double b = 1.0;
        for (int i = 1; i <= c; ++i) b = b * (seen - c + i) / i;
        coeff *= std::round(b) < 0x1p53 ? std::round(b) : b;
    }
    return coeff * std::pow(k, -n);
}

/// Exact enumeration of the type-count distribution for (N, K).
class CountDistribution {
public:
    CountDistribution(int n_total, int k_types) : n_total_(n_total), k_types_(k_types) {
        for (auto& c : enumerate_compositions(n_total, k_types)) {
            const double p = multinomial_prob(c);
            entries_.push_back({std::move(c), p});
        }
    }

    int n_total() const noexcept { return n_total_; }
    int k_types() const noexcept { return k_types_; }
    std::span<const WeightedComposition> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Expected number of EAPs of any one type under the uniform distribution.
    double mean_count() const noexcept { return static_cast<double>(n_total_) / k_types_; }

    /// Sum over compositions of prob * f(composition), reduced in enumeration order.
    template <class F>
    double expect(F&& f) const {
        double acc = 0.0, comp = 0.0;  // Neumaier compensated sum
        for (const auto& e : entries_) {
            const double v = e.prob * f(e.composition);
            const double t = acc + v;
            comp += std::abs(acc) >= std::abs(v) ? (acc - t) + v : (v - t) + acc;
            acc = t;
        }
        return acc + comp;
    }

private:
    int n_total_;
    int k_types_;
    std::vector<WeightedComposition> entries_;
};

inline std::vector<WeightedComposition> weighted_compositions(int n_total, int k_types) {
    CountDistribution d(n_total, k_types);
    return {d.entries().begin(), d.entries().end()};
}

/// E[W log2(1 + gamma sum n_k q_k) - sum n_k pi_k] over the multinomial counts.
inline double expected_dap_utility(const CountDistribution& dist, std::span<const double> q,
                                   std::span<const double> pi, double gamma, double bandwidth_w) {
    const auto k = static_cast<std::size_t>(dist.k_types());
    detail::require_same_size(q.size(), k, "expected_dap_utility(q)");
    detail::require_same_size(pi.size(), k, "expected_dap_utility(pi)");
    const Contract c = Contract::from(q, pi);
    return dist.expect([&](const Composition& n) { return dap_utility(n, c, gamma, bandwidth_w); });
}

inline double expected_dap_utility(std::span<const double> q, std::span<const double> pi,
                                   const TypeProfile& profile, double gamma, double bandwidth_w,
                                   int n_total) {
    detail::require_same_size(q.size(), profile.size(), "expected_dap_utility(q)");
    detail::require_same_size(pi.size(), profile.size(), "expected_dap_utility(pi)");
    CountDistribution dist(n_total, static_cast<int>(profile.size()));
    return expected_dap_utility(dist, q, pi, gamma, bandwidth_w);
}

/// Expected social welfare of a fixed contract over the multinomial counts.
inline double expected_social_welfare(const CountDistribution& dist, const Contract& contract,
                                      const TypeProfile& profile, double gamma,
                                      double bandwidth_w) {
    return dist.expect([&](const Composition& n) {
        return social_welfare(n, contract, profile, gamma, bandwidth_w);
    });
}

}  // namespace ehc

#endif
