#ifndef EHCONTRACT_PROJECTED_ASCENT_HPP
#define EHCONTRACT_PROJECTED_ASCENT_HPP

// Projected gradient ascent on the nonnegative orthant with Armijo
// backtracking along the projection arc. An optional positive diagonal metric
// rescales the ascent direction per coordinate; the orthant projection is
// unaffected by diagonal scaling.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace ehc {

struct AscentOptions {
    double grad_tol = 1e-8;
    int max_iters = 10000;
    double backtrack_beta = 0.5;
    double backtrack_c = 1e-4;

    void validate() const {
        if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
        if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
        if (!(backtrack_beta > 0.0 && backtrack_beta < 1.0))
            throw std::invalid_argument("backtrack_beta must lie in (0, 1)");
        if (!(backtrack_c > 0.0 && backtrack_c < 1.0))
            throw std::invalid_argument("backtrack_c must lie in (0, 1)");
    }
};

struct AscentResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double kkt_residual = 0.0;
};

/// Euclidean norm of the projected gradient: components pushing into an
/// active bound x_k = 0 are dropped.
inline double projected_gradient_norm(std::span<const double> x, std::span<const double> grad) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double g = (x[k] > 0.0) ? grad[k] : std::max(grad[k], 0.0);
        s += g * g;
    }
    return std::sqrt(s);
}

/// Maximizes `value(x)` over x >= 0.
///
/// `gradient(x)` returns the gradient as std::vector<double>. `metric(x)`
/// returns positive per-coordinate curvature estimates; the trial step is
/// x + t * grad / metric, projected onto the orthant.
template <class Value, class Gradient, class Metric>
AscentResult projected_gradient_ascent(Value&& value, Gradient&& gradient, Metric&& metric,
                                       std::vector<double> x0, const AscentOptions& opt) {
    opt.validate();
    const double eps = std::numeric_limits<double>::epsilon();
    AscentResult r;
    r.x = std::move(x0);
    for (auto& v : r.x) v = std::max(v, 0.0);
    r.value = value(r.x);

    std::vector<double> trial(r.x.size());
    for (r.iterations = 0; r.iterations < opt.max_iters; ++r.iterations) {
        const std::vector<double> g = gradient(r.x);
        r.kkt_residual = projected_gradient_norm(r.x, g);
        if (r.kkt_residual <= opt.grad_tol) {
            r.converged = true;
            return r;
        }
        const std::vector<double> m = metric(r.x);

        double t = 1.0;
        bool accepted = false;
        while (t > 1e-30) {
            double ascent = 0.0;
            for (std::size_t k = 0; k < r.x.size(); ++k) {
                trial[k] = std::max(r.x[k] + t * g[k] / m[k], 0.0);
                ascent += g[k] * (trial[k] - r.x[k]);
            }
            const double f = value(trial);
            // allowance for rounding in f once the increase is below resolution
            const double noise = 8.0 * eps * (std::abs(f) + std::abs(r.value));
            if (f >= r.value + opt.backtrack_c * ascent - noise) {
                r.x.swap(trial);
                r.value = f;
                accepted = true;
                break;
            }
            t *= opt.backtrack_beta;
        }
        if (!accepted) break;
    }
    const std::vector<double> g = gradient(r.x);
    r.kkt_residual = projected_gradient_norm(r.x, g);
    r.converged = r.kkt_residual <= opt.grad_tol;
    return r;
}

/// Unscaled variant (identity metric).
template <class Value, class Gradient>
AscentResult projected_gradient_ascent(Value&& value, Gradient&& gradient,
                                       std::vector<double> x0, const AscentOptions& opt) {
    const std::size_t n = x0.size();
    return projected_gradient_ascent(
        std::forward<Value>(value), std::forward<Gradient>(gradient),
        [n](std::span<const double>) { return std::vector<double>(n, 1.0); }, std::move(x0), opt);
}

}  // namespace ehc

#endif
