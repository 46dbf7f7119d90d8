#ifndef EHCONTRACT_GOLDEN_SECTION_HPP
#define EHCONTRACT_GOLDEN_SECTION_HPP

#include <cmath>
#include <stdexcept>

namespace ehc {

struct GoldenSectionResult {
    double argmax = 0.0;
    double value = 0.0;
    int iterations = 0;
};

// Golden-section search for the maximum of a unimodal f on [lo, hi]. Stops
// once the bracket is no wider than `width_tol`.
template <class F>
GoldenSectionResult golden_section_maximize(F&& f, double lo, double hi, double width_tol,
                                            int max_iters = 10000) {
    if (!(hi >= lo)) throw std::invalid_argument("golden_section_maximize: empty bracket");
    if (!(width_tol > 0.0)) throw std::invalid_argument("golden_section_maximize: width_tol <= 0");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    int it = 0;
    while (b - a > width_tol && it < max_iters) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++it;
    }
    GoldenSectionResult r;
    r.argmax = 0.5 * (a + b);
    r.value = f(r.argmax);
    r.iterations = it;
    return r;
}

}  // namespace ehc

#endif
