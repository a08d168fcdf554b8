#include "geomix/random.hpp"

#include <cmath>

namespace geomix {

namespace {

double log_factorial(u64 k) { return std::lgamma(static_cast<double>(k) + 1.0); }

}  // namespace

u64 RngStream::next_poisson(double mean) {
    if (!(mean >= 0.0)) throw Error(ErrCode::Domain, "poisson mean must be >= 0");
    if (mean == 0.0) return 0;
    if (mean < 30.0) {
        // Inversion by multiplication of uniforms.
        double limit = std::exp(-mean);
        double prod = next_double();
        u64 k = 0;
        while (prod > limit) {
            prod *= next_double();
            ++k;
        }
        return k;
    }
    // PTRS transformed rejection (W. Hormann, "The transformed rejection
    // method for generating Poisson random variables").
    double b = 0.931 + 2.53 * std::sqrt(mean);
    double a = -0.059 + 0.02483 * b;
    double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    double v_r = 0.9277 - 3.6224 / (b - 2.0);
    double log_mean = std::log(mean);
    for (;;) {
        double u = next_double() - 0.5;
        double v = next_double();
        double us = 0.5 - std::fabs(u);
        double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<u64>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        double rhs = k * log_mean - mean - log_factorial(static_cast<u64>(k));
        if (lhs <= rhs) return static_cast<u64>(k);
    }
}

}  // namespace geomix
