#include "core/rng.hpp"

#include <cmath>

namespace conceft::rng {

double Engine::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Box-Muller; both variates are produced, one is cached.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

double Engine::student_t4() {
    // t_nu = Z / sqrt(V/nu) with V ~ chi^2_nu; for nu = 4,
    // V = -2 log(U1 U2) (sum of two Exp(2) variables).
    const double z = normal();
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    while (u2 <= 0.0) u2 = uniform();
    const double v = -2.0 * std::log(u1 * u2);
    return z * std::sqrt(4.0 / v);
}

int Engine::poisson(double lambda) {
    // Knuth's product method; adequate for the small lambda used here.
    const double l = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform();
    } while (p > l);
    return k - 1;
}

}  // namespace conceft::rng
