#include "nbfit/special.hpp"

#include <cmath>
#include <limits>

#include "nbfit/common.hpp"

namespace nbfit {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2
constexpr double kShift = 10.0;  // asymptotic series kicks in at x >= kShift

// B_{2n} / (2n (2n-1)) for the Stirling series of ln Gamma.
constexpr double kLgammaCoef[] = {
    1.0 / 12.0,        -1.0 / 360.0,     1.0 / 1260.0,      -1.0 / 1680.0,
    1.0 / 1188.0,      -691.0 / 360360.0, 1.0 / 156.0,      -3617.0 / 122400.0,
};

// B_{2n} / (2n) for the digamma series.
constexpr double kDigammaCoef[] = {
    1.0 / 12.0,  -1.0 / 120.0, 1.0 / 252.0,        -1.0 / 240.0,
    1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0,
};

double lgamma_asym(double z) {
    // z >= kShift
    const double inv = 1.0 / z;
    const double inv2 = inv * inv;
    double series = 0.0;
    double power = inv;  // z^{-(2n-1)}
    for (double c : kLgammaCoef) {
        series += c * power;
        power *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
}

double digamma_asym(double z) {
    const double inv = 1.0 / z;
    const double inv2 = inv * inv;
    double series = 0.0;
    double power = inv2;  // z^{-2n}
    for (double c : kDigammaCoef) {
        series += c * power;
        power *= inv2;
    }
    return std::log(z) - 0.5 * inv - series;
}

double trigamma_asym(double z) {
    // Psi'(z) ~ 1/z + 1/(2 z^2) + sum B_{2n} z^{-(2n+1)}
    const double inv = 1.0 / z;
    const double inv2 = inv * inv;
    double series = 0.0;
    double power = inv2 * inv;  // z^{-(2n+1)}
    constexpr double kB2n[] = {
        1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
        5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,
    };
    for (double c : kB2n) {
        series += c * power;
        power *= inv2;
    }
    return inv + 0.5 * inv2 + series;
}

}  // namespace

double log_gamma(double x) {
    require_positive_finite(x, "log_gamma: x");
    if (x == 1.0 || x == 2.0) return 0.0;
    // Shift upward with ln Gamma(x) = ln Gamma(x + k) - sum ln(x + j).
    double shift = 0.0;
    double z = x;
    while (z < kShift) {
        shift += std::log(z);
        z += 1.0;
    }
    return lgamma_asym(z) - shift;
}

double digamma(double x) {
    require_positive_finite(x, "digamma: x");
    double shift = 0.0;
    double z = x;
    while (z < kShift) {
        shift += 1.0 / z;
        z += 1.0;
    }
    return digamma_asym(z) - shift;
}

double trigamma(double x) {
    require_positive_finite(x, "trigamma: x");
    double shift = 0.0;
    double z = x;
    while (z < kShift) {
        shift += 1.0 / (z * z);
        z += 1.0;
    }
    return trigamma_asym(z) + shift;
}

double inverse_digamma(double t) {
    if (!std::isfinite(t))
        throw DomainError("inverse_digamma: target must be finite");
    // Seed with the classic piecewise guess, then bracket and polish.
    double z = (t >= -2.22) ? std::exp(t) + 0.5 : -1.0 / (t + 0.5772156649015329);
    if (!(z > 0.0)) z = 1e-8;
    double lo = z, hi = z;
    while (digamma(lo) > t) lo *= 0.5;
    while (digamma(hi) < t) hi *= 2.0;
    z = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double f = digamma(z) - t;
        if (f > 0.0)
            hi = z;
        else
            lo = z;
        const double step = f / trigamma(z);
        double next = z - step;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - z) <= 1e-15 * std::abs(z)) return next;
        z = next;
    }
    return z;
}

}  // namespace nbfit
