#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "approx.hpp"
#include "nbfit/rng.hpp"
#include "nbfit/special.hpp"
#include "reference_values.hpp"

using namespace nbfit;
using testutil::mixed_err;

TEST_SUITE("special") {

TEST_CASE("frozen table agreement across twelve decades of x") {
    for (const auto& row : refvals::kGammaTable) {
        CAPTURE(row.x);
        CHECK(mixed_err(log_gamma(row.x), row.lgamma) <= 1e-12);
        CHECK(mixed_err(digamma(row.x), row.digamma) <= 1e-12);
        CHECK(mixed_err(trigamma(row.x), row.trigamma) <= 1e-10);
    }
}

TEST_CASE("exact zeros of log_gamma") {
    CHECK(log_gamma(1.0) == 0.0);
    CHECK(log_gamma(2.0) == 0.0);
    CHECK(digamma(1.0) == doctest::Approx(-refvals::kEulerGamma).epsilon(1e-14));
}

TEST_CASE("recurrence identities on random arguments") {
    // lnGamma(x+1) = lnGamma(x) + ln x, Psi(x+1) = Psi(x) + 1/x,
    // Psi'(x+1) = Psi'(x) - 1/x^2, checked on a log-uniform cloud.
    RngStream rng(0x5eedULL);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::exp(rng.uniform() * std::log(1e10) + std::log(1e-5));
        CAPTURE(x);
        CHECK(mixed_err(log_gamma(x + 1.0), log_gamma(x) + std::log(x)) <= 1e-12);
        // The recurrences subtract the large 1/x (resp. 1/x^2) pole at small
        // x, so the verifiable tolerance carries that intermediate magnitude.
        CHECK(std::abs(digamma(x + 1.0) - (digamma(x) + 1.0 / x)) <=
              1e-12 * (1.0 + std::abs(digamma(x + 1.0)) + 1.0 / x));
        CHECK(std::abs(trigamma(x + 1.0) - (trigamma(x) - 1.0 / (x * x))) <=
              1e-10 * (1.0 + std::abs(trigamma(x + 1.0)) + 1.0 / (x * x)));
    }
}

TEST_CASE("derivative consistency by central differences") {
    // The three functions are successive derivatives; finite differences at
    // moderate x agree to ~h^2.
    const double xs[] = {0.7, 1.3, 2.9, 5.5, 12.0, 47.0};
    for (double x : xs) {
        CAPTURE(x);
        const double h = 1e-5 * x;
        const double fd_digamma = (log_gamma(x + h) - log_gamma(x - h)) / (2.0 * h);
        CHECK(mixed_err(fd_digamma, digamma(x)) <= 1e-7);
        const double fd_trigamma = (digamma(x + h) - digamma(x - h)) / (2.0 * h);
        CHECK(mixed_err(fd_trigamma, trigamma(x)) <= 1e-7);
    }
}

TEST_CASE("monotonicity: digamma increases, trigamma decreases") {
    std::vector<double> xs;
    RngStream rng(0xabcULL);
    for (int i = 0; i < 200; ++i)
        xs.push_back(std::exp(rng.uniform() * std::log(1e8) + std::log(1e-3)));
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] == xs[i - 1]) continue;
        CHECK(digamma(xs[i]) > digamma(xs[i - 1]));
        CHECK(trigamma(xs[i]) < trigamma(xs[i - 1]));
        CHECK(trigamma(xs[i]) > 0.0);
    }
}

TEST_CASE("inverse_digamma round trips") {
    const double ts[] = {-25.0, -10.0, -1.0, 0.0, 0.5, 3.0, 10.0, 20.0};
    for (double t : ts) {
        CAPTURE(t);
        const double z = inverse_digamma(t);
        CHECK(z > 0.0);
        CHECK(mixed_err(digamma(z), t) <= 1e-11);
    }
    const double xs[] = {1e-4, 0.03, 0.8, 1.0, 7.0, 300.0, 1e6};
    for (double x : xs) {
        CAPTURE(x);
        CHECK(testutil::rel_err(inverse_digamma(digamma(x)), x) <= 1e-10);
    }
}

TEST_CASE("domain errors on nonpositive arguments") {
    CHECK_THROWS(log_gamma(0.0));
    CHECK_THROWS(digamma(-1.0));
    CHECK_THROWS(trigamma(0.0));
}

}  // TEST_SUITE
