#include "nbfit/score.hpp"

#include <cmath>
#include <string>

#include "nbfit/common.hpp"
#include "nbfit/special.hpp"

namespace nbfit {

namespace {

// Above this count the partial harmonic sums switch to digamma/trigamma
// differences (identical by the recurrence) to avoid O(y) loops.
constexpr long long kHarmonicCutoff = 10000;

void check_nu(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw DomainError("score: nu must be positive and finite, got " + std::to_string(nu));
}

void check_sample(const ScoreContext& ctx) {
    if (ctx.sample == nullptr) throw DomainError("score: null sample");
    if (!(ctx.sample->mean() > 0.0))
        throw DomainError("score: all-zero sample must be handled upstream");
}

// sum_{j=0}^{y-1} 1/(nu+j)
double harmonic(double nu, long long y) {
    if (y > kHarmonicCutoff) return digamma(nu + static_cast<double>(y)) - digamma(nu);
    Kahan acc;
    for (long long j = 0; j < y; ++j) acc.add(1.0 / (nu + static_cast<double>(j)));
    return acc.value();
}

// sum_{j=0}^{y-1} 1/(nu+j)^2
double harmonic2(double nu, long long y) {
    if (y > kHarmonicCutoff) return trigamma(nu) - trigamma(nu + static_cast<double>(y));
    Kahan acc;
    for (long long j = 0; j < y; ++j) {
        const double t = nu + static_cast<double>(j);
        acc.add(1.0 / (t * t));
    }
    return acc.value();
}

}  // namespace

ScoreContext make_score_context(const CountSample& s, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw DomainError("make_score_context: delta must lie in (0,1)");
    const ScoreForm form =
        (s.distinct_ratio() < delta) ? ScoreForm::FreqForm : ScoreForm::PsiForm;
    return ScoreContext{&s, form, delta};
}

ScoreContext make_score_context(const CountSample& s, ScoreForm forced, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw DomainError("make_score_context: delta must lie in (0,1)");
    return ScoreContext{&s, forced, delta};
}

double p_hat(double nu, double mean) {
    check_nu(nu);
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw DomainError("p_hat: mean must be finite and >= 0");
    return nu / (nu + mean);
}

double profile_loglik(const ScoreContext& ctx, double nu) {
    check_sample(ctx);
    check_nu(nu);
    const CountSample& s = *ctx.sample;
    const double n = static_cast<double>(s.n());
    const double m = s.mean();

    if (ctx.form == ScoreForm::FreqForm) {
        Kahan acc;
        for (const auto& [y, f] : s.freq()) {
            const double fd = static_cast<double>(f);
            const double yd = static_cast<double>(y);
            acc.add(fd * log_gamma(nu + yd));
            if (y > 0) acc.add(-fd * log_gamma(yd + 1.0));
        }
        acc.add(-n * log_gamma(nu));
        acc.add(-n * (nu + m) * std::log(nu + m));
        acc.add(n * nu * std::log(nu));
        acc.add(n * m * std::log(m));
        return acc.value();
    }

    // Per-observation form: sum of NB log-PMF terms at p = p_hat(nu).
    const double log_p = -std::log1p(m / nu);              // ln p_hat
    const double log_q = std::log(m) - std::log(nu + m);   // ln(1 - p_hat)
    const double lg_nu = log_gamma(nu);
    Kahan acc;
    for (const auto& [y, f] : s.freq()) {
        const double fd = static_cast<double>(f);
        const double yd = static_cast<double>(y);
        double term = log_gamma(nu + yd) - lg_nu + nu * log_p + yd * log_q;
        if (y > 0) term -= log_gamma(yd + 1.0);
        acc.add(fd * term);
    }
    return acc.value();
}

double score_g(const ScoreContext& ctx, double nu) {
    check_sample(ctx);
    check_nu(nu);
    const CountSample& s = *ctx.sample;
    const double n = static_cast<double>(s.n());
    const double m = s.mean();

    Kahan acc;
    if (ctx.form == ScoreForm::FreqForm) {
        for (const auto& [y, f] : s.freq()) {
            if (y == 0) continue;
            acc.add(static_cast<double>(f) * harmonic(nu, y));
        }
    } else {
        const double psi_nu = digamma(nu);
        for (const auto& [y, f] : s.freq()) {
            if (y == 0) continue;
            acc.add(static_cast<double>(f) *
                    (digamma(nu + static_cast<double>(y)) - psi_nu));
        }
    }
    return acc.value() / n - std::log1p(m / nu);
}

double score_g_prime(const ScoreContext& ctx, double nu) {
    check_sample(ctx);
    check_nu(nu);
    const CountSample& s = *ctx.sample;
    const double n = static_cast<double>(s.n());
    const double m = s.mean();

    Kahan acc;
    if (ctx.form == ScoreForm::FreqForm) {
        for (const auto& [y, f] : s.freq()) {
            if (y == 0) continue;
            acc.add(-static_cast<double>(f) * harmonic2(nu, y));
        }
        return acc.value() / n + m / (nu * (nu + m));
    }
    const double tri_nu = trigamma(nu);
    for (const auto& [y, f] : s.freq()) {
        if (y == 0) continue;
        acc.add(static_cast<double>(f) *
                (trigamma(nu + static_cast<double>(y)) - tri_nu));
    }
    return acc.value() / n + 1.0 / nu - 1.0 / (nu + m);
}

}  // namespace nbfit
