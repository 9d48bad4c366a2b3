#include "nbfit/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nbfit/common.hpp"
#include "nbfit/special.hpp"

namespace nbfit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Below this log-pmf the recurrence anchor at y=0 would flush to zero, so the
// table is anchored at the mode instead and filled in both directions.
constexpr double kLogUnderflow = -700.0;
constexpr long long kQuantileCap = 100000000LL;  // 1e8 support scan ceiling

void require_count(long long y, const char* what) {
    if (y < 0) throw DomainError(std::string(what) + ": y must be >= 0");
}

// pmf over 0..y_max via the forward ratio pmf(k+1) = pmf(k) * ratio(k).
// ratio must be callable as ratio(k) for k = 0..y_max-1.
template <typename LogPmf, typename Ratio>
std::vector<double> pmf_table(long long y_max, LogPmf log_pmf, Ratio ratio) {
    std::vector<double> pmf(static_cast<std::size_t>(y_max) + 1, 0.0);
    const double lp0 = log_pmf(0);
    if (lp0 >= kLogUnderflow) {
        pmf[0] = std::exp(lp0);
        for (long long k = 0; k < y_max; ++k)
            pmf[static_cast<std::size_t>(k) + 1] = pmf[static_cast<std::size_t>(k)] * ratio(k);
        return pmf;
    }
    // Anchor at the most probable point inside the window and recur outward.
    long long mode = 0;
    double best = lp0;
    for (long long k = 1; k <= y_max; ++k) {
        const double lp = log_pmf(k);
        if (lp > best) {
            best = lp;
            mode = k;
        }
    }
    pmf[static_cast<std::size_t>(mode)] = std::exp(best);
    for (long long k = mode; k < y_max; ++k)
        pmf[static_cast<std::size_t>(k) + 1] = pmf[static_cast<std::size_t>(k)] * ratio(k);
    for (long long k = mode; k > 0; --k) {
        const double r = ratio(k - 1);
        pmf[static_cast<std::size_t>(k) - 1] =
            (r > 0.0) ? pmf[static_cast<std::size_t>(k)] / r : std::exp(log_pmf(k - 1));
    }
    return pmf;
}

std::vector<double> accumulate_cdf(const std::vector<double>& pmf) {
    std::vector<double> cdf(pmf.size());
    Kahan acc;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        acc.add(pmf[k]);
        cdf[k] = std::min(acc.value(), 1.0);
    }
    return cdf;
}

// Doubling search for the smallest y with F(y) >= q.
template <typename TableFn>
long long quantile_by_doubling(double q, TableFn cdf_to) {
    if (!(q > 0.0) || !(q < 1.0))
        throw DomainError("quantile: q must lie in (0,1), got " + std::to_string(q));
    long long hi = 16;
    while (true) {
        const std::vector<double> cdf = cdf_to(hi);
        if (cdf.back() >= q) {
            for (std::size_t k = 0; k < cdf.size(); ++k)
                if (cdf[k] >= q) return static_cast<long long>(k);
        }
        if (hi >= kQuantileCap)
            throw PrecisionError("quantile: support scan exceeded cap " +
                                 std::to_string(kQuantileCap));
        hi = std::min(kQuantileCap, hi * 2);
    }
}

}  // namespace

PoissonParams::PoissonParams(double lambda_) : lambda(lambda_) {
    require_positive_finite(lambda, "PoissonParams: lambda");
}

NBParams::NBParams(double nu_, double p_) : nu(nu_), p(p_) {
    require_positive_finite(nu, "NBParams: nu");
    if (!(p > 0.0) || !(p <= 1.0))
        throw DomainError("NBParams: p must lie in (0,1], got " + std::to_string(p));
}

AltNBParams::AltNBParams(AltKind kind_, double nu_, double second_)
    : kind(kind_), nu(nu_), second(second_) {
    require_positive_finite(nu, "AltNBParams: nu");
    if (!std::isfinite(second) || second < 0.0)
        throw DomainError("AltNBParams: second parameter must be finite and >= 0");
    if (kind == AltKind::NuOneMinusP && !(second < 1.0))
        throw DomainError("AltNBParams: 1-p form needs second in [0,1)");
}

ExtNBParams::ExtNBParams(double mu_, double p_) : mu(mu_), p(p_) {
    if (!std::isfinite(mu) || mu < 0.0)
        throw DomainError("ExtNBParams: mu must be finite and >= 0");
    if (!(p > 0.0) || !(p <= 1.0))
        throw DomainError("ExtNBParams: p must lie in (0,1], got " + std::to_string(p));
}

double pois_log_pmf(const PoissonParams& d, long long y) {
    require_count(y, "pois_log_pmf");
    const double yd = static_cast<double>(y);
    return yd * std::log(d.lambda) - d.lambda - log_gamma(yd + 1.0);
}

double nb_log_pmf(const NBParams& d, long long y) {
    require_count(y, "nb_log_pmf");
    if (d.p == 1.0) return (y == 0) ? 0.0 : kNegInf;
    const double yd = static_cast<double>(y);
    return log_gamma(d.nu + yd) - log_gamma(d.nu) - log_gamma(yd + 1.0) +
           d.nu * std::log(d.p) + yd * std::log1p(-d.p);
}

double ext_nb_log_pmf(const ExtNBParams& d, long long y) {
    require_count(y, "ext_nb_log_pmf");
    if (d.mu == 0.0) return (y == 0) ? 0.0 : kNegInf;
    if (d.p == 1.0) return pois_log_pmf(PoissonParams(d.mu), y);
    return nb_log_pmf(NBParams(d.mu * d.p / (1.0 - d.p), d.p), y);
}

std::vector<double> pois_cdf_table(const PoissonParams& d, long long y_max) {
    require_count(y_max, "pois_cdf_table");
    const double lambda = d.lambda;
    auto lp = [&](long long y) { return pois_log_pmf(d, y); };
    auto ratio = [lambda](long long k) { return lambda / static_cast<double>(k + 1); };
    return accumulate_cdf(pmf_table(y_max, lp, ratio));
}

std::vector<double> nb_cdf_table(const NBParams& d, long long y_max) {
    require_count(y_max, "nb_cdf_table");
    if (d.p == 1.0) return std::vector<double>(static_cast<std::size_t>(y_max) + 1, 1.0);
    const double nu = d.nu, q = 1.0 - d.p;
    auto lp = [&](long long y) { return nb_log_pmf(d, y); };
    auto ratio = [nu, q](long long k) {
        return (nu + static_cast<double>(k)) * q / static_cast<double>(k + 1);
    };
    return accumulate_cdf(pmf_table(y_max, lp, ratio));
}

double pois_cdf(const PoissonParams& d, long long y) {
    require_count(y, "pois_cdf");
    return pois_cdf_table(d, y).back();
}

double nb_cdf(const NBParams& d, long long y) {
    require_count(y, "nb_cdf");
    if (d.p == 1.0) return 1.0;
    return nb_cdf_table(d, y).back();
}

long long pois_quantile(const PoissonParams& d, double q) {
    return quantile_by_doubling(q, [&](long long y) { return pois_cdf_table(d, y); });
}

long long nb_quantile(const NBParams& d, double q) {
    if (d.p == 1.0) return 0;
    return quantile_by_doubling(q, [&](long long y) { return nb_cdf_table(d, y); });
}

std::pair<double, double> continuous_log_pmfs(double lambda, double nu, double x) {
    require_positive_finite(lambda, "continuous_log_pmfs: lambda");
    require_positive_finite(nu, "continuous_log_pmfs: nu");
    if (!(x >= 0.0) || !std::isfinite(x))
        throw DomainError("continuous_log_pmfs: x must be finite and >= 0");
    const double lgx1 = log_gamma(x + 1.0);
    const double log_pois = (x == 0.0 ? 0.0 : x * std::log(lambda)) - lambda - lgx1;
    // p = nu/(nu+lambda): ln p = -log1p(lambda/nu), ln(1-p) = ln lambda - ln(nu+lambda)
    const double log_nb = log_gamma(nu + x) - log_gamma(nu) - lgx1 -
                          nu * std::log1p(lambda / nu) +
                          (x == 0.0 ? 0.0 : x * (std::log(lambda) - std::log(nu + lambda)));
    return {log_pois, log_nb};
}

AltNBParams convert_to_alt(const NBParams& d, AltKind kind) {
    switch (kind) {
        case AltKind::NuMu: return AltNBParams(kind, d.nu, d.nu * (1.0 - d.p) / d.p);
        case AltKind::NuBigP: return AltNBParams(kind, d.nu, (1.0 - d.p) / d.p);
        case AltKind::NuOneMinusP: return AltNBParams(kind, d.nu, 1.0 - d.p);
    }
    throw DomainError("convert_to_alt: bad kind");
}

NBParams convert_to_nb(const AltNBParams& d) {
    switch (d.kind) {
        case AltKind::NuMu: return NBParams(d.nu, d.nu / (d.nu + d.second));
        case AltKind::NuBigP: return NBParams(d.nu, 1.0 / (1.0 + d.second));
        case AltKind::NuOneMinusP: return NBParams(d.nu, 1.0 - d.second);
    }
    throw DomainError("convert_to_nb: bad kind");
}

NBParams convert_to_nb(const ExtNBParams& d) {
    if (d.p == 1.0)
        throw DomainError("convert_to_nb: extended family with p=1 has no finite-nu form");
    if (d.mu == 0.0)
        throw DomainError("convert_to_nb: mu=0 point mass has no unique nu");
    return NBParams(d.mu * d.p / (1.0 - d.p), d.p);
}

ExtNBParams convert_to_ext(const NBParams& d) {
    return ExtNBParams(d.nu * (1.0 - d.p) / d.p, d.p);
}

double nb_mean(const NBParams& d) { return d.nu * (1.0 - d.p) / d.p; }
double nb_variance(const NBParams& d) { return d.nu * (1.0 - d.p) / (d.p * d.p); }

double gamma_variate(RngStream& rng, double shape, double scale) {
    require_positive_finite(shape, "gamma_variate: shape");
    require_positive_finite(scale, "gamma_variate: scale");
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a+1) * U^{1/a}
        double u;
        do {
            u = rng.uniform();
        } while (u <= 0.0);
        return gamma_variate(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return scale * d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return scale * d * v;
    }
}

long long poisson_variate(RngStream& rng, double lambda) {
    if (lambda == 0.0) return 0;
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError("poisson_variate: lambda must be >= 0 and finite");
    if (lambda < 10.0) {
        // Sequential-search inversion.
        const double p0 = std::exp(-lambda);
        double prod = rng.uniform();
        long long k = 0;
        double pmf = p0;
        double cum = p0;
        while (prod > cum) {
            ++k;
            pmf *= lambda / static_cast<double>(k);
            cum += pmf;
            if (k > 10000) break;  // cum ~ 1 by then; guards fp stall
        }
        return k;
    }
    // Hoermann's PTRS transformed rejection; valid for lambda >= 10.
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
        const double u = rng.uniform() - 0.5;
        double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double k = kf;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            k * loglam - lambda - log_gamma(k + 1.0))
            return static_cast<long long>(kf);
    }
}

std::vector<long long> sample_pois(const PoissonParams& d, long long n, RngStream& rng) {
    if (n < 1) throw DomainError("sample_pois: n must be >= 1");
    std::vector<long long> out(static_cast<std::size_t>(n));
    for (auto& y : out) y = poisson_variate(rng, d.lambda);
    return out;
}

std::vector<long long> sample_nb(const NBParams& d, long long n, RngStream& rng) {
    if (n < 1) throw DomainError("sample_nb: n must be >= 1");
    std::vector<long long> out(static_cast<std::size_t>(n));
    if (d.p == 1.0) {
        std::fill(out.begin(), out.end(), 0LL);
        return out;
    }
    const double scale = (1.0 - d.p) / d.p;
    for (auto& y : out) y = poisson_variate(rng, gamma_variate(rng, d.nu, scale));
    return out;
}

}  // namespace nbfit
