#include "nbfit/limits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbfit/common.hpp"
#include "nbfit/dist.hpp"

namespace nbfit {

namespace {

constexpr long long kSeriesCap = 10000000LL;  // 1e7 terms
constexpr double kDeadband = 1e-14;           // sign classification slack

[[noreturn]] void structural(const char* what, long long index) {
    throw StructuralError(std::string("diff_profile: ") + what + " violated at index " +
                          std::to_string(index));
}

}  // namespace

DiscreteLaw poisson_law(double lambda) {
    require_positive_finite(lambda, "poisson_law: lambda");
    const PoissonParams d(lambda);
    return DiscreteLaw{
        [d](long long y) { return std::exp(pois_log_pmf(d, y)); },
        lambda,
        // Chernoff: P(Y >= a) <= exp(-lambda) (e lambda / a)^a for a > lambda.
        [lambda](long long y) {
            const double a = static_cast<double>(y) + 1.0;
            if (a <= lambda) return 1.0;
            return std::exp(-lambda + a + a * (std::log(lambda) - std::log(a)));
        },
        [lambda](long long y) { return lambda / (static_cast<double>(y) + 1.0); },
    };
}

DiscreteLaw nb_law(double nu0, double p) {
    const NBParams d(nu0, p);
    if (p == 1.0) return point_mass_zero();
    const double q = 1.0 - p;
    auto ratio = [nu0, q](long long y) {
        // sup_{k >= y} (nu0+k) q / (k+1): decreasing in k for nu0 > 1, else
        // increasing toward q.
        const double at_y = (nu0 + static_cast<double>(y)) * q / (static_cast<double>(y) + 1.0);
        return std::max(at_y, q);
    };
    return DiscreteLaw{
        [d](long long y) { return std::exp(nb_log_pmf(d, y)); },
        nb_mean(d),
        [d, ratio](long long y) {
            const double r = ratio(y + 1);
            if (r >= 1.0) return 1.0;
            return std::exp(nb_log_pmf(d, y + 1)) / (1.0 - r);
        },
        ratio,
    };
}

DiscreteLaw point_mass_zero() {
    return DiscreteLaw{
        [](long long y) { return y == 0 ? 1.0 : 0.0; },
        0.0,
        [](long long) { return 0.0; },
        [](long long) { return 0.0; },
    };
}

double G_of(const DiscreteLaw& law, double nu, double tol) {
    require_positive_finite(nu, "G_of: nu");
    require_positive_finite(tol, "G_of: tol");
    // Stable rearrangement of the tail-sum form. With S(y) = 1 - F(y) and
    // mean m = sum S(y),
    //   G(nu) = sum S(y)/(nu+y) - log(1 + m/nu)
    //         = [m/nu - log1p(m/nu)] - sum_{y>=1} S(y) * y / (nu (nu+y)).
    // Both pieces are sums of positive terms, so the nu^-2 cancellation that
    // makes the direct form unresolvable at large nu happens in exact
    // arithmetic here; the residual value ~ m^2/(2 nu^3) survives in doubles.
    const double x = law.mean / nu;
    double smooth;  // x - log1p(x)
    if (x < 1e-4) {
        smooth = x * x *
                 (1.0 / 2 - x * (1.0 / 3 - x * (1.0 / 4 - x * (1.0 / 5 - x * (1.0 / 6)))));
    } else {
        smooth = x - std::log1p(x);
    }
    Kahan series;
    Kahan rem;  // S(y) = 1 - F(y), maintained by subtraction
    rem.add(1.0);
    for (long long y = 0; y < kSeriesCap; ++y) {
        rem.add(-law.pmf_at(y));
        const double tail = std::max(rem.value(), 0.0);
        const double yd = static_cast<double>(y);
        if (y > 0) series.add(tail * yd / (nu * (nu + yd)));
        // Once pmf ratios beyond y stay <= q < 1, survival decays at least
        // geometrically with the same q, so the dropped terms obey
        //   sum_{k>y} S(k) k/(nu(nu+k)) <= S(y+1) / ((1-q) nu).
        const double q = law.tail_ratio(y + 1);
        if (q < 1.0) {
            const double s_next = std::min(law.tail_bound(y), tail + 1e-300);
            const double remaining = s_next / ((1.0 - q) * nu);
            // Absolute target per the contract, sharpened to a relative one so
            // the near-cancelling pieces stay comparable at every magnitude.
            const double target =
                std::min(tol, 1e-12 * (series.value() + smooth) + 1e-300);
            if (remaining < target) return smooth - series.value();
        }
    }
    throw PrecisionError("G_of: tail truncation did not reach tol within " +
                         std::to_string(kSeriesCap) + " terms");
}

double G_lambda(double lambda, double nu, double tol) {
    return G_of(poisson_law(lambda), nu, tol);
}

DiffProfile diff_profile(double lambda, double nu, double tol) {
    require_positive_finite(lambda, "diff_profile: lambda");
    require_positive_finite(nu, "diff_profile: nu");
    if (!(tol >= 1e-12))
        throw DomainError("diff_profile: tol below 1e-12 is not classifiable in doubles");
    if (lambda > 700.0)
        throw PrecisionError("diff_profile: pmf(0) underflows for lambda > 700");
    // The two laws differ at y = 0 by exp(lambda - nu*log1p(lambda/nu)) - 1,
    // roughly lambda^2/(2 nu).  When that gap sits below the rounding noise
    // of the log-pmfs themselves the whole profile is unresolvable and every
    // downstream sign classification would be fiction.
    if (lambda - nu * std::log1p(lambda / nu) < 1e-13 * (1.0 + lambda))
        throw PrecisionError(
            "diff_profile: the matched NB member is numerically indistinguishable "
            "from the Poisson law at this nu");
    DiffProfile prof;
    Kahan cum;
    Kahan rem_nb, rem_pois;
    rem_nb.add(1.0);
    rem_pois.add(1.0);
    // Forward pmf recurrences, kept alongside the running tails.  The NB
    // leg is evaluated in the matched-mean parameterization directly:
    // routing nu/(nu+lambda) through a stored double p would lose ~nu*eps
    // of exponent accuracy in nu*log(p) and all of 1-p's low digits, which
    // is fatal to the D profile's ~nu^-2 structure at large nu.
    double pmf_nb = std::exp(-nu * std::log1p(lambda / nu));
    double pmf_pois = std::exp(-lambda);
    const double qfac = lambda / (nu + lambda);
    long long y = 0;
    while (true) {
        prof.d.push_back(pmf_nb - pmf_pois);
        cum.add(pmf_nb - pmf_pois);
        prof.D.push_back(cum.value());
        rem_nb.add(-pmf_nb);
        rem_pois.add(-pmf_pois);

        const double qnb = std::min(1.0, std::max((nu + static_cast<double>(y) + 1.0) * qfac /
                                                      (static_cast<double>(y) + 2.0),
                                                  qfac));
        const double qp = lambda / (static_cast<double>(y) + 2.0);
        if (qnb < 1.0 && qp < 1.0) {
            const double tail_nb = std::max(rem_nb.value(), 0.0);
            const double tail_pois = std::max(rem_pois.value(), 0.0);
            const double remaining =
                tail_nb * qnb / (1.0 - qnb) + tail_pois * qp / (1.0 - qp) + tail_nb + tail_pois;
            if (remaining < 0.5 * tol) break;
        }
        if (y + 1 >= kSeriesCap)
            throw PrecisionError("diff_profile: support scan exceeded cap");
        pmf_nb *= (nu + static_cast<double>(y)) * qfac / (static_cast<double>(y) + 1.0);
        pmf_pois *= lambda / (static_cast<double>(y) + 1.0);
        ++y;
    }
    prof.y_cut = y;
    const long long m = static_cast<long long>(prof.d.size()) - 1;

    // K1: last index of the initial nonnegative run of d.
    long long k1 = 0;
    while (k1 + 1 <= m && prof.d[static_cast<std::size_t>(k1 + 1)] >= -kDeadband) ++k1;
    // K2: first index of the final nonnegative run of d.
    long long k2 = m;
    while (k2 - 1 >= 0 && prof.d[static_cast<std::size_t>(k2 - 1)] >= -kDeadband) --k2;
    // Kstar: last index with D >= 0, i.e. just before D first dips negative.
    long long kstar = m;
    for (long long i = 0; i <= m; ++i) {
        if (prof.D[static_cast<std::size_t>(i)] < -kDeadband) {
            kstar = i - 1;
            break;
        }
    }
    prof.K1 = k1;
    prof.Kstar = kstar;
    prof.K2 = k2;

    // Shape checks; a violation falsifies the implementation.  K1 and K* may
    // be 0 under the last-index conventions: the initial nonnegative run of d
    // can be the single point {0} (lambda = 1: d(1) < 0 for every nu), and D
    // can already be negative at y = 1 (lambda = 0.5, nu = 1).  Only K2 is
    // guaranteed positive, since D(0) = d(0) > 0 forces the final
    // nonnegative run of d to start past 0.
    // Strict positivity, not the deadband: nu*log1p(lambda/nu) < lambda makes
    // the sign analytic, and at large lambda the value is far below any
    // absolute slack (e.g. ~2e-18 at lambda = 40, nu = 2000) yet carries a
    // ~50% relative gap, so it is the best-resolved number in the profile.
    if (!(prof.d[0] > 0.0)) structural("d(0) > 0", 0);
    if (!(k1 <= kstar && kstar < k2 && k2 < prof.y_cut)) structural("K1 <= K* < K2 < y_cut", kstar);
    bool negative_seen = false;
    for (long long i = k1 + 1; i < k2; ++i) {
        const double v = prof.d[static_cast<std::size_t>(i)];
        if (v > kDeadband) structural("d < 0 between K1 and K2", i);
        if (v < -kDeadband) negative_seen = true;
    }
    if (!negative_seen) structural("d strictly negative somewhere in (K1,K2)", k1 + 1);
    for (long long i = 0; i < kstar; ++i)
        if (prof.D[static_cast<std::size_t>(i)] < -kDeadband) structural("D > 0 before K*", i);
    for (long long i = kstar + 1; i <= m; ++i)
        if (prof.D[static_cast<std::size_t>(i)] > kDeadband) structural("D < 0 after K*", i);
    // Max of D sits at K1; min at K2-1 (or K2 when d(K2) = 0) — the discrete
    // decline stops one step before the nonnegative run resumes.
    double dmax = prof.D[0], dmin = prof.D[0];
    long long argmax = 0, argmin = 0;
    for (long long i = 0; i <= m; ++i) {
        const double v = prof.D[static_cast<std::size_t>(i)];
        if (v > dmax) {
            dmax = v;
            argmax = i;
        }
        if (v < dmin) {
            dmin = v;
            argmin = i;
        }
    }
    if (argmax != k1 && std::abs(dmax - prof.D[static_cast<std::size_t>(k1)]) > 1e-13)
        structural("D max at K1", argmax);
    if (argmin != k2 && argmin != k2 - 1 &&
        std::abs(dmin - prof.D[static_cast<std::size_t>(k2 - 1)]) > 1e-13)
        structural("D min adjacent to K2", argmin);
    if (!(prof.D[static_cast<std::size_t>(k1)] > 0.0)) structural("D(K1) > 0", k1);
    if (!(prof.D[static_cast<std::size_t>(k2 - 1)] < 0.0)) structural("D(K2-1) < 0", k2 - 1);
    // Total mass difference telescopes to zero up to truncation.
    if (std::abs(prof.D[static_cast<std::size_t>(m)]) > 10.0 * tol)
        structural("sum d = 0 within tolerance", m);
    return prof;
}

double weighted_diff_sum(const DiffProfile& prof, double nu) {
    require_positive_finite(nu, "weighted_diff_sum: nu");
    Kahan acc;
    for (std::size_t i = 0; i < prof.D.size(); ++i)
        acc.add(prof.D[i] / (nu + static_cast<double>(i)));
    return acc.value();
}

}  // namespace nbfit
