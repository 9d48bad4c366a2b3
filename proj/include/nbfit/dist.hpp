#pragma once

#include <utility>
#include <vector>

#include "nbfit/rng.hpp"

namespace nbfit {

// Poisson(lambda): mean and variance lambda.
struct PoissonParams {
    double lambda;
    explicit PoissonParams(double lambda_);
};

// NB(nu, p): mean nu(1-p)/p, variance nu(1-p)/p^2. p = 1 is the point mass
// at zero (degenerate member).
struct NBParams {
    double nu;
    double p;
    NBParams(double nu_, double p_);
};

// Alternative second parameters used alongside nu.
enum class AltKind {
    NuMu,         // second = mu = nu(1-p)/p        (mean)
    NuBigP,       // second = P  = (1-p)/p          (odds)
    NuOneMinusP,  // second = P  = 1-p              (failure probability)
};

struct AltNBParams {
    AltKind kind;
    double nu;
    double second;
    AltNBParams(AltKind kind_, double nu_, double second_);
};

// Mean-indexed family: (mu>0, p<1) is NB with nu = mu p/(1-p); (mu>0, p=1)
// is Poisson(mu); mu=0 is the point mass at zero.
struct ExtNBParams {
    double mu;
    double p;
    ExtNBParams(double mu_, double p_);
};

double pois_log_pmf(const PoissonParams& d, long long y);
double nb_log_pmf(const NBParams& d, long long y);
double ext_nb_log_pmf(const ExtNBParams& d, long long y);

double pois_cdf(const PoissonParams& d, long long y);
double nb_cdf(const NBParams& d, long long y);

// cdf[k] = F(k) for k = 0..y_max, by stable forward recurrence.
std::vector<double> pois_cdf_table(const PoissonParams& d, long long y_max);
std::vector<double> nb_cdf_table(const NBParams& d, long long y_max);

// Smallest y with F(y) >= q, located by doubling search on the recurrence.
long long pois_quantile(const PoissonParams& d, double q);
long long nb_quantile(const NBParams& d, double q);

// (ln f_lambda(x), ln f_NB(nu, nu/(nu+lambda))(x)) with Gamma(x+1) in place
// of the factorial; x real >= 0.
std::pair<double, double> continuous_log_pmfs(double lambda, double nu, double x);

AltNBParams convert_to_alt(const NBParams& d, AltKind kind);
NBParams convert_to_nb(const AltNBParams& d);
NBParams convert_to_nb(const ExtNBParams& d);  // throws if p=1 or mu=0
ExtNBParams convert_to_ext(const NBParams& d);

double nb_mean(const NBParams& d);
double nb_variance(const NBParams& d);

std::vector<long long> sample_pois(const PoissonParams& d, long long n, RngStream& rng);
std::vector<long long> sample_nb(const NBParams& d, long long n, RngStream& rng);

// Raw variate helpers (deterministic given the stream).
double gamma_variate(RngStream& rng, double shape, double scale);
long long poisson_variate(RngStream& rng, double lambda);

}  // namespace nbfit
