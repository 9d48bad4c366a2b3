#pragma once

#include <functional>
#include <vector>

namespace nbfit {

// A distribution on {0,1,2,...} with enough tail structure to let series be
// truncated with a proven error bound.
struct DiscreteLaw {
    std::function<double(long long)> pmf_at;
    double mean;
    // Upper bound on 1 - F(y); may be the trivial bound 1.
    std::function<double(long long)> tail_bound;
    // Bound q on sup_{k >= y} pmf(k+1)/pmf(k); values >= 1 mean "no decay yet".
    std::function<double(long long)> tail_ratio;
};

DiscreteLaw poisson_law(double lambda);
DiscreteLaw nb_law(double nu0, double p);
DiscreteLaw point_mass_zero();

// G_F(nu) = sum_{y>=0} (1-F(y))/(nu+y) - ln(1 + mean/nu), truncated once the
// tail bound certifies the remainder is below tol.
double G_of(const DiscreteLaw& law, double nu, double tol);

// G_of specialized to Poisson(lambda): the a.s. limit of the score g under
// Poisson sampling.
double G_lambda(double lambda, double nu, double tol);

// Pointwise and cumulative differences between NB(nu, nu/(nu+lambda)) and
// Poisson(lambda), with the two sign-change indices of d and the single
// sign-change index of D.
struct DiffProfile {
    std::vector<double> d;  // d[y] = f_NB(y) - f_pois(y)
    std::vector<double> D;  // running sum of d
    long long K1 = 0;       // last index of the initial nonnegative run of d
    long long Kstar = 0;    // last index with D >= 0
    long long K2 = 0;       // first index of the final nonnegative run of d
    long long y_cut = 0;
};

DiffProfile diff_profile(double lambda, double nu, double tol = 1e-10);

// sum_y D(y)/(nu+y) over the computed window; strictly positive in theory.
double weighted_diff_sum(const DiffProfile& prof, double nu);

}  // namespace nbfit
