#pragma once

#include <cstdint>
#include <vector>

#include "nbfit/apma.hpp"
#include "nbfit/mc.hpp"
#include "nbfit/stats.hpp"

namespace nbfit {

struct GofConfig {
    int boot_reps = 1000;
    double level = 0.05;
    std::uint64_t seed = 0;
    FitConfig fit_cfg{};
    ExecMode exec = ExecMode::Parallel;
};

struct GofResult {
    double D_n = 0.0;
    double d_n = 0.0;
    double p_value = 1.0;
    bool reject = false;  // D_n strictly above d_n
    FitResult fitted;
    std::vector<double> boot_stats;  // replicate order, not sorted
};

// sup over the table's index range of |F_n(y) - cdf[y]|.
double ks_statistic(const CountSample& s, const std::vector<double>& cdf);

// Fitted-NB CDF evaluated out to max(sample max, 1-1e-9 quantile).
std::vector<double> fitted_cdf_table(const NBParams& d, const CountSample& s);

// Parametric bootstrap: fit, then B refits of samples drawn from the fitted
// law; d_n is the type-7 (1-level)-quantile of the bootstrap statistics.
GofResult bootstrap_test(const std::vector<long long>& data, const GofConfig& cfg);

// Empirical (n-1)(q)-interpolated order statistic of a sorted vector.
double type7_quantile(const std::vector<double>& sorted_values, double q);

struct PowerRow {
    double nu_hat = 0.0;
    double p_hat = 0.0;
    double D_n = 0.0;
    double d_n = 0.0;
    bool reject = false;
};

struct PowerSummary {
    std::vector<PowerRow> rows;
    double median_nu = 0.0, median_p = 0.0, median_Dn = 0.0, median_dn = 0.0;
    double mean_nu = 0.0, mean_p = 0.0, mean_Dn = 0.0, mean_dn = 0.0;
    double power = 0.0;  // rejection fraction
};

// Poisson(lambda) data fitted as NB: the KS test's power against the
// boundary member.
PowerSummary power_experiment(double lambda, long long n, int reps, const GofConfig& cfg);

struct CollapseRow {
    long long n = 0;
    double median_Dn = 0.0;
    double median_model_dist = 0.0;  // sup_y |F_fitted - F_lambda|
};

// Medians of D_n and of the fitted-vs-true CDF distance across an increasing
// n grid; both collapse toward zero as n grows.
std::vector<CollapseRow> asymptotic_check(double lambda, const std::vector<long long>& n_grid,
                                          int reps, std::uint64_t seed,
                                          const FitConfig& fit_cfg = {},
                                          ExecMode exec = ExecMode::Parallel);

}  // namespace nbfit
