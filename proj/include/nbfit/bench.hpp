#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbfit/apma.hpp"
#include "nbfit/mc.hpp"

namespace nbfit {

struct GridSpec {
    std::vector<double> nu_values;
    std::vector<double> p_values;
    std::vector<long long> n_values;
    int reps = 20;
    std::uint64_t seed = 0;
};

// The 5x5 (nu, p) grid used throughout the experiments.
GridSpec default25_grid(const std::vector<long long>& n_values, int reps, std::uint64_t seed);

struct GridCell {
    double nu = 0.0;
    double p = 0.0;
    long long n = 0;
    int reps = 0;
    int failures = 0;          // fit_nb or fit_ext_nb threw (expected 0)
    double mean_lik_ratio = 0.0;  // mean exp(h_oracle - h_fit)
    double max_lik_ratio = 0.0;
    double mean_fit_ms = 0.0;  // informational only
    double boundary_frac = 0.0;
};

struct GridResult {
    std::vector<GridCell> cells;
};

GridResult run_grid(const GridSpec& spec, const FitConfig& cfg, bool with_oracle = true,
                    int oracle_points = 1000, ExecMode exec = ExecMode::Parallel);

// CSV with a header row; 6 significant digits.
std::string grid_csv(const GridResult& result);

struct DispersionCell {
    double lambda = 0.0;
    long long n = 0;
    double prob = 0.0;  // fraction of replicates with S_n^2 > mean
};

std::vector<DispersionCell> dispersion_probability(const std::vector<double>& lambda_values,
                                                   const std::vector<long long>& n_values,
                                                   int reps, std::uint64_t seed,
                                                   ExecMode exec = ExecMode::Parallel);

std::string dispersion_csv(const std::vector<DispersionCell>& table);

}  // namespace nbfit
