#pragma once

#include <utility>
#include <variant>

#include "nbfit/dist.hpp"
#include "nbfit/stats.hpp"

namespace nbfit {

struct FitConfig {
    double nu_max = 1e4;
    double epsilon = 1e-3;
    double delta = 0.1;
    int max_iter = 500;
    double grad_tol = 1e-8;

    bool operator==(const FitConfig&) const = default;
};

enum class FitBranch {
    AllZero,        // sample mean 0: degenerate member
    PoissonBranch,  // extended family, mean >= biased variance
    Optimized,      // interior/boundary maximization of h(nu)
};

struct FitResult {
    std::variant<NBParams, ExtNBParams> params{NBParams(1.0, 1.0)};
    double loglik = 0.0;
    bool at_boundary = false;  // nu_hat == nu_max
    FitBranch branch = FitBranch::Optimized;
    int iterations = 0;
    double init_nu = 0.0;   // 0 when no optimization ran
    bool converged = true;  // false only if max_iter exhausted without meeting a test
};

const NBParams& nb_params(const FitResult& r);
const ExtNBParams& ext_params(const FitResult& r);

// min{nu_max, mean^2 / max(epsilon, S^2 - mean)} with the unbiased S^2;
// an absent S^2 (n = 1) falls through to the epsilon floor.
double moment_init(const CountSample& s, const FitConfig& cfg);

// NB(nu, p) maximum likelihood over nu in (epsilon, nu_max], p profiled out.
FitResult fit_nb(const CountSample& s, const FitConfig& cfg = {});

// Extended family: mu_hat = mean always; p_hat = 1 on the equidispersed
// branch, else profiled as in fit_nb.
FitResult fit_ext_nb(const CountSample& s, const FitConfig& cfg = {});

// (lambda_hat, loglik) with lambda_hat = mean and the 0*ln 0 = 0 convention.
std::pair<double, double> fit_poisson(const CountSample& s);

// Brute-force maximizer of h over a log grid plus golden-section refinement;
// independent cross-check for fit_nb. grid_points >= 1000.
std::pair<double, double> grid_oracle(const CountSample& s, const FitConfig& cfg,
                                      int grid_points);

const char* to_string(FitBranch b);

}  // namespace nbfit
