#include "nbfit/apma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nbfit/common.hpp"
#include "nbfit/score.hpp"

namespace nbfit {

namespace {

void check_config(const FitConfig& cfg) {
    require_positive_finite(cfg.nu_max, "FitConfig: nu_max");
    require_positive_finite(cfg.epsilon, "FitConfig: epsilon");
    require_positive_finite(cfg.grad_tol, "FitConfig: grad_tol");
    if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0))
        throw DomainError("FitConfig: delta must lie in (0,1)");
    if (!(cfg.epsilon < cfg.nu_max))
        throw DomainError("FitConfig: epsilon must be < nu_max");
    if (cfg.max_iter < 1) throw DomainError("FitConfig: max_iter must be >= 1");
}

struct CoreResult {
    double nu = 0.0;
    double h = 0.0;
    int iterations = 0;
    bool converged = true;
};

// Safeguarded Newton ascent on theta = ln(nu) over the box
// [epsilon*(1+1e-9), nu_max]: gradient dh/dtheta = n g(nu) nu; fall back to a
// unit gradient step when the curvature is not negative; halve until ascent.
CoreResult maximize_h(const ScoreContext& ctx, const FitConfig& cfg, double nu0) {
    const double n = static_cast<double>(ctx.sample->n());
    const double lo = std::log(cfg.epsilon * (1.0 + 1e-9));
    const double hi = std::log(cfg.nu_max);

    double theta = std::clamp(std::log(nu0), lo, hi);
    double h_cur = profile_loglik(ctx, std::exp(theta));

    CoreResult out;
    out.converged = false;
    int it = 0;
    for (; it < cfg.max_iter; ++it) {
        const double nu = std::exp(theta);
        const double g = score_g(ctx, nu);
        const double d1 = n * g * nu;
        if (std::abs(d1) <= cfg.grad_tol * (1.0 + std::abs(h_cur))) {
            out.converged = true;
            break;
        }
        const double gp = score_g_prime(ctx, nu);
        const double d2 = n * (gp * nu * nu + g * nu);
        double step = (d2 < 0.0) ? -d1 / d2 : (d1 > 0.0 ? 1.0 : -1.0);
        step = std::clamp(step, -5.0, 5.0);

        double theta_new = theta;
        double h_new = h_cur;
        bool accepted = false;
        for (int halve = 0; halve < 40; ++halve) {
            const double cand = std::clamp(theta + step, lo, hi);
            if (cand == theta) break;  // pinned against the box
            const double h_cand = profile_loglik(ctx, std::exp(cand));
            if (h_cand >= h_cur) {
                theta_new = cand;
                h_new = h_cand;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || std::abs(theta_new - theta) < 1e-10) {
            // Either pinned at a bound with an outward gradient, or the step
            // collapsed: treat as converged at the box optimum.
            theta = theta_new;
            h_cur = h_new;
            out.converged = true;
            ++it;
            break;
        }
        theta = theta_new;
        h_cur = h_new;
    }
    // Snap onto the box bounds: exp(log(nu_max)) can land one ulp off, which
    // would make the boundary test downstream silently miss.
    out.nu = (theta >= hi) ? cfg.nu_max
             : (theta <= lo) ? cfg.epsilon * (1.0 + 1e-9)
                             : std::exp(theta);
    out.h = h_cur;
    out.iterations = it;
    return out;
}

// Shared Optimized branch: maximize, then prefer nu_max on a strictly larger
// h (boundary warning case).
CoreResult optimize_with_boundary_check(const ScoreContext& ctx, const FitConfig& cfg,
                                        double nu0) {
    CoreResult r = maximize_h(ctx, cfg, nu0);
    if (r.nu != cfg.nu_max) {
        const double h_bound = profile_loglik(ctx, cfg.nu_max);
        if (h_bound > r.h) {
            r.nu = cfg.nu_max;
            r.h = h_bound;
        }
    } else {
        r.nu = cfg.nu_max;  // exact value, not exp(log(nu_max))
        r.h = profile_loglik(ctx, cfg.nu_max);
    }
    return r;
}

}  // namespace

const NBParams& nb_params(const FitResult& r) {
    if (const auto* p = std::get_if<NBParams>(&r.params)) return *p;
    throw DomainError("FitResult holds extended-family parameters, not NBParams");
}

const ExtNBParams& ext_params(const FitResult& r) {
    if (const auto* p = std::get_if<ExtNBParams>(&r.params)) return *p;
    throw DomainError("FitResult holds NBParams, not extended-family parameters");
}

double moment_init(const CountSample& s, const FitConfig& cfg) {
    check_config(cfg);
    if (!(s.mean() > 0.0)) throw DomainError("moment_init: sample mean must be > 0");
    double excess = -1.0;  // forces the epsilon floor when S^2 is undefined
    if (s.var_unbiased()) excess = *s.var_unbiased() - s.mean();
    const double denom = std::max(cfg.epsilon, excess);
    return std::min(cfg.nu_max, s.mean() * s.mean() / denom);
}

FitResult fit_nb(const CountSample& s, const FitConfig& cfg) {
    check_config(cfg);
    FitResult res;
    if (s.mean() == 0.0) {
        res.params = NBParams(1.0, 1.0);
        res.loglik = 0.0;
        res.branch = FitBranch::AllZero;
        return res;
    }
    const ScoreContext ctx = make_score_context(s, cfg.delta);
    const double nu0 = moment_init(s, cfg);
    const CoreResult core = optimize_with_boundary_check(ctx, cfg, nu0);
    res.params = NBParams(core.nu, p_hat(core.nu, s.mean()));
    res.loglik = core.h;
    res.at_boundary = (core.nu == cfg.nu_max);
    res.branch = FitBranch::Optimized;
    res.iterations = core.iterations;
    res.init_nu = nu0;
    res.converged = core.converged;
    return res;
}

FitResult fit_ext_nb(const CountSample& s, const FitConfig& cfg) {
    check_config(cfg);
    FitResult res;
    if (s.mean() == 0.0) {
        res.params = ExtNBParams(0.0, 1.0);
        res.loglik = 0.0;
        res.branch = FitBranch::AllZero;
        return res;
    }
    if (s.mean() >= s.var_biased()) {
        res.params = ExtNBParams(s.mean(), 1.0);
        res.loglik = fit_poisson(s).second;
        res.branch = FitBranch::PoissonBranch;
        return res;
    }
    const ScoreContext ctx = make_score_context(s, cfg.delta);
    const double nu0 = moment_init(s, cfg);
    const CoreResult core = optimize_with_boundary_check(ctx, cfg, nu0);
    res.params = ExtNBParams(s.mean(), p_hat(core.nu, s.mean()));
    res.loglik = core.h;
    res.at_boundary = (core.nu == cfg.nu_max);
    res.branch = FitBranch::Optimized;
    res.iterations = core.iterations;
    res.init_nu = nu0;
    res.converged = core.converged;
    return res;
}

std::pair<double, double> fit_poisson(const CountSample& s) {
    const double lambda = s.mean();
    if (lambda == 0.0) return {0.0, 0.0};
    const PoissonParams d(lambda);
    Kahan acc;
    for (const auto& [y, f] : s.freq())
        acc.add(static_cast<double>(f) * pois_log_pmf(d, y));
    return {lambda, acc.value()};
}

std::pair<double, double> grid_oracle(const CountSample& s, const FitConfig& cfg,
                                      int grid_points) {
    check_config(cfg);
    if (grid_points < 1000) throw DomainError("grid_oracle: need at least 1000 grid points");
    if (!(s.mean() > 0.0)) throw DomainError("grid_oracle: sample mean must be > 0");
    const ScoreContext ctx = make_score_context(s, cfg.delta);

    const double lo = std::log(cfg.epsilon * (1.0 + 1e-9));
    const double hi = std::log(cfg.nu_max);
    int best_i = 0;
    double best_h = -std::numeric_limits<double>::infinity();
    std::vector<double> thetas(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(grid_points - 1);
        thetas[static_cast<std::size_t>(i)] = t;
        const double h = profile_loglik(ctx, std::exp(t));
        if (h > best_h) {
            best_h = h;
            best_i = i;
        }
    }
    // Golden-section refinement between the grid neighbors of the winner.
    double a = thetas[static_cast<std::size_t>(std::max(0, best_i - 1))];
    double b = thetas[static_cast<std::size_t>(std::min(grid_points - 1, best_i + 1))];
    const double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double hc = profile_loglik(ctx, std::exp(c));
    double hd = profile_loglik(ctx, std::exp(d));
    for (int k = 0; k < 90 && (b - a) > 1e-13; ++k) {
        if (hc >= hd) {
            b = d;
            d = c;
            hd = hc;
            c = b - invphi * (b - a);
            hc = profile_loglik(ctx, std::exp(c));
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + invphi * (b - a);
            hd = profile_loglik(ctx, std::exp(d));
        }
    }
    const double theta_best = (hc >= hd) ? c : d;
    double h_best = std::max(hc, hd);
    double nu_best = std::exp(theta_best);
    if (best_h > h_best) {  // grid winner can beat the refined bracket edge case
        nu_best = std::exp(thetas[static_cast<std::size_t>(best_i)]);
        h_best = best_h;
    }
    return {nu_best, h_best};
}

const char* to_string(FitBranch b) {
    switch (b) {
        case FitBranch::AllZero: return "all-zero";
        case FitBranch::PoissonBranch: return "poisson";
        case FitBranch::Optimized: return "optimized";
    }
    return "?";
}

}  // namespace nbfit
