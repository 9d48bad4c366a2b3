#pragma once

#include "nbfit/stats.hpp"

namespace nbfit {

enum class ScoreForm {
    FreqForm,  // frequency-table harmonic sums
    PsiForm,   // per-observation digamma/trigamma calls
};

// Bundles the sample with the evaluation form chosen by the distinct-ratio
// branch rule. The sample must outlive the context.
struct ScoreContext {
    const CountSample* sample;
    ScoreForm form;
    double delta;
};

// form = FreqForm iff sample.distinct_ratio() < delta.
ScoreContext make_score_context(const CountSample& s, double delta = 0.1);
// Test hook: force a form regardless of the branch rule.
ScoreContext make_score_context(const CountSample& s, ScoreForm forced, double delta = 0.1);

// p maximizing the likelihood at fixed nu: nu/(nu + mean).
double p_hat(double nu, double mean);

// h(nu) = l(nu, p_hat(nu)), the profile log-likelihood.
double profile_loglik(const ScoreContext& ctx, double nu);

// g(nu) = h'(nu)/n, the efficient score up to the factor n.
double score_g(const ScoreContext& ctx, double nu);

double score_g_prime(const ScoreContext& ctx, double nu);

}  // namespace nbfit
