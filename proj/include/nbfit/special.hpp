#pragma once

namespace nbfit {

// ln Gamma(x) for x > 0. Relative error within ~1e-12 over [1e-6, 1e8];
// exact 0 at x = 1 and x = 2.
double log_gamma(double x);

// Psi(x) = d/dx ln Gamma(x) for x > 0.
double digamma(double x);

// Psi'(x) for x > 0.
double trigamma(double x);

// Unique z > 0 with digamma(z) = t. Monotone bisection bracket + Newton.
double inverse_digamma(double t);

}  // namespace nbfit
