#!/usr/bin/env python3
"""Regenerate tests/reference_values.hpp.

High-precision reference values for the C++ test suite, computed with mpmath
at 60 significant digits and frozen to 17 digits (exact double round-trip).
Requires: mpmath.  Usage:  python3 scripts/make_reference_values.py
"""

import os
from mpmath import mp, mpf, log, log1p, exp, loggamma, digamma, polygamma, findroot, e, pi

mp.dps = 60

OUT = os.path.join(os.path.dirname(__file__), "..", "tests", "reference_values.hpp")

def d17(x):
    """Format an mpf as the closest double, 17 significant digits."""
    return repr(float(x))


# --- gamma-family samples -------------------------------------------------
GAMMA_XS = [
    1e-6, 1e-5, 1e-4, 1e-3, 0.01, 0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5,
    2.0, 2.5, 3.0, 5.0, 7.5, 9.99, 10.0, 10.01, 12.5, 25.0, 50.0, 100.0,
    500.0, 1000.0, 12345.678, 1e5, 1e6, 1e8,
]

def gamma_rows():
    rows = []
    for x in GAMMA_XS:
        xm = mpf(repr(x))  # the exact double
        rows.append((x, loggamma(xm), digamma(xm), polygamma(1, xm)))
    return rows


# --- horse-kick frequency fixture ----------------------------------------
PRUSSIAN = {0: 144, 1: 91, 2: 32, 3: 11, 4: 2}

def prussian_stats():
    n = sum(PRUSSIAN.values())
    mean = mpf(sum(y * f for y, f in PRUSSIAN.items())) / n
    ss = sum(f * (mpf(y) - mean) ** 2 for y, f in PRUSSIAN.items())
    return n, mean, ss / n, ss / (n - 1)

def g_freq(nu, freq, n, mean):
    acc = mpf(0)
    for y, f in freq.items():
        if y > 0:
            acc += f * (digamma(nu + y) - digamma(nu))
    return acc / n - log1p(mean / nu)

def h_freq(nu, freq, n, mean):
    acc = mpf(0)
    for y, f in freq.items():
        acc += f * (loggamma(nu + y) - loggamma(mpf(y) + 1))
    return (acc - n * loggamma(nu) - n * (nu + mean) * log(nu + mean)
            + n * nu * log(nu) + n * mean * log(mean))


# --- Poisson / NB pmf & cdf helpers ---------------------------------------
def pois_log_pmf(lam, y):
    return y * log(lam) - lam - loggamma(mpf(y) + 1)

def nb_log_pmf(nu, p, y):
    return (loggamma(nu + y) - loggamma(nu) - loggamma(mpf(y) + 1)
            + nu * log(p) + y * log(1 - p))

def pois_cdf(lam, y):
    return sum(exp(pois_log_pmf(lam, k)) for k in range(y + 1))

def nb_cdf(nu, p, y):
    return sum(exp(nb_log_pmf(nu, p, k)) for k in range(y + 1))


# --- limiting score function G and the CDF-difference profile -------------
def G_poisson(lam, nu, terms=400):
    rem = mpf(1)
    acc = mpf(0)
    for y in range(terms):
        rem -= exp(pois_log_pmf(lam, y))
        acc += rem / (nu + y)   # rem = 1 - F(y)
        if rem < mpf("1e-45"):
            break
    return acc - log1p(lam / nu)

def diff_profile(lam, nu, ycut):
    p = nu / (nu + lam)
    d = [exp(nb_log_pmf(nu, p, y)) - exp(pois_log_pmf(lam, y)) for y in range(ycut + 1)]
    D, acc = [], mpf(0)
    for v in d:
        acc += v
        D.append(acc)
    k1 = 0
    while k1 + 1 <= ycut and d[k1 + 1] >= 0:
        k1 += 1
    k2 = ycut
    while k2 - 1 >= 0 and d[k2 - 1] >= 0:
        k2 -= 1
    kstar = max(y for y in range(ycut + 1) if D[y] >= 0)
    return d, D, k1, kstar, k2


def main():
    lines = []
    w = lines.append
    w("// Generated by scripts/make_reference_values.py (mpmath, 60-digit")
    w("// arithmetic, values frozen to 17 significant digits). Do not edit.")
    w("#pragma once")
    w("")
    w("namespace refvals {")
    w("")
    w("struct GammaSample { double x, lgamma, digamma, trigamma; };")
    w("inline constexpr GammaSample kGammaTable[] = {")
    for x, lg, dg, tg in gamma_rows():
        w(f"    {{{d17(x)}, {d17(lg)}, {d17(dg)}, {d17(tg)}}},")
    w("};")
    w("")

    n, mean, var_b, var_u = prussian_stats()
    nu_hat = findroot(lambda v: g_freq(v, PRUSSIAN, n, mean), mpf("7.6"))
    p_hat = nu_hat / (nu_hat + mean)
    w("// horse-kick fixture: mean 7/10, maximizer of the profile log-likelihood")
    w(f"inline constexpr double kPrussianMean      = {d17(mean)};")
    w(f"inline constexpr double kPrussianVarBiased = {d17(var_b)};")
    w(f"inline constexpr double kPrussianVarUnb    = {d17(var_u)};")
    w(f"inline constexpr double kPrussianMomentInit= {d17(mean**2 / (var_u - mean))};")
    w(f"inline constexpr double kPrussianNuHat     = {d17(nu_hat)};")
    w(f"inline constexpr double kPrussianPHat      = {d17(p_hat)};")
    w(f"inline constexpr double kPrussianLoglik    = {d17(h_freq(nu_hat, PRUSSIAN, n, mean))};")
    w(f"inline constexpr double kPrussianLoglikAt76072 = {d17(h_freq(mpf('7.6072'), PRUSSIAN, n, mean))};")
    w(f"inline constexpr double kPrussianGAt5      = {d17(g_freq(mpf(5), PRUSSIAN, n, mean))};")
    w(f"inline constexpr double kPrussianHAt5      = {d17(h_freq(mpf(5), PRUSSIAN, n, mean))};")
    w("")

    w("// pmf / cdf spot values")
    w(f"inline constexpr double kPoisLogPmf_l2_y2   = {d17(pois_log_pmf(mpf(2), 2))};")
    w(f"inline constexpr double kPoisLogPmf_l10_y10 = {d17(pois_log_pmf(mpf(10), 10))};")
    w(f"inline constexpr double kPoisCdf_l5_y5      = {d17(pois_cdf(mpf(5), 5))};")
    w(f"inline constexpr double kPoisCdf_l5_y4      = {d17(pois_cdf(mpf(5), 4))};")
    w(f"inline constexpr double kNbLogPmf_n10_p09_y3   = {d17(nb_log_pmf(mpf(10), mpf('0.9'), 3))};")
    w(f"inline constexpr double kNbLogPmf_n05_p03_y7   = {d17(nb_log_pmf(mpf('0.5'), mpf('0.3'), 7))};")
    w(f"inline constexpr double kNbCdf_n5_p05_y40      = {d17(nb_cdf(mpf(5), mpf('0.5'), 40))};")
    w(f"inline constexpr double kNbCdf_n2_p025_y10     = {d17(nb_cdf(mpf(2), mpf('0.25'), 10))};")
    w("")

    w("// score-function hand samples")
    g01 = mpf("0.5") - log(mpf("1.5"))          # sample {0,1} at nu=1
    w(f"inline constexpr double kScoreG_01_nu1   = {d17(g01)};")
    w(f"inline constexpr double kScoreH_222_nu1  = {d17(3 * log(mpf(4) / 27))};")
    freq01 = {0: 1, 1: 1}
    w(f"inline constexpr double kScoreGp_01_nu1  = {d17(mpf(-1) / 6)};")
    w(f"inline constexpr double kScoreH_01_nu2   = {d17(h_freq(mpf(2), freq01, 2, mpf('0.5')))};")
    w("")

    w("// limiting score function G for Poisson laws")
    for lam, nu in [(5, 100), (10, 10), (1, 1000), (3, mpf("0.01"))]:
        tag = f"kG_l{lam}_n{str(nu).replace('.', '_')}"
        w(f"inline constexpr double {tag} = {d17(G_poisson(mpf(lam), mpf(nu)))};")
    w("")

    w("// CDF-difference profile, lambda=5 nu=2 (p = 2/7)")
    d, D, k1, kstar, k2 = diff_profile(mpf(5), mpf(2), 80)
    w(f"inline constexpr int    kDiff_l5_n2_K1    = {k1};")
    w(f"inline constexpr int    kDiff_l5_n2_Kstar = {kstar};")
    w(f"inline constexpr int    kDiff_l5_n2_K2    = {k2};")
    w(f"inline constexpr double kDiff_l5_n2_D0    = {d17(D[0])};")
    w(f"inline constexpr double kDiff_l5_n2_sumD  = {d17(sum(D))};")
    w("")

    w("// minimizer of r(x) = ln f_NB(x) - ln f_Pois(x): x* = digamma^{-1}(ln(nu+lambda)) - nu")
    xstar = findroot(lambda z: digamma(z) - log(mpf(7)), mpf(7)) - 2
    w(f"inline constexpr double kXstar_l5_n2 = {d17(xstar)};")
    w("")
    w(f"inline constexpr double kEulerGamma = {d17(-digamma(mpf(1)))};")
    w("")
    w("}  // namespace refvals")
    w("")

    with open(OUT, "w") as f:
        f.write("\n".join(lines))
    print(f"wrote {os.path.normpath(OUT)}")


if __name__ == "__main__":
    main()
