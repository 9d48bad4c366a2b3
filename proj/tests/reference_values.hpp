// Generated by scripts/make_reference_values.py (mpmath, 60-digit
// arithmetic, values frozen to 17 significant digits). Do not edit.
#pragma once

namespace refvals {

struct GammaSample { double x, lgamma, digamma, trigamma; };
inline constexpr GammaSample kGammaTable[] = {
    {1e-06, 13.815509980749432, -1000000.57721402, 1000000000001.6449},
    {1e-05, 11.512919692895826, -100000.57719921568, 10000000001.64491},
    {0.0001, 9.210282658633963, -10000.577051183514, 100000001.64469369},
    {0.001, 6.907178885383853, -1000.5755719318103, 1000001.6425331959},
    {0.01, 4.599479878042022, -100.56088545786868, 10001.621213528313},
    {0.1, 2.252712651734206, -10.423754940411078, 101.43329915079276},
    {0.25, 1.2880225246980774, -4.2274535333762655, 17.19732915450711},
    {0.5, 0.5723649429247001, -1.9635100260214235, 4.934802200544679},
    {0.75, 0.20328095143129538, -1.0858608797864722, 2.5418796476716063},
    {1.0, 0.0, -0.5772156649015329, 1.6449340668482264},
    {1.25, -0.09827183642181316, -0.22745353337626542, 1.1973291545071107},
    {1.5, -0.12078223763524522, 0.03648997397857652, 0.9348022005446793},
    {2.0, 0.0, 0.42278433509846713, 0.6449340668482264},
    {2.5, 0.2846828704729192, 0.7031566406452432, 0.49035775610023485},
    {3.0, 0.6931471805599453, 0.9227843350984671, 0.39493406684822646},
    {5.0, 3.1780538303479458, 1.5061176684318005, 0.22132295573711533},
    {7.5, 7.534364236758733, 1.9467574842460869, 0.1426158966967038},
    {9.99, 12.779315214350193, 2.250700372831201, 0.10527695014824179},
    {10.0, 12.801827480081469, 2.251752589066721, 0.10516633568168575},
    {10.01, 12.824350262448247, 2.2528037003181356, 0.10505595320551508},
    {12.5, 18.734347511936445, 2.4851956512749123, 0.08328522460157838},
    {25.0, 54.78472939811232, 3.198742512851974, 0.04081066325722558},
    {50.0, 144.5657439463449, 3.901989673427892, 0.020201333226697125},
    {100.0, 359.1342053695754, 4.600161852738087, 0.010050166663333571},
    {500.0, 2605.115850361734, 6.213607765088992, 0.0020020013333322665},
    {1000.0, 5905.220423209181, 6.907255195648812, 0.0010005001666666333},
    {12345.678, 103959.91990554606, 9.421020820741761, 8.100328723111207e-05},
    {100000.0, 1051287.7089736569, 11.512920464961896, 1.0000050000166667e-05},
    {1000000.0, 12815504.569147611, 13.815510057964191, 1.0000005000001667e-06},
    {100000000.0, 1742068066.1038346, 18.420680738952367, 1.000000005e-08},
};

// horse-kick fixture: mean 7/10, maximizer of the profile log-likelihood
inline constexpr double kPrussianMean      = 0.7;
inline constexpr double kPrussianVarBiased = 0.76;
inline constexpr double kPrussianVarUnb    = 0.7627240143369176;
inline constexpr double kPrussianMomentInit= 7.812;
inline constexpr double kPrussianNuHat     = 7.607228654352818;
inline constexpr double kPrussianPHat      = 0.9157360379585539;
inline constexpr double kPrussianLoglik    = -313.6507173316904;
inline constexpr double kPrussianLoglikAt76072 = -313.65071733169634;
inline constexpr double kPrussianGAt5      = 0.0004258192262489684;
inline constexpr double kPrussianHAt5      = -313.75695102244003;

// pmf / cdf spot values
inline constexpr double kPoisLogPmf_l2_y2   = -1.3068528194400546;
inline constexpr double kPoisLogPmf_l10_y10 = -2.0785616431350586;
inline constexpr double kPoisCdf_l5_y5      = 0.6159606548330632;
inline constexpr double kPoisCdf_l5_y4      = 0.4404932850652124;
inline constexpr double kNbLogPmf_n10_p09_y3   = -2.5677328892080387;
inline constexpr double kNbLogPmf_n05_p03_y7   = -4.661873076965476;
inline constexpr double kNbCdf_n5_p05_y40      = 0.9999999953325585;
inline constexpr double kNbCdf_n2_p025_y10     = 0.8416182398796082;

// score-function hand samples
inline constexpr double kScoreG_01_nu1   = 0.09453489189183562;
inline constexpr double kScoreH_222_nu1  = -5.728627514653315;
inline constexpr double kScoreGp_01_nu1  = -0.16666666666666666;
inline constexpr double kScoreH_01_nu2   = -1.8088649371309942;

// limiting score function G for Poisson laws
inline constexpr double kG_l5_n100 = 1.1239244256287109e-05;
inline constexpr double kG_l10_n10 = 0.01242404252357344;
inline constexpr double kG_l1_n1000 = 4.985043196319744e-10;
inline constexpr double kG_l3_n0_01 = 90.5820014976807;

// CDF-difference profile, lambda=5 nu=2 (p = 2/7)
inline constexpr int    kDiff_l5_n2_K1    = 2;
inline constexpr int    kDiff_l5_n2_Kstar = 5;
inline constexpr int    kDiff_l5_n2_K2    = 9;
inline constexpr double kDiff_l5_n2_D0    = 0.07489470606213902;
inline constexpr double kDiff_l5_n2_sumD  = 9.161862012236813e-11;

// minimizer of r(x) = ln f_NB(x) - ln f_Pois(x): x* = digamma^{-1}(ln(nu+lambda)) - nu
inline constexpr double kXstar_l5_n2 = 5.494061132565663;

inline constexpr double kEulerGamma = 0.5772156649015329;

}  // namespace refvals
