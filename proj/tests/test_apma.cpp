#include <doctest.h>

#include <cmath>
#include <vector>

#include "approx.hpp"
#include "nbfit/apma.hpp"
#include "nbfit/common.hpp"
#include "nbfit/dist.hpp"
#include "nbfit/rng.hpp"
#include "nbfit/score.hpp"
#include "reference_values.hpp"

using namespace nbfit;
using testutil::mixed_err;
using testutil::rel_err;

namespace {

CountSample prussian() {
    return CountSample::from_frequencies(
        {{0, 144}, {1, 91}, {2, 32}, {3, 11}, {4, 2}});
}

}  // namespace

TEST_SUITE("apma") {

TEST_CASE("horse-kick fit lands on the frozen optimum") {
    const CountSample s = prussian();
    const FitResult r = fit_nb(s);
    REQUIRE(r.branch == FitBranch::Optimized);
    const NBParams& d = nb_params(r);
    // The ascent stops on the scaled-gradient test, so nu carries a few
    // gradient-tolerance widths; the likelihood itself is quadratic there.
    CHECK(rel_err(d.nu, refvals::kPrussianNuHat) <= 5e-5);
    CHECK(rel_err(d.p, refvals::kPrussianPHat) <= 1e-6);
    CHECK(mixed_err(r.loglik, refvals::kPrussianLoglik) <= 1e-12);
    CHECK(rel_err(nb_mean(d), refvals::kPrussianMean) <= 1e-9);
    CHECK(mixed_err(r.init_nu, refvals::kPrussianMomentInit) <= 1e-9);
    CHECK_FALSE(r.at_boundary);
    CHECK(r.converged);
    CHECK(r.iterations >= 1);
    CHECK(r.iterations <= 25);
    // p_hat identity and the stationarity test the optimizer claims.
    CHECK(rel_err(d.p, d.nu / (d.nu + s.mean())) <= 1e-12);
    const ScoreContext ctx = make_score_context(s);
    const double d1 = static_cast<double>(s.n()) * score_g(ctx, d.nu) * d.nu;
    CHECK(std::abs(d1) <= 1e-8 * (1.0 + std::abs(r.loglik)));
}

TEST_CASE("moment initialization") {
    const FitConfig cfg;
    CHECK(mixed_err(moment_init(prussian(), cfg), 7.812) <= 1e-9);
    // Underdispersed: the excess floors at epsilon, so init = mean^2/epsilon.
    const CountSample u = CountSample::summarize({2, 2, 2});
    CHECK(mixed_err(moment_init(u, cfg), 4.0 / cfg.epsilon) <= 1e-12);
    // n = 1: no unbiased variance; same epsilon fallback, capped by nu_max.
    const CountSample single = CountSample::summarize({5});
    CHECK(moment_init(single, cfg) == cfg.nu_max);
}

TEST_CASE("all-zero samples take the degenerate branch") {
    const FitResult r = fit_nb(CountSample::summarize({0, 0, 0, 0}));
    CHECK(r.branch == FitBranch::AllZero);
    const NBParams& d = nb_params(r);
    CHECK(d.nu == 1.0);
    CHECK(d.p == 1.0);
    CHECK(r.loglik == 0.0);
    CHECK_FALSE(r.at_boundary);
    CHECK(r.iterations == 0);

    const FitResult e = fit_ext_nb(CountSample::summarize({0, 0}));
    CHECK(e.branch == FitBranch::AllZero);
    const ExtNBParams& x = ext_params(e);
    CHECK(x.mu == 0.0);
    CHECK(x.p == 1.0);
    CHECK(e.loglik == 0.0);
}

TEST_CASE("underdispersed samples pin the box edge") {
    const CountSample s = CountSample::summarize({2, 2, 2});
    const FitResult r = fit_nb(s);
    CHECK(r.branch == FitBranch::Optimized);
    CHECK(r.at_boundary);
    const NBParams& d = nb_params(r);
    CHECK(d.nu == FitConfig{}.nu_max);  // exact assignment, not within-epsilon
    const ScoreContext ctx = make_score_context(s);
    CHECK(mixed_err(r.loglik, profile_loglik(ctx, d.nu)) <= 1e-13);
    // h is increasing toward the edge for equidispersed-or-tighter data.
    CHECK(r.loglik > profile_loglik(ctx, d.nu / 2.0));
}

TEST_CASE("a tighter box moves the boundary") {
    FitConfig cfg;
    cfg.nu_max = 5.0;  // below the horse-kick root at 7.607
    const CountSample s = prussian();
    const FitResult r = fit_nb(s, cfg);
    CHECK(r.at_boundary);
    CHECK(nb_params(r).nu == 5.0);
    // Box max must beat every interior profile value the optimizer saw.
    const ScoreContext ctx = make_score_context(s);
    CHECK(r.loglik == doctest::Approx(profile_loglik(ctx, 5.0)).epsilon(1e-13));
}

TEST_CASE("grid oracle never beats the ascent") {
    const FitConfig cfg;
    std::vector<CountSample> bank;
    bank.push_back(prussian());
    RngStream rng(0x0A11ULL);
    for (int i = 0; i < 6; ++i) {
        RngStream sub = rng.spawn(static_cast<std::uint64_t>(i));
        const double nu = std::exp(sub.uniform() * std::log(50.0) - std::log(5.0));
        const double p = 0.1 + 0.8 * sub.uniform();
        bank.push_back(CountSample::summarize(sample_nb(NBParams(nu, p), 400, sub)));
    }
    for (const CountSample& s : bank) {
        const FitResult fit = fit_nb(s, cfg);
        const auto [nu_oracle, h_oracle] = grid_oracle(s, cfg, 1000);
        CAPTURE(nu_oracle);
        CHECK(std::exp(h_oracle - fit.loglik) <= 1.0 + 1e-6);
        if (fit.branch == FitBranch::Optimized && !fit.at_boundary)
            CHECK(rel_err(nu_oracle, nb_params(fit).nu) <= 1e-2);
    }
    CHECK_THROWS_AS(grid_oracle(prussian(), cfg, 999), DomainError);
}

TEST_CASE("extended family: equidispersed data goes Poisson") {
    const CountSample s = CountSample::summarize({2, 2, 2});
    const FitResult r = fit_ext_nb(s);
    CHECK(r.branch == FitBranch::PoissonBranch);
    const ExtNBParams& d = ext_params(r);
    CHECK(d.mu == 2.0);
    CHECK(d.p == 1.0);
    const auto [lambda_hat, pois_lik] = fit_poisson(s);
    CHECK(lambda_hat == 2.0);
    CHECK(r.loglik == pois_lik);
    // 3 * ln Pois(2; 2) = 3 (2 ln 2 - 2 - ln 2).
    CHECK(mixed_err(r.loglik, 3.0 * (std::log(2.0) - 2.0)) <= 1e-13);
}

TEST_CASE("extended family: overdispersed data matches the NB fit") {
    const CountSample s = prussian();
    const FitResult nb = fit_nb(s);
    const FitResult ext = fit_ext_nb(s);
    CHECK(ext.branch == FitBranch::Optimized);
    const ExtNBParams& d = ext_params(ext);
    CHECK(d.mu == s.mean());  // exact, not approximate
    CHECK(d.p == nb_params(nb).p);
    CHECK(ext.loglik == nb.loglik);
}

TEST_CASE("poisson fit with the 0 ln 0 convention") {
    const CountSample s = prussian();
    const auto [lambda_hat, lik] = fit_poisson(s);
    CHECK(lambda_hat == s.mean());
    double direct = 0.0;
    for (const auto& [y, f] : s.freq())
        direct += static_cast<double>(f) * pois_log_pmf(PoissonParams(lambda_hat), y);
    CHECK(mixed_err(lik, direct) <= 1e-13);
    const auto [l0, lik0] = fit_poisson(CountSample::summarize({0, 0, 0}));
    CHECK(l0 == 0.0);
    CHECK(lik0 == 0.0);
}

TEST_CASE("accessors reject the wrong alternative") {
    const FitResult nb = fit_nb(prussian());
    CHECK_THROWS_AS(ext_params(nb), DomainError);
    const FitResult ext = fit_ext_nb(prussian());
    CHECK_THROWS_AS(nb_params(ext), DomainError);
}

TEST_CASE("config validation") {
    FitConfig bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(fit_nb(prussian(), bad), DomainError);
    bad = FitConfig{};
    bad.nu_max = bad.epsilon;  // box must be nonempty
    CHECK_THROWS_AS(fit_nb(prussian(), bad), DomainError);
    bad = FitConfig{};
    bad.delta = 1.0;
    CHECK_THROWS_AS(fit_nb(prussian(), bad), DomainError);
    bad = FitConfig{};
    bad.max_iter = 0;
    CHECK_THROWS_AS(fit_nb(prussian(), bad), DomainError);
}

TEST_CASE("two hundred regime-spanning fits never throw") {
    RngStream rng(0x600DULL);
    int boundary = 0, interior = 0, poisson_branch = 0;
    for (int i = 0; i < 200; ++i) {
        RngStream sub = rng.spawn(static_cast<std::uint64_t>(i));
        const long long n = 2 + static_cast<long long>(sub.uniform() * 398.0);
        std::vector<long long> data;
        switch (i % 4) {
            case 0:
                data = sample_pois(PoissonParams(0.2 + 20.0 * sub.uniform()), n, sub);
                break;
            case 1: {
                const double nu = std::exp(sub.uniform() * std::log(1e4) - std::log(1e2));
                data = sample_nb(NBParams(nu, 0.02 + 0.96 * sub.uniform()), n, sub);
                break;
            }
            case 2:
                data.assign(static_cast<std::size_t>(n),
                            static_cast<long long>(sub.uniform() * 3.0));
                break;
            default:
                data = sample_nb(NBParams(0.05, 0.5), n, sub);
                break;
        }
        const CountSample s = CountSample::summarize(data);
        const FitResult r = fit_nb(s);        // must not throw
        const FitResult e = fit_ext_nb(s);    // must not throw
        if (r.at_boundary) ++boundary;
        if (r.branch == FitBranch::Optimized && !r.at_boundary) ++interior;
        if (e.branch == FitBranch::PoissonBranch) ++poisson_branch;
        if (e.branch == FitBranch::Optimized || e.branch == FitBranch::AllZero)
            CHECK(ext_params(e).mu == s.mean());
        // The reported loglik is reproducible from the parameters.
        if (r.branch == FitBranch::Optimized) {
            const ScoreContext ctx = make_score_context(s);
            CHECK(mixed_err(r.loglik, profile_loglik(ctx, nb_params(r).nu)) <= 1e-12);
        }
    }
    // The bank genuinely spans the regimes.
    CHECK(boundary > 10);
    CHECK(interior > 40);
    CHECK(poisson_branch > 10);
}

TEST_CASE("branch labels") {
    CHECK(std::string(to_string(FitBranch::AllZero)) == "all-zero");
    CHECK(std::string(to_string(FitBranch::PoissonBranch)) == "poisson");
    CHECK(std::string(to_string(FitBranch::Optimized)) == "optimized");
}

}  // TEST_SUITE
