#include <doctest.h>

#include <map>
#include <vector>

#include "approx.hpp"
#include "nbfit/common.hpp"
#include "nbfit/stats.hpp"
#include "reference_values.hpp"

using namespace nbfit;

namespace {

CountSample prussian() {
    return CountSample::from_frequencies(
        {{0, 144}, {1, 91}, {2, 32}, {3, 11}, {4, 2}});
}

}  // namespace

TEST_SUITE("sufficientstats") {

TEST_CASE("horse-kick fixture moments") {
    const CountSample s = prussian();
    CHECK(s.n() == 280);
    CHECK(s.max() == 4);
    // 196/280 = 0.7 exactly in binary-rational arithmetic terms; the two-pass
    // compensated sums land on the correctly rounded double.
    CHECK(s.mean() == doctest::Approx(refvals::kPrussianMean).epsilon(1e-15));
    CHECK(s.var_biased() == doctest::Approx(refvals::kPrussianVarBiased).epsilon(1e-14));
    REQUIRE(s.var_unbiased().has_value());
    CHECK(*s.var_unbiased() == doctest::Approx(refvals::kPrussianVarUnb).epsilon(1e-14));
    CHECK(s.distinct_ratio() == doctest::Approx(5.0 / 280.0).epsilon(1e-15));
    CHECK(score_root_case(s) == ScoreRootCase::UniqueInteriorRoot);
}

TEST_CASE("summarize equals from_frequencies on the expanded sample") {
    const CountSample a = prussian();
    std::vector<long long> raw;
    for (const auto& [y, c] : a.freq())
        for (long long i = 0; i < c; ++i) raw.push_back(y);
    const CountSample b = CountSample::summarize(raw);
    CHECK(a.n() == b.n());
    CHECK(a.mean() == b.mean());
    CHECK(a.var_biased() == b.var_biased());
    CHECK(*a.var_unbiased() == *b.var_unbiased());
    CHECK(a.freq() == b.freq());
}

TEST_CASE("moment-regime classification") {
    CHECK(score_root_case(CountSample::summarize({0, 0, 0})) == ScoreRootCase::AllZero);
    CHECK(score_root_case(CountSample::summarize({0, 1, 1, 0})) == ScoreRootCase::MaxOne);
    // Constant sample: variance 0 <= mean.
    CHECK(score_root_case(CountSample::summarize({2, 2, 2})) == ScoreRootCase::Underdispersed);
    // {0,5}: biased variance 6.25 > mean 2.5.
    CHECK(score_root_case(CountSample::summarize({0, 5})) == ScoreRootCase::UniqueInteriorRoot);
    // Equidispersed boundary counts as the no-interior-root regime.
    // {0,2,1,1}: mean 1, biased variance 0.5 <= 1.
    CHECK(score_root_case(CountSample::summarize({0, 2, 1, 1})) == ScoreRootCase::Underdispersed);
}

TEST_CASE("single observation has no unbiased variance") {
    const CountSample s = CountSample::summarize({7});
    CHECK(s.n() == 1);
    CHECK(s.mean() == 7.0);
    CHECK(s.var_biased() == 0.0);
    CHECK_FALSE(s.var_unbiased().has_value());
}

TEST_CASE("validation rejects bad inputs") {
    CHECK_THROWS_AS(CountSample::summarize({}), DataError);
    CHECK_THROWS_AS(CountSample::summarize({1, -2, 3}), DomainError);
    CHECK_THROWS_AS(CountSample::summarize({9007199254740993LL}), DomainError);
    // 2^53 itself is still exactly representable and allowed.
    CHECK_NOTHROW(CountSample::summarize({9007199254740992LL}));
    CHECK_THROWS_AS(CountSample::from_frequencies({}), DataError);
    CHECK_THROWS_AS(CountSample::from_frequencies({{3, 0}}), DomainError);
    CHECK_THROWS_AS(CountSample::from_frequencies({{-1, 4}}), DomainError);
}

TEST_CASE("regime labels are distinct") {
    CHECK(std::string(to_string(ScoreRootCase::AllZero)) != to_string(ScoreRootCase::MaxOne));
    CHECK(std::string(to_string(ScoreRootCase::Underdispersed)) !=
          to_string(ScoreRootCase::UniqueInteriorRoot));
}

}  // TEST_SUITE
