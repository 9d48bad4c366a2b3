#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "nbfit/apma.hpp"
#include "nbfit/common.hpp"
#include "nbfit/io.hpp"
#include "nbfit/stats.hpp"
#include "reference_values.hpp"

using namespace nbfit;

namespace {

CountSample parse_raw(const std::string& text) {
    std::istringstream in(text);
    return read_dataset(in, DatasetFormat::RawCounts);
}

CountSample parse_freq(const std::string& text) {
    std::istringstream in(text);
    return read_dataset(in, DatasetFormat::FrequencyCSV);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("horse-kick table loads from disk") {
    const CountSample s =
        read_dataset_file(std::string(NBFIT_DATA_DIR) + "/prussian.csv", DatasetFormat::FrequencyCSV);
    CHECK(s.n() == 280);
    CHECK(s.mean() == refvals::kPrussianMean);
    CHECK(s.max() == 4);
    CHECK(s.freq().at(0) == 144);
    CHECK(s.freq().at(4) == 2);
    CHECK_THROWS_AS(read_dataset_file("/nonexistent/no.csv", DatasetFormat::RawCounts), DataError);
}

TEST_CASE("raw counts accept arbitrary whitespace layouts") {
    const CountSample s = parse_raw("3 1 4\n1 5\n\n  9\n");
    CHECK(s.n() == 6);
    CHECK(s.mean() == doctest::Approx(23.0 / 6.0).epsilon(1e-15));
    CHECK(s.max() == 9);
    // Windows line endings are tolerated.
    const CountSample crlf = parse_raw("1 2\r\n3\r\n");
    CHECK(crlf.n() == 3);
    CHECK(crlf.max() == 3);
}

TEST_CASE("raw counts reject malformed tokens with line numbers") {
    CHECK_THROWS_WITH_AS(parse_raw("1 x 3\n"), doctest::Contains("line 1"), DataError);
    CHECK_THROWS_WITH_AS(parse_raw("1 2\n-4\n"), doctest::Contains("line 2"), DataError);
    CHECK_THROWS_AS(parse_raw("1.5\n"), DataError);
    CHECK_THROWS_AS(parse_raw("99999999999999999999\n"), DataError);
    CHECK_THROWS_AS(parse_raw(""), DataError);
    CHECK_THROWS_AS(parse_raw("  \n \n"), DataError);
    // Parses as an integer but breaks the exact-double representability cap.
    CHECK_THROWS_AS(parse_raw("9007199254740993\n"), DomainError);
}

TEST_CASE("frequency CSV parsing and its guards") {
    const CountSample s = parse_freq("value,count\n0,2\n\n3,1\n7,4\n");
    CHECK(s.n() == 7);
    CHECK(s.freq().at(7) == 4);

    CHECK_THROWS_WITH_AS(parse_freq("count,value\n0,2\n"), doctest::Contains("line 1"), DataError);
    CHECK_THROWS_WITH_AS(parse_freq("value,count\n0,2\n0,3\n"),
                         doctest::Contains("strictly increasing"), DataError);
    CHECK_THROWS_WITH_AS(parse_freq("value,count\n2,1\n1,1\n"),
                         doctest::Contains("line 3"), DataError);
    CHECK_THROWS_WITH_AS(parse_freq("value,count\n0,0\n"), doctest::Contains("count"), DataError);
    CHECK_THROWS_AS(parse_freq("value,count\n0;2\n"), DataError);
    CHECK_THROWS_AS(parse_freq("value,count\n0,two\n"), DataError);
    CHECK_THROWS_AS(parse_freq("value,count\n"), DataError);
    CHECK_THROWS_AS(parse_freq(""), DataError);
}

TEST_CASE("frequency CSV round trip") {
    const CountSample s = CountSample::summarize({5, 0, 0, 2, 5, 5});
    const std::string csv = write_frequency_csv(s);
    CHECK(csv == "value,count\n0,2\n2,1\n5,3\n");
    const CountSample back = parse_freq(csv);
    CHECK(back.n() == s.n());
    CHECK(back.mean() == s.mean());
    CHECK(back.freq() == s.freq());
}

TEST_CASE("result documents capture the fit and replay configuration") {
    const CountSample s =
        read_dataset_file(std::string(NBFIT_DATA_DIR) + "/prussian.csv", DatasetFormat::FrequencyCSV);
    const FitConfig cfg;
    const FitResult fit = fit_nb(s, cfg);
    const ResultDocument doc = make_result_document(s, "nb", fit, cfg);
    CHECK(doc.schema_version == "1");
    CHECK(doc.n == 280);
    CHECK(doc.mean == s.mean());
    CHECK(doc.model == "nb");
    CHECK(doc.nu.has_value());
    CHECK(doc.p.has_value());
    CHECK(!doc.mu.has_value());
    CHECK(!doc.lambda.has_value());
    CHECK(doc.branch == "optimized");
    CHECK(doc.config == cfg);
    CHECK(!doc.gof.has_value());

    // Extended-family results publish mu instead of nu.
    const FitResult ext = fit_ext_nb(s, cfg);
    const ResultDocument edoc = make_result_document(s, "enb", ext, cfg);
    CHECK(edoc.mu.has_value());
    CHECK(*edoc.mu == s.mean());
    CHECK(!edoc.nu.has_value());
}

TEST_CASE("canonical JSON round trips exactly") {
    const CountSample s = CountSample::summarize({0, 1, 1, 2, 4, 7, 0, 3});
    const FitConfig cfg;
    const FitResult fit = fit_nb(s, cfg);
    ResultDocument doc = make_result_document(s, "nb", fit, cfg);
    doc.gof = GofBlock{0.0625, 0.11, 0.42, false, 300, 0.05, 99};

    const std::string json = write_result(doc);
    const ResultDocument back = parse_result(json);
    CHECK(back == doc);

    // Fixed key order: each anchor appears after the previous one.
    std::size_t pos = 0;
    for (const char* key : {"\"schema_version\"", "\"input\"", "\"mean\"", "\"model\"",
                            "\"estimates\"", "\"loglik\"", "\"at_boundary\"", "\"branch\"",
                            "\"diagnostics\"", "\"config\"", "\"gof\""}) {
        const std::size_t at = json.find(key, pos);
        CAPTURE(key);
        REQUIRE(at != std::string::npos);
        pos = at;
    }
    // Serializing twice is byte-stable.
    CHECK(write_result(doc) == json);
}

TEST_CASE("degenerate log-likelihood uses the -inf sentinel") {
    const CountSample s = CountSample::summarize({0, 0, 1});
    const FitConfig cfg;
    ResultDocument doc = make_result_document(s, "nb", fit_nb(s, cfg), cfg);
    doc.loglik = -std::numeric_limits<double>::infinity();
    const std::string json = write_result(doc);
    CHECK(json.find("\"loglik\": \"-inf\"") != std::string::npos);
    const ResultDocument back = parse_result(json);
    CHECK(std::isinf(back.loglik));
    CHECK(back.loglik < 0.0);
    CHECK(back == doc);
}

TEST_CASE("non-finite values outside loglik are refused") {
    const CountSample s = CountSample::summarize({0, 1, 2});
    const FitConfig cfg;
    ResultDocument doc = make_result_document(s, "nb", fit_nb(s, cfg), cfg);
    doc.mean = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(write_result(doc), DataError);
    doc.mean = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(write_result(doc), DataError);
    doc = make_result_document(s, "nb", fit_nb(s, cfg), cfg);
    doc.loglik = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(write_result(doc), DataError);
}

TEST_CASE("parser rejects malformed documents") {
    CHECK_THROWS_AS(parse_result("{"), DataError);
    CHECK_THROWS_AS(parse_result("{}"), DataError);
    CHECK_THROWS_AS(parse_result("[1,2]"), DataError);
    // A structurally fine document with an unknown loglik sentinel.
    const CountSample s = CountSample::summarize({0, 1, 2});
    const FitConfig cfg;
    const ResultDocument doc = make_result_document(s, "nb", fit_nb(s, cfg), cfg);
    std::string json = write_result(doc);
    const std::string needle = "\"loglik\": ";
    const std::size_t at = json.find(needle);
    REQUIRE(at != std::string::npos);
    const std::size_t end = json.find(",\n", at);
    json.replace(at + needle.size(), end - at - needle.size(), "\"+inf\"");
    CHECK_THROWS_AS(parse_result(json), DataError);
}

}  // TEST_SUITE
