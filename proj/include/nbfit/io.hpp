#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "nbfit/apma.hpp"
#include "nbfit/stats.hpp"

namespace nbfit {

enum class DatasetFormat {
    RawCounts,     // whitespace-separated nonnegative integers
    FrequencyCSV,  // header "value,count", strictly increasing values
};

CountSample read_dataset(std::istream& in, DatasetFormat format);
CountSample read_dataset_file(const std::string& path, DatasetFormat format);

// The sample back in FrequencyCSV form (round-trip partner of read_dataset).
std::string write_frequency_csv(const CountSample& s);

struct GofBlock {
    double D_n = 0.0;
    double d_n = 0.0;
    double p_value = 1.0;
    bool reject = false;
    int boot_reps = 0;
    double level = 0.05;
    std::uint64_t seed = 0;

    bool operator==(const GofBlock&) const = default;
};

// Everything a fit invocation needs to be replayed and audited.
struct ResultDocument {
    std::string schema_version = "1";
    long long n = 0;
    double mean = 0.0;
    double var_biased = 0.0;
    std::optional<double> var_unbiased;
    long long max = 0;
    std::string model;  // "nb" | "enb" | "poisson"
    // Estimates; populated per model.
    std::optional<double> nu;
    std::optional<double> mu;
    std::optional<double> lambda;
    std::optional<double> p;
    double loglik = 0.0;  // may be -inf
    bool at_boundary = false;
    std::string branch;
    int iterations = 0;
    double init_nu = 0.0;
    bool converged = true;
    FitConfig config{};
    std::optional<GofBlock> gof;

    bool operator==(const ResultDocument&) const = default;
};

ResultDocument make_result_document(const CountSample& s, const std::string& model,
                                    const FitResult& fit, const FitConfig& cfg);

// Canonical JSON: fixed key order, 17 significant digits, "-inf" sentinel for
// a degenerate log-likelihood, never NaN.
std::string write_result(const ResultDocument& doc);

ResultDocument parse_result(const std::string& json_text);

}  // namespace nbfit
