#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace nbfit {

// Which of the four moment regimes a sample falls in: the first three admit
// no interior stationary point of the profile likelihood.
enum class ScoreRootCase {
    AllZero,           // max = 0
    MaxOne,            // max = 1
    Underdispersed,    // max >= 2 and biased variance <= mean
    UniqueInteriorRoot // max >= 2 and biased variance > mean
};

// Immutable sufficient-statistic bundle for a sample of counts.
class CountSample {
  public:
    // Validates and summarizes raw observations.
    static CountSample summarize(const std::vector<long long>& data);
    // Builds directly from a value -> count table (counts >= 1).
    static CountSample from_frequencies(const std::map<long long, long long>& freq);

    long long n() const { return n_; }
    const std::map<long long, long long>& freq() const { return freq_; }
    double mean() const { return mean_; }
    double var_biased() const { return var_biased_; }
    // Undefined for n = 1.
    std::optional<double> var_unbiased() const { return var_unbiased_; }
    long long max() const { return max_; }
    // (# distinct values) / n
    double distinct_ratio() const { return distinct_ratio_; }

  private:
    CountSample() = default;
    void compute_moments();

    long long n_ = 0;
    std::map<long long, long long> freq_;
    double mean_ = 0.0;
    double var_biased_ = 0.0;
    std::optional<double> var_unbiased_;
    long long max_ = 0;
    double distinct_ratio_ = 0.0;
};

ScoreRootCase score_root_case(const CountSample& s);

const char* to_string(ScoreRootCase c);

}  // namespace nbfit
