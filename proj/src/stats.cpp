#include "nbfit/stats.hpp"

#include <cmath>
#include <string>

#include "nbfit/common.hpp"

namespace nbfit {

namespace {
// Counts above 2^53 would silently lose integer precision in double arithmetic.
constexpr long long kMaxRepresentable = 9007199254740992LL;  // 2^53
}  // namespace

CountSample CountSample::summarize(const std::vector<long long>& data) {
    if (data.empty()) throw DataError("summarize: empty sample");
    CountSample s;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const long long y = data[i];
        if (y < 0)
            throw DomainError("summarize: negative count at index " + std::to_string(i));
        if (y > kMaxRepresentable)
            throw DomainError("summarize: count exceeds 2^53 at index " + std::to_string(i));
        ++s.freq_[y];
    }
    s.n_ = static_cast<long long>(data.size());
    s.compute_moments();
    return s;
}

CountSample CountSample::from_frequencies(const std::map<long long, long long>& freq) {
    if (freq.empty()) throw DataError("from_frequencies: empty table");
    CountSample s;
    long long n = 0;
    for (const auto& [y, f] : freq) {
        if (y < 0) throw DomainError("from_frequencies: negative value " + std::to_string(y));
        if (y > kMaxRepresentable)
            throw DomainError("from_frequencies: value exceeds 2^53: " + std::to_string(y));
        if (f < 1)
            throw DomainError("from_frequencies: count for value " + std::to_string(y) +
                              " must be >= 1, got " + std::to_string(f));
        n += f;
    }
    s.freq_ = freq;
    s.n_ = n;
    s.compute_moments();
    return s;
}

void CountSample::compute_moments() {
    max_ = freq_.rbegin()->first;
    distinct_ratio_ = static_cast<double>(freq_.size()) / static_cast<double>(n_);

    Kahan total;
    for (const auto& [y, f] : freq_)
        total.add(static_cast<double>(y) * static_cast<double>(f));
    mean_ = total.value() / static_cast<double>(n_);

    Kahan ss;  // sum of f * (y - mean)^2
    for (const auto& [y, f] : freq_) {
        const double d = static_cast<double>(y) - mean_;
        ss.add(static_cast<double>(f) * d * d);
    }
    var_biased_ = ss.value() / static_cast<double>(n_);
    if (n_ > 1)
        var_unbiased_ = ss.value() / static_cast<double>(n_ - 1);
    else
        var_unbiased_ = std::nullopt;
}

ScoreRootCase score_root_case(const CountSample& s) {
    if (s.max() == 0) return ScoreRootCase::AllZero;
    if (s.max() == 1) return ScoreRootCase::MaxOne;
    if (s.var_biased() <= s.mean()) return ScoreRootCase::Underdispersed;
    return ScoreRootCase::UniqueInteriorRoot;
}

const char* to_string(ScoreRootCase c) {
    switch (c) {
        case ScoreRootCase::AllZero: return "all-zero";
        case ScoreRootCase::MaxOne: return "max-one";
        case ScoreRootCase::Underdispersed: return "underdispersed";
        case ScoreRootCase::UniqueInteriorRoot: return "unique-interior-root";
    }
    return "?";
}

}  // namespace nbfit
