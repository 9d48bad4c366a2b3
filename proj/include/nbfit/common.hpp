#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace nbfit {

// Bad numeric argument or malformed data (CLI exit code 2).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested tolerance or structural invariant cannot be met (CLI exit code 3).
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Neumaier-compensated accumulator; tracks the low-order bits a plain
// double sum would shed.
class Kahan {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline void require_positive_finite(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(std::string(what) + " must be positive and finite, got " +
                          std::to_string(x));
}

}  // namespace nbfit
