#ifndef RWRE_LOGSUM_HPP
#define RWRE_LOGSUM_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace rwre {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b), stable for any magnitudes; tolerates -inf.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// log(1 + e^x) = log-sum-exp of {0, x}.
inline double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Streaming log-sum-exp with running-max rescaling.
class LogSumAccumulator {
 public:
  void add(double x) {
    ++count_;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
      return;
    }
    // New maximum: rescale the partial sum. When max_ is -inf the
    // product is 0 and the term contributes exactly 1.
    sum_ = (max_ == kNegInf) ? 1.0 : sum_ * std::exp(max_ - x) + 1.0;
    max_ = x;
  }

  double value() const {
    if (count_ == 0) return kNegInf;
    return max_ + std::log(sum_);
  }

  std::int64_t count() const { return count_; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
  std::int64_t count_ = 0;
};

// Compensated running sum; keeps cumulative log-products accurate to the
// rounding error of the increments rather than of the total.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace rwre

#endif
