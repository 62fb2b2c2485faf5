#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace twospin {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(e^a + e^b), exact at the infinities.
inline double log_add_exp(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (a == -kInf) return -kInf;
  if (a == kInf) return kInf;
  return a + std::log1p(std::exp(b - a));
}

// log(1 + e^x) without overflow for large x.
inline double softplus(double x) noexcept {
  if (x == kInf) return kInf;
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// 1 / (1 + e^-x), stable in both tails.
inline double logistic(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Streaming log-sum-exp: one exp per term, rescaled whenever the max moves.
class log_accumulator {
 public:
  void add(double x) noexcept {
    if (x == -kInf) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }

  double value() const noexcept {
    if (max_ == -kInf) return -kInf;
    return max_ + std::log(sum_);
  }

 private:
  double max_ = -kInf;
  double sum_ = 0.0;
};

}  // namespace twospin
