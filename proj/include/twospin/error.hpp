#pragma once

#include <stdexcept>
#include <string>

namespace twospin {

// Bad arguments: unknown vertex labels, negative depths, malformed conditions.
class invalid_argument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input files that do not match the graph schema.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

// The instance lies outside (d-1) tanh J < 1, where the approximation
// guarantee does not hold.
class inapplicable_error : public std::runtime_error {
 public:
  inapplicable_error(double contraction, int degree_bound, double coupling)
      : std::runtime_error("approximation inapplicable: (d-1)*tanh(J) = " +
                           std::to_string(contraction) + " >= 1 (d = " +
                           std::to_string(degree_bound) + ", J = " +
                           std::to_string(coupling) + ")"),
        contraction_(contraction),
        degree_bound_(degree_bound),
        coupling_(coupling) {}

  double contraction() const noexcept { return contraction_; }
  int degree_bound() const noexcept { return degree_bound_; }
  double coupling() const noexcept { return coupling_; }

 private:
  double contraction_;
  int degree_bound_;
  double coupling_;
};

// Numerical failure, e.g. an estimated marginal that underflows to zero.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Brute-force requests beyond the enumeration cap.
class too_large_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twospin
