#pragma once

// Root marginals on self-avoiding trees via the ratio recursion
//
//   R_node = e^{2 B_node} * prod_children (a R_child + b) / (c R_child + d),
//   a = e^{beta(+,+)}, b = e^{beta(+,-)}, c = e^{beta(-,+)}, d = e^{beta(-,-)},
//
// carried out on lambda = log R so that deep trees neither overflow nor
// underflow. A node fixed to + has lambda = +inf, fixed to - has -inf.

#include <cmath>
#include <string>
#include <vector>

#include "twospin/error.hpp"
#include "twospin/log_math.hpp"
#include "twospin/saw_tree.hpp"
#include "twospin/spin_core.hpp"

namespace twospin {

// log( P(X = +) / P(X = -) ) on the extended reals; never NaN.
class LogRatio {
 public:
  constexpr LogRatio() = default;

  explicit LogRatio(double value) : value_(value) {
    if (std::isnan(value)) throw invalid_argument("log-ratio cannot be NaN");
  }

  static constexpr LogRatio fixed_plus() noexcept { return LogRatio(kInf, 0); }
  static constexpr LogRatio fixed_minus() noexcept { return LogRatio(-kInf, 0); }

  constexpr double value() const noexcept { return value_; }

  friend constexpr bool operator==(LogRatio, LogRatio) = default;

 private:
  constexpr LogRatio(double value, int) noexcept : value_(value) {}

  double value_ = 0.0;
};

// log((a R + b) / (c R + d)) for a potential oriented parent -> child. Always
// finite for finite potentials.
inline double edge_factor_log(const EdgePotential& p, double child_lambda) noexcept {
  if (child_lambda == kInf) return p.pp - p.mp;
  if (child_lambda == -kInf) return p.pm - p.mm;
  return log_add_exp(p.pp + child_lambda, p.pm) - log_add_exp(p.mp + child_lambda, p.mm);
}

inline double edge_factor_log(const EdgePotential& p, LogRatio child) noexcept {
  return edge_factor_log(p, child.value());
}

// Bottom-up evaluation of the root log-ratio. Frontier nodes (free nodes at the
// depth limit) take `frontier`; free nodes above the limit with no children
// take their field term 2B alone.
inline LogRatio tree_log_ratio(const SpinSystem& sys, const SawTree& tree,
                               LogRatio frontier = LogRatio::fixed_minus()) {
  if (tree.root().fixed) {
    throw invalid_argument("root of the self-avoiding tree is fixed by the condition");
  }
  const auto nodes = tree.nodes();
  std::vector<double> lambda(nodes.size());
  for (std::size_t k = nodes.size(); k-- > 0;) {
    const SawNode& node = nodes[k];
    if (node.fixed) {
      lambda[k] = *node.fixed == Spin::plus ? kInf : -kInf;
      continue;
    }
    if (tree.is_frontier(node)) {
      lambda[k] = frontier.value();
      continue;
    }
    double acc = 2.0 * external_field(sys.field(node.origin));
    for (std::uint32_t c = node.first_child; c < node.first_child + node.child_count; ++c) {
      const SawNode& child = nodes[c];
      const EdgePotential& p = sys.potential(child.parent_edge);
      acc += edge_factor_log(node.origin < child.origin ? p : p.transposed(), lambda[c]);
    }
    lambda[k] = acc;
  }
  return LogRatio(lambda.front());
}

// P(X = +) = 1 / (1 + e^{-lambda}).
inline double marginal_plus(LogRatio lambda) noexcept { return logistic(lambda.value()); }

// log P(X = +), accurate even when P(X = +) underflows.
inline double log_marginal_plus(LogRatio lambda) noexcept { return -softplus(-lambda.value()); }

}  // namespace twospin
