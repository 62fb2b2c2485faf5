#pragma once

// Deterministic approximation of log Z by telescoping:
//
//   Z(G) = Z(G, Phi_{n+1}) * prod_j 1 / p_j,   p_j = P(X_j = + | X_i = + for i < j),
//
// with every p_j replaced by the root marginal of a self-avoiding tree
// truncated at depth t. For (d-1) tanh J < 1 the truncation depth
// t = ceil(log(4 n J d / eps) / log(1 / ((d-1) tanh J)) + 1) keeps each
// |log p_hat_j - log p_j| <= eps / n and therefore |log Z_hat - log Z| <= eps.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "twospin/error.hpp"
#include "twospin/marginal.hpp"
#include "twospin/saw_tree.hpp"
#include "twospin/spin_core.hpp"

namespace twospin {

// log Z(G, Phi_{n+1}): the log-weight of the all-plus configuration.
inline double all_plus_log_weight(const SpinSystem& sys) noexcept {
  double w = 0.0;
  for (const auto& p : sys.potentials()) w += p.pp;
  for (const auto& f : sys.fields()) w += f.h_plus;
  return w;
}

inline int truncation_depth(std::size_t n, double coupling, int d, double eps) {
  if (!(eps > 0.0)) throw invalid_argument("eps must be positive");
  if (n < 1) throw invalid_argument("truncation depth needs at least one vertex");
  if (coupling < 0.0) throw invalid_argument("coupling J must be non-negative");
  const double c = contraction_factor(coupling, d);
  if (c >= 1.0) throw inapplicable_error(c, d, coupling);
  if (coupling == 0.0) return 1;
  // d <= 1: f(1) = 4Jd and f(t) = 0 beyond, so t = 2 unless f(1) already fits.
  const double first = 4.0 * static_cast<double>(n) * coupling * d;
  if (c == 0.0) return first <= eps ? 1 : 2;
  const double raw =
      std::log(first / eps) / std::log(1.0 / c) + 1.0;
  const double depth = std::ceil(raw);
  if (depth >= static_cast<double>(std::numeric_limits<int>::max())) {
    return std::numeric_limits<int>::max();
  }
  return std::max(1, static_cast<int>(depth));
}

struct VertexEstimate {
  Vertex vertex = 0;
  int depth = 0;
  std::size_t node_count = 0;
  double p_hat = 0.0;
  double log_p_hat = 0.0;
};

// p_hat and bookkeeping for one root.
inline VertexEstimate estimate_vertex(const SpinSystem& sys, Vertex j, const Condition& cond,
                                      int depth, LogRatio frontier = LogRatio::fixed_minus()) {
  sys.graph().require(j);
  if (cond.contains(j)) {
    throw invalid_argument("vertex " + std::to_string(j) + " is fixed by the condition");
  }
  if (depth < 1) throw invalid_argument("depth must be at least 1");
  const SawTree tree = build_saw_tree(sys, j, depth, cond);
  const LogRatio lambda = tree_log_ratio(sys, tree, frontier);
  VertexEstimate est{j, depth, tree.node_count(), marginal_plus(lambda),
                     log_marginal_plus(lambda)};
  if (est.p_hat == 0.0) {
    throw numeric_error("estimated marginal of vertex " + std::to_string(j) +
                        " underflows to zero (log-ratio " + std::to_string(lambda.value()) + ")");
  }
  return est;
}

inline double conditional_marginal_estimate(const SpinSystem& sys, Vertex j,
                                            const Condition& cond, int depth,
                                            LogRatio frontier = LogRatio::fixed_minus()) {
  return estimate_vertex(sys, j, cond, depth, frontier).p_hat;
}

struct EstimateOptions {
  std::optional<int> degree_bound;  // defaults to Delta(G)
  LogRatio frontier = LogRatio::fixed_minus();
  unsigned threads = 1;             // 0 selects hardware concurrency
};

struct EstimateReport {
  double log_z_hat = 0.0;
  double eps = 0.0;
  int degree_bound = 0;
  double coupling = 0.0;
  double contraction = 0.0;
  int depth = 0;
  LogRatio frontier = LogRatio::fixed_minus();
  double log_weight_all_plus = 0.0;
  std::vector<VertexEstimate> vertices;
  std::size_t total_nodes = 0;
  double wall_seconds = 0.0;
};

inline EstimateReport fptas_log_partition(const SpinSystem& sys, double eps,
                                          const EstimateOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  if (!(eps > 0.0)) throw invalid_argument("eps must be positive");
  const SystemScalars scalars = compute_scalars(sys, options.degree_bound);
  if (!decay_condition_holds(scalars)) {
    throw inapplicable_error(scalars.contraction, scalars.degree_bound, scalars.coupling);
  }

  EstimateReport report;
  report.eps = eps;
  report.degree_bound = scalars.degree_bound;
  report.coupling = scalars.coupling;
  report.contraction = scalars.contraction;
  report.frontier = options.frontier;
  report.log_weight_all_plus = all_plus_log_weight(sys);

  const std::size_t n = sys.vertex_count();
  report.depth = n == 0 ? 1 : truncation_depth(n, scalars.coupling, scalars.degree_bound, eps);
  report.vertices.resize(n);

  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    Condition cond;
    for (std::size_t k; (k = next.fetch_add(1)) < n;) {
      // Phi_j = { X_i = + : i < j }.
      cond.clear();
      for (Vertex i = 1; i <= k; ++i) cond.emplace_hint(cond.end(), i, Spin::plus);
      try {
        report.vertices[k] = estimate_vertex(sys, static_cast<Vertex>(k + 1), cond,
                                             report.depth, options.frontier);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Ascending j, independent of the thread count.
  double sum_log_p = 0.0;
  for (const auto& v : report.vertices) {
    sum_log_p += v.log_p_hat;
    report.total_nodes += v.node_count;
  }
  report.log_z_hat = report.log_weight_all_plus - sum_log_p;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace twospin
