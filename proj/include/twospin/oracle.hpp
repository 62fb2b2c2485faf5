#pragma once

// Exact enumeration and property checks for desk-scale instances.
//
// Everything here is independent of the tree machinery it is used to check,
// except where a check explicitly compares the two.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "twospin/error.hpp"
#include "twospin/graph_gen.hpp"
#include "twospin/log_math.hpp"
#include "twospin/marginal.hpp"
#include "twospin/partition.hpp"
#include "twospin/saw_tree.hpp"
#include "twospin/spin_core.hpp"

namespace twospin {

inline constexpr int kMaxEnumeratedVertices = 24;

// Outcome of a property check: pass iff max_violation <= tolerance.
struct CheckReport {
  std::string name;
  std::size_t trials = 0;
  double max_statistic = 0.0;  // check-specific measured quantity, maximised
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string worst;           // seed and parameters of the worst trial

  void record(double statistic, double violation, const std::string& fingerprint) {
    ++trials;
    max_statistic = std::max(max_statistic, statistic);
    if (trials == 1 || violation > max_violation) {
      max_violation = violation;
      worst = fingerprint;
    }
    passed = max_violation <= tolerance;
  }

  void merge(const CheckReport& other) {
    trials += other.trials;
    max_statistic = std::max(max_statistic, other.max_statistic);
    if (other.trials > 0 && (trials == other.trials || other.max_violation > max_violation)) {
      max_violation = other.max_violation;
      worst = other.worst;
    }
    passed = max_violation <= tolerance;
  }
};

inline std::string describe(const Condition& cond) {
  std::string s = "{";
  for (const auto& [v, spin] : cond) {
    if (s.size() > 1) s += ',';
    s += std::to_string(v) + to_char(spin);
  }
  return s + "}";
}

// log Z(G, cond) by Gray-code enumeration of the unconditioned vertices.
inline double exact_log_partition(const SpinSystem& sys, const Condition& cond = {}) {
  const Graph& g = sys.graph();
  const std::size_t n = g.vertex_count();
  std::vector<Spin> spins(n, Spin::plus);
  std::vector<char> pinned(n, 0);
  for (const auto& [v, s] : cond) {
    if (!g.contains(v)) {
      throw invalid_argument("condition references unknown vertex " + std::to_string(v));
    }
    spins[v - 1] = s;
    pinned[v - 1] = 1;
  }
  std::vector<Vertex> free_vertices;
  for (Vertex v = 1; v <= n; ++v) {
    if (!pinned[v - 1]) free_vertices.push_back(v);
  }
  if (free_vertices.size() > kMaxEnumeratedVertices) {
    throw too_large_error(std::to_string(free_vertices.size()) +
                          " unconditioned vertices exceed the enumeration cap of " +
                          std::to_string(kMaxEnumeratedVertices));
  }

  auto flip_delta = [&](Vertex v) {
    const Spin old_spin = spins[v - 1];
    const Spin new_spin = -old_spin;
    const auto& f = sys.field(v);
    double delta = f(new_spin) - f(old_spin);
    for (const auto& nb : g.neighbors(v)) {
      const EdgePotential p = sys.oriented(v, nb);
      const Spin other = spins[nb.vertex - 1];
      delta += p(new_spin, other) - p(old_spin, other);
    }
    return delta;
  };

  log_accumulator acc;
  double w = sys.log_weight(spins);
  acc.add(w);
  const std::uint64_t total = std::uint64_t{1} << free_vertices.size();
  for (std::uint64_t step = 1; step < total; ++step) {
    const Vertex v = free_vertices[static_cast<std::size_t>(std::countr_zero(step))];
    w += flip_delta(v);
    spins[v - 1] = -spins[v - 1];
    // Re-anchor the incremental weight so rounding cannot drift.
    if ((step & 0xFFF) == 0) w = sys.log_weight(spins);
    acc.add(w);
  }
  return acc.value();
}

// log P(X_v = s | cond).
inline double exact_log_conditional_marginal(const SpinSystem& sys, Vertex v, Spin s,
                                             const Condition& cond = {}) {
  sys.graph().require(v);
  if (cond.contains(v)) {
    throw invalid_argument("vertex " + std::to_string(v) + " is already conditioned");
  }
  Condition with = cond;
  with.emplace(v, s);
  return exact_log_partition(sys, with) - exact_log_partition(sys, cond);
}

inline double exact_conditional_marginal(const SpinSystem& sys, Vertex v, Spin s,
                                         const Condition& cond = {}) {
  return std::exp(exact_log_conditional_marginal(sys, v, s, cond));
}

// Root marginal of the complete self-avoiding tree against enumeration on G.
inline CheckReport check_saw_identity(const SpinSystem& sys, Vertex v, const Condition& cond,
                                      double tol = 1e-9) {
  CheckReport report{"saw_identity", 0, 0.0, 0.0, tol, true, {}};
  const double exact = exact_conditional_marginal(sys, v, Spin::plus, cond);
  const SawTree tree = build_saw_tree(sys, v, static_cast<int>(sys.vertex_count()), cond);
  const double via_tree = marginal_plus(tree_log_ratio(sys, tree));
  const double diff = std::abs(exact - via_tree);
  report.record(diff, diff, "root=" + std::to_string(v) + " cond=" + describe(cond));
  return report;
}

// Relative excess of
//   max(g(x)/g(y), g(y)/g(x))  over  max(x/y, y/x)^t,
// g(x) = (a x + b) / (c x + d), t = |(sqrt(ad) - sqrt(bc)) / (sqrt(ad) + sqrt(bc))|,
// evaluated in plain arithmetic. Non-positive when the inequality holds.
inline double contraction_excess(double a, double b, double c, double d, double x, double y) {
  auto g = [&](double z) { return (a * z + b) / (c * z + d); };
  const double ad = std::sqrt(a * d);
  const double bc = std::sqrt(b * c);
  const double t = std::abs((ad - bc) / (ad + bc));
  const double lhs = std::max(g(x) / g(y), g(y) / g(x));
  const double rhs = std::pow(std::max(x / y, y / x), t);
  return lhs / rhs - 1.0;
}

// contraction_excess on sextuples drawn log-uniformly from [e^-5, e^5].
inline CheckReport check_contraction(std::size_t trials, std::uint64_t seed,
                                     double tol = 1e-12) {
  if (trials < 1) throw invalid_argument("trials must be at least 1");
  CheckReport report{"contraction", 0, 0.0, 0.0, tol, true, {}};
  Rng rng(seed);
  auto draw = [&rng] { return std::exp(rng.uniform(-5.0, 5.0)); };
  for (std::size_t k = 0; k < trials; ++k) {
    const double a = draw(), b = draw(), c = draw(), d = draw(), x = draw(), y = draw();
    const double excess = contraction_excess(a, b, c, d, x, y);
    report.record(1.0 + excess, excess,
                  "seed=" + std::to_string(seed) + " trial=" + std::to_string(k));
  }
  return report;
}

// |edge_factor_log(p, l1) - edge_factor_log(p, l2)| <= tanh|J_p| |l1 - l2| on
// random potentials (entries in [-3, 3]) and log-ratios in [-30, 30] with
// occasional +-inf. Violation is the excess over the bound, relative to
// max(1, bound).
inline CheckReport check_log_lipschitz(std::size_t trials, std::uint64_t seed,
                                       double tol = 1e-12) {
  if (trials < 1) throw invalid_argument("trials must be at least 1");
  CheckReport report{"log_lipschitz", 0, 0.0, 0.0, tol, true, {}};
  Rng rng(seed);
  auto draw_lambda = [&rng] {
    const double u = rng.uniform();
    if (u < 0.05) return kInf;
    if (u < 0.10) return -kInf;
    return rng.uniform(-30.0, 30.0);
  };
  for (std::size_t k = 0; k < trials; ++k) {
    const EdgePotential p{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0),
                          rng.uniform(-3.0, 3.0)};
    const double l1 = draw_lambda();
    const double l2 = draw_lambda();
    const double lhs = std::abs(edge_factor_log(p, l1) - edge_factor_log(p, l2));
    const double slope = std::tanh(std::abs(interaction_strength(p)));
    const double gap = l1 == l2 ? 0.0 : std::abs(l1 - l2);
    const double rhs = slope == 0.0 ? 0.0 : slope * gap;
    const double excess = rhs == kInf ? 0.0 : (lhs - rhs) / std::max(1.0, rhs);
    report.record(lhs, excess,
                  "seed=" + std::to_string(seed) + " trial=" + std::to_string(k));
  }
  return report;
}

// Vertices at graph distance exactly t from v.
inline std::vector<Vertex> sphere(const Graph& g, Vertex v, int t) {
  const auto dist = g.distances_from(v);
  std::vector<Vertex> out;
  for (Vertex u = 1; u <= g.vertex_count(); ++u) {
    if (dist[u - 1] == t) out.push_back(u);
  }
  return out;
}

// Pairs of random boundary configurations on the sphere S(G, v, t); measures
// |log P(X_v=+|sigma) - log P(X_v=+|eta)| by enumeration and compares with
// f(t). max_statistic holds the largest measured difference; the violation is
// measured - f(t).
inline CheckReport check_decay_bound(const SpinSystem& sys, Vertex v, int t, std::size_t trials,
                                     std::uint64_t seed, std::optional<int> d = std::nullopt,
                                     double tol = 1e-9) {
  if (t < 1) throw invalid_argument("distance t must be at least 1");
  const auto boundary = sphere(sys.graph(), v, t);
  if (boundary.empty()) {
    throw invalid_argument("no vertices at distance " + std::to_string(t) + " from vertex " +
                           std::to_string(v));
  }
  const SystemScalars scalars = compute_scalars(sys, d);
  const double bound = decay_function(t, scalars.coupling, scalars.degree_bound);
  CheckReport report{"decay_bound", 0, 0.0, 0.0, tol, true, {}};
  Rng rng(seed);
  auto draw = [&] {
    Condition c;
    for (Vertex u : boundary) c.emplace(u, rng.bernoulli(0.5) ? Spin::plus : Spin::minus);
    return c;
  };
  for (std::size_t k = 0; k < trials; ++k) {
    const Condition sigma = draw();
    const Condition eta = draw();
    const double diff = std::abs(exact_log_conditional_marginal(sys, v, Spin::plus, sigma) -
                                 exact_log_conditional_marginal(sys, v, Spin::plus, eta));
    report.record(diff, diff - bound,
                  "seed=" + std::to_string(seed) + " trial=" + std::to_string(k) + " root=" +
                      std::to_string(v) + " t=" + std::to_string(t) + " sigma=" +
                      describe(sigma) + " eta=" + describe(eta));
  }
  return report;
}

// Exact conditional marginals p_j = P(X_j = + | Phi_j) telescoped back into
// log Z, compared with direct enumeration.
inline CheckReport check_telescoping(const SpinSystem& sys, double tol = 1e-9,
                                     const std::string& fingerprint = {}) {
  CheckReport report{"telescoping", 0, 0.0, 0.0, tol, true, {}};
  Condition phi;
  double sum_log_p = 0.0;
  for (Vertex j = 1; j <= sys.vertex_count(); ++j) {
    sum_log_p += exact_log_conditional_marginal(sys, j, Spin::plus, phi);
    phi.emplace(j, Spin::plus);
  }
  const double rebuilt = all_plus_log_weight(sys) - sum_log_p;
  const double diff = std::abs(rebuilt - exact_log_partition(sys));
  report.record(diff, diff, fingerprint);
  return report;
}

// |log Z_hat - log Z| against eps; violation is the excess over eps.
inline CheckReport check_fptas(const SpinSystem& sys, double eps,
                               const EstimateOptions& options = {},
                               const std::string& fingerprint = {}) {
  CheckReport report{"fptas", 0, 0.0, 0.0, 0.0, true, {}};
  const auto est = fptas_log_partition(sys, eps, options);
  const double err = std::abs(est.log_z_hat - exact_log_partition(sys));
  report.record(err, err - eps, fingerprint);
  return report;
}

// All labeled graphs on n vertices, edges indexed by the pairs (u < v) in
// lexicographic order; bit k of the mask selects pair k.
inline std::vector<Graph> all_connected_graphs(std::size_t n) {
  const auto pairs = complete_edges(n);
  if (pairs.size() > 20) throw too_large_error("too many labeled graphs to enumerate");
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (mask >> k & 1U) edges.push_back(pairs[k]);
    }
    Graph g(n, std::move(edges));
    if (g.connected()) out.push_back(std::move(g));
  }
  return out;
}

// Each vertex other than `root` is conditioned with probability 1/3 to a
// uniformly random spin.
inline Condition random_condition(std::size_t n, Vertex root, Rng& rng) {
  Condition cond;
  for (Vertex u = 1; u <= n; ++u) {
    if (u != root && rng.below(3) == 0) {
      cond.emplace(u, rng.bernoulli(0.5) ? Spin::plus : Spin::minus);
    }
  }
  return cond;
}

// Complete-tree identity over every connected labeled graph with up to
// max_n vertices, `draws` random systems each (couplings in [-1, 1], fields in
// [-1, 1]), every root, one random condition per root.
inline CheckReport sweep_saw_identity_exhaustive(std::size_t max_n, std::size_t draws,
                                                 std::uint64_t seed, double tol = 1e-9) {
  CheckReport report{"saw_identity_exhaustive", 0, 0.0, 0.0, tol, true, {}};
  Rng rng(seed);
  for (std::size_t n = 1; n <= max_n; ++n) {
    const auto graphs = all_connected_graphs(n);
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      for (std::size_t k = 0; k < draws; ++k) {
        const SpinSystem sys = random_system(graphs[gi], 1.0, 1.0, rng);
        for (Vertex v = 1; v <= n; ++v) {
          const Condition cond = random_condition(n, v, rng);
          auto r = check_saw_identity(sys, v, cond, tol);
          r.worst = "n=" + std::to_string(n) + " graph=" + std::to_string(gi) + " draw=" +
                    std::to_string(k) + " " + r.worst;
          report.merge(r);
        }
      }
    }
  }
  return report;
}

// G(n, 3/n) graphs with 2 <= n <= max_n; an empty draw falls back to a path.
inline CheckReport sweep_saw_identity_random(std::size_t instances, std::size_t max_n,
                                             std::uint64_t seed, double tol = 1e-9) {
  CheckReport report{"saw_identity_random", 0, 0.0, 0.0, tol, true, {}};
  Rng rng(seed);
  for (std::size_t k = 0; k < instances; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(max_n - 1));
    const std::uint64_t sub = rng.next();
    auto edges = erdos_renyi_edges(n, std::min(3.0, static_cast<double>(n)), sub);
    Graph g(n, edges.empty() ? path_edges(n) : std::move(edges));
    const SpinSystem sys = random_system(std::move(g), 1.0, 1.0, rng);
    for (Vertex v = 1; v <= n; ++v) {
      const Condition cond = random_condition(n, v, rng);
      auto r = check_saw_identity(sys, v, cond, tol);
      r.worst = "instance=" + std::to_string(k) + " n=" + std::to_string(n) + " " + r.worst;
      report.merge(r);
    }
  }
  return report;
}

}  // namespace twospin
