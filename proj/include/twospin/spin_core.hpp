#pragma once

// Two-state spin systems on finite graphs.
//
// A configuration sigma in {+,-}^V has weight
//   exp( sum_{(i,j) in E} beta_ij(sigma_i, sigma_j) + sum_{i in V} h_i(sigma_i) )
// and Z is the sum of weights. Vertices carry the labels 1..n; the labels are
// load-bearing because they define the edge order used by the self-avoiding
// tree and the conditioning sequence of the partition estimator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twospin/error.hpp"
#include "twospin/log_math.hpp"

namespace twospin {

enum class Spin : std::int8_t { minus = -1, plus = 1 };

constexpr Spin operator-(Spin s) noexcept {
  return s == Spin::plus ? Spin::minus : Spin::plus;
}

constexpr char to_char(Spin s) noexcept { return s == Spin::plus ? '+' : '-'; }

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Vertex vertex = 0;
  std::uint32_t edge = 0;  // index into Graph::edges()
};

// Simple undirected graph on vertices 1..n. Edges are stored once with u < v,
// sorted lexicographically; adjacency lists are sorted by neighbor label.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t vertex_count, std::vector<Edge> edges)
      : adjacency_(vertex_count) {
    for (auto& e : edges) {
      if (e.u == e.v) {
        throw invalid_argument("self-loop at vertex " + std::to_string(e.u));
      }
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.u < 1 || e.v > vertex_count) {
        throw invalid_argument("edge (" + std::to_string(e.u) + "," +
                               std::to_string(e.v) + ") references a vertex outside 1.." +
                               std::to_string(vertex_count));
      }
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
      throw invalid_argument("duplicate edge (" + std::to_string(dup->u) + "," +
                             std::to_string(dup->v) + ")");
    }
    edges_ = std::move(edges);
    for (std::uint32_t k = 0; k < edges_.size(); ++k) {
      adjacency_[edges_[k].u - 1].push_back({edges_[k].v, k});
      adjacency_[edges_[k].v - 1].push_back({edges_[k].u, k});
    }
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end(),
                [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    }
  }

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool contains(Vertex v) const noexcept { return v >= 1 && v <= adjacency_.size(); }

  std::span<const Neighbor> neighbors(Vertex v) const {
    require(v);
    return adjacency_[v - 1];
  }

  int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }

  int max_degree() const noexcept {
    std::size_t best = 0;
    for (const auto& list : adjacency_) best = std::max(best, list.size());
    return static_cast<int>(best);
  }

  std::optional<std::uint32_t> find_edge(Vertex a, Vertex b) const {
    if (!contains(a) || !contains(b)) return std::nullopt;
    const auto& list = adjacency_[a - 1];
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const Neighbor& n, Vertex x) { return n.vertex < x; });
    if (it == list.end() || it->vertex != b) return std::nullopt;
    return it->edge;
  }

  void require(Vertex v) const {
    if (!contains(v)) {
      throw invalid_argument("unknown vertex " + std::to_string(v) + " (graph has " +
                             std::to_string(adjacency_.size()) + " vertices)");
    }
  }

  // Breadth-first distances from v; -1 marks unreachable vertices. Index k
  // holds the distance to vertex k + 1.
  std::vector<int> distances_from(Vertex v) const {
    require(v);
    std::vector<int> dist(vertex_count(), -1);
    std::vector<Vertex> queue{v};
    dist[v - 1] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex x = queue[head];
      for (const auto& nb : adjacency_[x - 1]) {
        if (dist[nb.vertex - 1] < 0) {
          dist[nb.vertex - 1] = dist[x - 1] + 1;
          queue.push_back(nb.vertex);
        }
      }
    }
    return dist;
  }

  bool connected() const {
    if (vertex_count() == 0) return true;
    const auto dist = distances_from(1);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
  }

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<Edge> edges_;
};

// beta(a, b) for the orientation it was built in. The reverse orientation is
// the transpose: beta_ji(b, a) = beta_ij(a, b).
struct EdgePotential {
  double pp = 0.0;
  double pm = 0.0;
  double mp = 0.0;
  double mm = 0.0;

  double operator()(Spin a, Spin b) const noexcept {
    if (a == Spin::plus) return b == Spin::plus ? pp : pm;
    return b == Spin::plus ? mp : mm;
  }

  EdgePotential transposed() const noexcept { return {pp, mp, pm, mm}; }

  bool finite() const noexcept {
    return std::isfinite(pp) && std::isfinite(pm) && std::isfinite(mp) && std::isfinite(mm);
  }

  static EdgePotential ising(double coupling) noexcept {
    return {coupling, -coupling, -coupling, coupling};
  }

  friend bool operator==(const EdgePotential&, const EdgePotential&) = default;
};

struct VertexField {
  double h_plus = 0.0;
  double h_minus = 0.0;

  double operator()(Spin s) const noexcept { return s == Spin::plus ? h_plus : h_minus; }

  bool finite() const noexcept { return std::isfinite(h_plus) && std::isfinite(h_minus); }

  static VertexField ising(double field) noexcept { return {field, -field}; }

  friend bool operator==(const VertexField&, const VertexField&) = default;
};

class SpinSystem {
 public:
  SpinSystem() = default;

  SpinSystem(Graph graph, std::vector<EdgePotential> potentials, std::vector<VertexField> fields)
      : graph_(std::move(graph)), potentials_(std::move(potentials)), fields_(std::move(fields)) {
    if (potentials_.size() != graph_.edge_count()) {
      throw invalid_argument("expected " + std::to_string(graph_.edge_count()) +
                             " edge potentials, got " + std::to_string(potentials_.size()));
    }
    if (fields_.size() != graph_.vertex_count()) {
      throw invalid_argument("expected " + std::to_string(graph_.vertex_count()) +
                             " vertex fields, got " + std::to_string(fields_.size()));
    }
    for (std::size_t k = 0; k < potentials_.size(); ++k) {
      if (!potentials_[k].finite()) {
        throw invalid_argument("non-finite potential on edge (" +
                               std::to_string(graph_.edges()[k].u) + "," +
                               std::to_string(graph_.edges()[k].v) + ")");
      }
    }
    for (std::size_t k = 0; k < fields_.size(); ++k) {
      if (!fields_[k].finite()) {
        throw invalid_argument("non-finite field on vertex " + std::to_string(k + 1));
      }
    }
  }

  const Graph& graph() const noexcept { return graph_; }
  std::size_t vertex_count() const noexcept { return graph_.vertex_count(); }

  // Potential of edge index k, oriented from the smaller label to the larger.
  const EdgePotential& potential(std::uint32_t edge) const { return potentials_.at(edge); }
  const std::vector<EdgePotential>& potentials() const noexcept { return potentials_; }

  const VertexField& field(Vertex v) const {
    graph_.require(v);
    return fields_[v - 1];
  }
  const std::vector<VertexField>& fields() const noexcept { return fields_; }

  // beta_{from, nb.vertex}(a, b) with a the spin at `from`.
  EdgePotential oriented(Vertex from, const Neighbor& nb) const {
    const auto& p = potentials_[nb.edge];
    return from < nb.vertex ? p : p.transposed();
  }

  // Log-weight of a full configuration; spins[k] is the spin of vertex k + 1.
  double log_weight(std::span<const Spin> spins) const {
    if (spins.size() != vertex_count()) {
      throw invalid_argument("configuration size does not match vertex count");
    }
    double w = 0.0;
    for (std::size_t k = 0; k < fields_.size(); ++k) w += fields_[k](spins[k]);
    for (std::size_t k = 0; k < potentials_.size(); ++k) {
      const auto& e = graph_.edges()[k];
      w += potentials_[k](spins[e.u - 1], spins[e.v - 1]);
    }
    return w;
  }

 private:
  Graph graph_;
  std::vector<EdgePotential> potentials_;
  std::vector<VertexField> fields_;
};

// J_ij: quarter of the alternating sum of the four energies.
inline double interaction_strength(const EdgePotential& p) noexcept {
  return (p.pp + p.mm - p.mp - p.pm) / 4.0;
}

// B_i = (h(+) - h(-)) / 2.
inline double external_field(const VertexField& f) noexcept {
  return (f.h_plus - f.h_minus) / 2.0;
}

// J_d = log(d / (d - 2)) / 2, the boundary of (d-1) tanh J < 1. Infinite for
// d <= 2, where the condition holds for every finite J.
inline double critical_inverse_temperature(int d) {
  if (d < 0) throw invalid_argument("degree bound must be non-negative");
  if (d <= 2) return kInf;
  return 0.5 * std::log(static_cast<double>(d) / static_cast<double>(d - 2));
}

// (d-1) tanh J, clamped at zero for d < 1.
inline double contraction_factor(double coupling, int d) noexcept {
  return std::max(0, d - 1) * std::tanh(coupling);
}

// f(t) = 4 J d ((d-1) tanh J)^(t-1): bound on the change of the root's log
// marginal when the boundary at distance t changes.
inline double decay_function(int t, double coupling, int d) {
  if (t < 1) throw invalid_argument("decay_function needs t >= 1");
  return 4.0 * coupling * d * std::pow(contraction_factor(coupling, d), t - 1);
}

struct SystemScalars {
  std::vector<double> couplings;  // J_ij per edge index
  std::vector<double> fields;     // B_i per vertex, index v - 1
  double coupling = 0.0;          // J = max |J_ij|
  int max_degree = 0;             // Delta(G)
  int degree_bound = 0;           // d >= Delta(G)
  double critical = kInf;         // J_d
  double contraction = 0.0;       // (d-1) tanh J
};

// Scalars for `sys` under degree bound d; defaults to d = Delta(G).
inline SystemScalars compute_scalars(const SpinSystem& sys, std::optional<int> d = std::nullopt) {
  SystemScalars s;
  s.max_degree = sys.graph().max_degree();
  s.degree_bound = d.value_or(s.max_degree);
  if (s.degree_bound < s.max_degree) {
    throw invalid_argument("degree bound " + std::to_string(s.degree_bound) +
                           " is below the maximum degree " + std::to_string(s.max_degree));
  }
  s.couplings.reserve(sys.potentials().size());
  for (const auto& p : sys.potentials()) {
    s.couplings.push_back(interaction_strength(p));
    s.coupling = std::max(s.coupling, std::abs(s.couplings.back()));
  }
  s.fields.reserve(sys.fields().size());
  for (const auto& f : sys.fields()) s.fields.push_back(external_field(f));
  s.critical = critical_inverse_temperature(s.degree_bound);
  s.contraction = contraction_factor(s.coupling, s.degree_bound);
  return s;
}

inline bool decay_condition_holds(const SystemScalars& s) noexcept { return s.contraction < 1.0; }

}  // namespace twospin
