#pragma once

// Seeded generators for graph families and spin systems.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by the
// C++ standard. Each purpose draws from its own stream, seeded with
//   seed ^ (0x9E3779B97F4A7C15 * stream)
// where stream is 1 for topology, 2 for edge potentials and 3 for vertex
// fields. Reals are (x >> 11) * 2^-53 scaled to the interval; bounded
// integers use rejection sampling on the raw 64-bit output. None of this
// depends on the standard library's distribution classes, which are not
// portable across implementations.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "twospin/error.hpp"
#include "twospin/spin_core.hpp"

namespace twospin {

enum class Stream : std::uint64_t { topology = 1, potentials = 2, fields = 3 };

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream)
      : engine_(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(stream))) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t k = items.size(); k > 1; --k) {
      std::swap(items[k - 1], items[below(k)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

enum class Family { path, cycle, grid, complete, random_regular, erdos_renyi };

// beta(a,b) = J a b, h(s) = B s.
struct IsingModel {
  double coupling = 0.0;
  double field = 0.0;
};

// Ising couplings with an independent field B_i ~ U[-field_max, field_max] per vertex.
struct IsingRandomFieldModel {
  double coupling = 0.0;
  double field_max = 0.0;
};

// Every beta entry ~ U[-coupling_max, coupling_max] (so |J_ij| <= coupling_max)
// and both h entries ~ U[-field_max, field_max].
struct RandomModel {
  double coupling_max = 0.0;
  double field_max = 0.0;
};

using Model = std::variant<IsingModel, IsingRandomFieldModel, RandomModel>;

struct GenSpec {
  Family family = Family::path;
  std::size_t n = 0;           // path, cycle, complete, random_regular, erdos_renyi
  std::size_t rows = 0;        // grid
  std::size_t cols = 0;        // grid
  int degree = 0;              // random_regular
  double mean_degree = 0.0;    // erdos_renyi: edge probability mean_degree / n
  Model model = IsingModel{};
  std::uint64_t seed = 0;
};

inline constexpr int kMaxRegularAttempts = 100000;

inline std::vector<Edge> path_edges(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({v, v + 1});
  return edges;
}

inline std::vector<Edge> cycle_edges(std::size_t n) {
  if (n < 3) throw invalid_argument("a cycle needs at least 3 vertices");
  auto edges = path_edges(n);
  edges.push_back({1, static_cast<Vertex>(n)});
  return edges;
}

// Row-major labels: (r, c) -> r * cols + c + 1.
inline std::vector<Edge> grid_edges(std::size_t rows, std::size_t cols) {
  std::vector<Edge> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<Vertex>(r * cols + c + 1); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
    }
  }
  return edges;
}

inline std::vector<Edge> complete_edges(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 1; u <= n; ++u) {
    for (Vertex v = u + 1; v <= n; ++v) edges.push_back({u, v});
  }
  return edges;
}

// Pairing model: shuffle n*d stubs, pair them up, reject any draw with a
// self-loop or a repeated edge and retry with the next sub-seed.
inline std::vector<Edge> random_regular_edges(std::size_t n, int d, std::uint64_t seed) {
  if (d < 0) throw invalid_argument("degree must be non-negative");
  if ((n * static_cast<std::size_t>(d)) % 2 != 0) {
    throw invalid_argument("random regular graph needs n*d even (n = " + std::to_string(n) +
                           ", d = " + std::to_string(d) + ")");
  }
  if (static_cast<std::size_t>(d) >= n && !(n == 0 && d == 0)) {
    throw invalid_argument("random regular graph needs d < n");
  }
  std::vector<Vertex> stubs;
  stubs.reserve(n * static_cast<std::size_t>(d));
  for (int attempt = 0; attempt < kMaxRegularAttempts; ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt), Stream::topology);
    stubs.clear();
    for (Vertex v = 1; v <= n; ++v) stubs.insert(stubs.end(), static_cast<std::size_t>(d), v);
    rng.shuffle(stubs);
    std::vector<Edge> edges;
    bool simple = true;
    for (std::size_t k = 0; k + 1 < stubs.size() && simple; k += 2) {
      Edge e{std::min(stubs[k], stubs[k + 1]), std::max(stubs[k], stubs[k + 1])};
      if (e.u == e.v) simple = false;
      edges.push_back(e);
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    return edges;
  }
  throw invalid_argument("no simple " + std::to_string(d) + "-regular graph on " +
                         std::to_string(n) + " vertices found after " +
                         std::to_string(kMaxRegularAttempts) + " attempts");
}

// G(n, p) with p = mean_degree / n.
inline std::vector<Edge> erdos_renyi_edges(std::size_t n, double mean_degree, std::uint64_t seed) {
  if (n == 0) return {};
  if (!(mean_degree >= 0.0) || mean_degree > static_cast<double>(n)) {
    throw invalid_argument("erdos_renyi mean degree must lie in [0, n]");
  }
  const double p = mean_degree / static_cast<double>(n);
  Rng rng(seed, Stream::topology);
  std::vector<Edge> edges;
  for (Vertex u = 1; u <= n; ++u) {
    for (Vertex v = u + 1; v <= n; ++v) {
      if (rng.bernoulli(p)) edges.push_back({u, v});
    }
  }
  return edges;
}

inline Graph generate_graph(const GenSpec& spec) {
  switch (spec.family) {
    case Family::path:
      return Graph(spec.n, path_edges(spec.n));
    case Family::cycle:
      return Graph(spec.n, cycle_edges(spec.n));
    case Family::grid:
      return Graph(spec.rows * spec.cols, grid_edges(spec.rows, spec.cols));
    case Family::complete:
      return Graph(spec.n, complete_edges(spec.n));
    case Family::random_regular: {
      Graph g(spec.n, random_regular_edges(spec.n, spec.degree, spec.seed));
      for (Vertex v = 1; v <= g.vertex_count(); ++v) {
        if (g.degree(v) != spec.degree) {
          throw std::logic_error("degree audit failed at vertex " + std::to_string(v));
        }
      }
      return g;
    }
    case Family::erdos_renyi:
      return Graph(spec.n, erdos_renyi_edges(spec.n, spec.mean_degree, spec.seed));
  }
  throw invalid_argument("unknown graph family");
}

inline SpinSystem generate(const GenSpec& spec) {
  Graph g = generate_graph(spec);
  std::vector<EdgePotential> potentials;
  std::vector<VertexField> fields;
  Rng potential_rng(spec.seed, Stream::potentials);
  Rng field_rng(spec.seed, Stream::fields);
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, IsingModel>) {
          potentials.assign(g.edge_count(), EdgePotential::ising(m.coupling));
          fields.assign(g.vertex_count(), VertexField::ising(m.field));
        } else if constexpr (std::is_same_v<M, IsingRandomFieldModel>) {
          potentials.assign(g.edge_count(), EdgePotential::ising(m.coupling));
          for (std::size_t k = 0; k < g.vertex_count(); ++k) {
            fields.push_back(VertexField::ising(field_rng.uniform(-m.field_max, m.field_max)));
          }
        } else {
          const double j = m.coupling_max;
          for (std::size_t k = 0; k < g.edge_count(); ++k) {
            EdgePotential p;
            p.pp = potential_rng.uniform(-j, j);
            p.pm = potential_rng.uniform(-j, j);
            p.mp = potential_rng.uniform(-j, j);
            p.mm = potential_rng.uniform(-j, j);
            potentials.push_back(p);
          }
          for (std::size_t k = 0; k < g.vertex_count(); ++k) {
            VertexField f;
            f.h_plus = field_rng.uniform(-m.field_max, m.field_max);
            f.h_minus = field_rng.uniform(-m.field_max, m.field_max);
            fields.push_back(f);
          }
        }
      },
      spec.model);
  return SpinSystem(std::move(g), std::move(potentials), std::move(fields));
}

// Random-model potentials and fields on a fixed graph, drawn from `rng`.
inline SpinSystem random_system(Graph g, double coupling_max, double field_max, Rng& rng) {
  std::vector<EdgePotential> potentials;
  std::vector<VertexField> fields;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    potentials.push_back({rng.uniform(-coupling_max, coupling_max),
                          rng.uniform(-coupling_max, coupling_max),
                          rng.uniform(-coupling_max, coupling_max),
                          rng.uniform(-coupling_max, coupling_max)});
  }
  for (std::size_t k = 0; k < g.vertex_count(); ++k) {
    fields.push_back({rng.uniform(-field_max, field_max), rng.uniform(-field_max, field_max)});
  }
  return SpinSystem(std::move(g), std::move(potentials), std::move(fields));
}

inline const char* family_name(Family f) noexcept {
  switch (f) {
    case Family::path: return "path";
    case Family::cycle: return "cycle";
    case Family::grid: return "grid";
    case Family::complete: return "complete";
    case Family::random_regular: return "random_regular";
    case Family::erdos_renyi: return "erdos_renyi";
  }
  return "?";
}

inline Family parse_family(const std::string& name) {
  for (Family f : {Family::path, Family::cycle, Family::grid, Family::complete,
                   Family::random_regular, Family::erdos_renyi}) {
    if (name == family_name(f)) return f;
  }
  throw invalid_argument("unknown graph family '" + name + "'");
}

}  // namespace twospin
