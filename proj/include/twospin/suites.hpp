#pragma once

// Seeded instance families and sweeps shared by the `verify` command and the
// acceptance tests.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "twospin/graph_gen.hpp"
#include "twospin/oracle.hpp"
#include "twospin/partition.hpp"
#include "twospin/spin_core.hpp"

namespace twospin {

struct Instance {
  std::string label;
  SpinSystem system;
  int degree_bound = 0;
  double eps = 0.0;
};

// Families cycle, grid, random 3- and 4-regular and G(n, 3/n) with 4 <= n <= 12,
// alternating Ising couplings with random fields and fully random potentials.
// J = 0.9 J_d exactly, where d = max(3, Delta(G)); random potentials are drawn
// and then rescaled to reach it. Fields satisfy |B| <= 1;
// eps alternates between 0.2 and 0.05.
inline std::vector<Instance> fptas_instances(std::size_t count, std::uint64_t seed) {
  std::vector<Instance> out;
  Rng rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    GenSpec spec;
    spec.seed = rng.next();
    switch (k % 5) {
      case 0:
        spec.family = Family::cycle;
        spec.n = 4 + rng.below(9);
        break;
      case 1:
        spec.family = Family::grid;
        spec.rows = 2 + rng.below(2);
        spec.cols = 2 + rng.below(spec.rows == 2 ? 5 : 3);
        break;
      case 2:
        spec.family = Family::random_regular;
        spec.degree = 3;
        spec.n = 4 + 2 * rng.below(5);
        break;
      case 3:
        spec.family = Family::random_regular;
        spec.degree = 4;
        spec.n = 5 + rng.below(8);
        break;
      default:
        spec.family = Family::erdos_renyi;
        spec.n = 4 + rng.below(9);
        spec.mean_degree = 3.0;
        break;
    }
    const Graph g = generate_graph(spec);
    const int d = std::max(3, g.max_degree());
    const double coupling = 0.9 * critical_inverse_temperature(d);
    const bool ising = (k / 5) % 2 == 0;
    if (ising) {
      spec.model = IsingRandomFieldModel{coupling, 1.0};
    } else {
      spec.model = RandomModel{coupling, 1.0};
    }
    Instance inst;
    inst.system = generate(spec);
    if (!ising && inst.system.graph().edge_count() > 0) {
      // Rescale so that max |J_ij| is exactly `coupling`.
      const double actual = compute_scalars(inst.system).coupling;
      std::vector<EdgePotential> scaled;
      for (auto p : inst.system.potentials()) {
        const double r = coupling / actual;
        scaled.push_back({p.pp * r, p.pm * r, p.mp * r, p.mm * r});
      }
      inst.system = SpinSystem(inst.system.graph(), std::move(scaled), inst.system.fields());
    }
    inst.degree_bound = d;
    inst.eps = (k / 10) % 2 == 0 ? 0.2 : 0.05;
    inst.label = std::string(family_name(spec.family)) + " n=" +
                 std::to_string(inst.system.vertex_count()) + " d=" + std::to_string(d) +
                 (ising ? " ising" : " random") + " eps=" + std::to_string(inst.eps) +
                 " seed=" + std::to_string(spec.seed);
    out.push_back(std::move(inst));
  }
  return out;
}

inline CheckReport sweep_fptas(const std::vector<Instance>& instances, unsigned threads = 1) {
  CheckReport report{"fptas", 0, 0.0, 0.0, 0.0, true, {}};
  for (const auto& inst : instances) {
    EstimateOptions opt;
    opt.degree_bound = inst.degree_bound;
    opt.threads = threads;
    report.merge(check_fptas(inst.system, inst.eps, opt, inst.label));
  }
  return report;
}

// Random systems with 2 <= n <= max_n on the same families, random potentials.
inline CheckReport sweep_telescoping(std::size_t count, std::size_t max_n, std::uint64_t seed,
                                     double tol = 1e-9) {
  CheckReport report{"telescoping", 0, 0.0, 0.0, tol, true, {}};
  auto instances = fptas_instances(count, seed);
  for (auto& inst : instances) {
    if (inst.system.vertex_count() > max_n) continue;
    report.merge(check_telescoping(inst.system, tol, inst.label));
  }
  return report;
}

struct DecaySweep {
  std::vector<int> distances;
  std::vector<CheckReport> per_distance;  // aligned with distances
};

// Random 3-regular Ising systems (J = coupling, no field) on n vertices. On each
// graph the root is the lowest-labelled vertex of maximum eccentricity; graphs
// whose eccentricity is below max(distances) are skipped.
inline DecaySweep sweep_decay(std::size_t graphs, std::size_t n, double coupling,
                              std::vector<int> distances, std::size_t pairs, std::uint64_t seed,
                              double tol = 1e-9) {
  DecaySweep out;
  out.distances = distances;
  for (int t : distances) {
    out.per_distance.push_back({"decay_bound t=" + std::to_string(t), 0, 0.0, 0.0, tol, true, {}});
  }
  const int needed = *std::max_element(distances.begin(), distances.end());
  Rng rng(seed);
  std::size_t used = 0;
  for (std::size_t attempt = 0; used < graphs && attempt < 100 * graphs; ++attempt) {
    GenSpec spec;
    spec.family = Family::random_regular;
    spec.n = n;
    spec.degree = 3;
    spec.model = IsingModel{coupling, 0.0};
    spec.seed = rng.next();
    const SpinSystem sys = generate(spec);
    Vertex root = 0;
    int best = -1;
    for (Vertex v = 1; v <= n; ++v) {
      const auto dist = sys.graph().distances_from(v);
      const int ecc = *std::max_element(dist.begin(), dist.end());
      if (std::find(dist.begin(), dist.end(), -1) != dist.end()) continue;
      if (ecc > best) {
        best = ecc;
        root = v;
      }
    }
    if (best < needed) continue;
    ++used;
    for (std::size_t k = 0; k < distances.size(); ++k) {
      auto r = check_decay_bound(sys, root, distances[k], pairs, spec.seed + k, 3, tol);
      r.worst = "graph_seed=" + std::to_string(spec.seed) + " " + r.worst;
      out.per_distance[k].merge(r);
    }
  }
  return out;
}

}  // namespace twospin
