#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_util.hpp"
#include "twospin/marginal.hpp"

namespace twospin {
namespace {

using testing::flipped;
using testing::ising;

TEST(LogRatio, RejectsNaN) {
  EXPECT_THROW(LogRatio(std::nan("")), invalid_argument);
  EXPECT_EQ(LogRatio::fixed_plus().value(), kInf);
  EXPECT_EQ(LogRatio::fixed_minus().value(), -kInf);
}

TEST(EdgeFactorLog, Examples) {
  const EdgePotential flat{0.4, 0.4, 0.4, 0.4};
  for (double l : {-kInf, -3.0, 0.0, 2.5, kInf}) EXPECT_DOUBLE_EQ(edge_factor_log(flat, l), 0.0);
  const auto p = EdgePotential::ising(0.5);
  EXPECT_DOUBLE_EQ(edge_factor_log(p, kInf), 1.0);
  EXPECT_DOUBLE_EQ(edge_factor_log(p, -kInf), -1.0);
  EXPECT_DOUBLE_EQ(edge_factor_log(p, 0.0), 0.0);
}

TEST(EdgeFactorLog, MatchesRawRatioFormula) {
  Rng rng(11);
  for (int k = 0; k < 2000; ++k) {
    const EdgePotential p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double l = rng.uniform(-8, 8);
    const double r = std::exp(l);
    const double raw = std::log((std::exp(p.pp) * r + std::exp(p.pm)) /
                                (std::exp(p.mp) * r + std::exp(p.mm)));
    EXPECT_NEAR(edge_factor_log(p, l), raw, 1e-12);
  }
}

TEST(EdgeFactorLog, FiniteOnExtremeInputs) {
  Rng rng(12);
  for (int k = 0; k < 5000; ++k) {
    const EdgePotential p{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-50, 50),
                          rng.uniform(-50, 50)};
    for (double l : {-kInf, -1e300, -700.0, rng.uniform(-800, 800), 700.0, 1e300, kInf}) {
      EXPECT_TRUE(std::isfinite(edge_factor_log(p, l))) << l;
    }
  }
}

TEST(EdgeFactorLog, LipschitzOnDenseGrid) {
  Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    const EdgePotential p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double slope = std::tanh(std::abs(interaction_strength(p)));
    for (double a = -20; a <= 20; a += 0.5) {
      for (double b = a; b <= 20; b += 0.75) {
        const double lhs = std::abs(edge_factor_log(p, a) - edge_factor_log(p, b));
        EXPECT_LE(lhs, slope * (b - a) + 1e-12);
      }
    }
  }
}

TEST(TreeLogRatio, SingleFreeNode) {
  const auto sys = ising(1, {}, 0.0, 0.35);
  const auto tree = build_saw_tree(sys, 1, 3);
  EXPECT_DOUBLE_EQ(tree_log_ratio(sys, tree).value(), 0.7);
}

TEST(TreeLogRatio, TwoVertexPathIsSymmetric) {
  const auto sys = ising(2, {{1, 2}}, 0.5, 0.0);
  const auto tree = build_saw_tree(sys, 1, 2);
  EXPECT_DOUBLE_EQ(tree_log_ratio(sys, tree).value(), 0.0);
  EXPECT_DOUBLE_EQ(marginal_plus(tree_log_ratio(sys, tree)), 0.5);
}

TEST(TreeLogRatio, FixedChild) {
  auto sys = ising(2, {{1, 2}}, 0.3, 0.0);
  sys = SpinSystem(sys.graph(), sys.potentials(), {VertexField::ising(0.1), {0, 0}});
  const auto tree = build_saw_tree(sys, 1, 3, {{2, Spin::plus}});
  EXPECT_NEAR(tree_log_ratio(sys, tree).value(), 0.8, 1e-15);
}

TEST(TreeLogRatio, OrientationMatters) {
  // Asymmetric potential on (1,2); rooting at 2 must read it transposed.
  Graph g(2, {{1, 2}});
  const SpinSystem sys(g, {{0.0, 1.0, -0.5, 0.2}}, {{0, 0}, {0, 0}});
  const auto from1 = tree_log_ratio(sys, build_saw_tree(sys, 1, 2, {{2, Spin::plus}}));
  const auto from2 = tree_log_ratio(sys, build_saw_tree(sys, 2, 2, {{1, Spin::plus}}));
  EXPECT_DOUBLE_EQ(from1.value(), 0.0 - (-0.5));  // beta_12(+,+) - beta_12(-,+)
  EXPECT_DOUBLE_EQ(from2.value(), 0.0 - 1.0);     // beta_21(+,+) - beta_21(-,+) = pp - pm
}

TEST(TreeLogRatio, FixedRootIsAnError) {
  const auto sys = ising(2, {{1, 2}}, 0.3, 0.0);
  const auto tree = build_saw_tree(sys, 1, 2, {{1, Spin::plus}});
  EXPECT_THROW(tree_log_ratio(sys, tree), invalid_argument);
}

TEST(TreeLogRatio, ShallowFreeLeafIsExact) {
  // Path 1-2: vertex 2 is a free leaf at depth 1 < limit, so the frontier value is unused.
  const auto sys = ising(2, {{1, 2}}, 0.4, 0.2);
  const auto tree = build_saw_tree(sys, 1, 5);
  EXPECT_EQ(tree_log_ratio(sys, tree, LogRatio::fixed_plus()).value(),
            tree_log_ratio(sys, tree, LogRatio::fixed_minus()).value());
}

TEST(MarginalPlus, Examples) {
  EXPECT_DOUBLE_EQ(marginal_plus(LogRatio(0.0)), 0.5);
  EXPECT_DOUBLE_EQ(marginal_plus(LogRatio::fixed_plus()), 1.0);
  EXPECT_DOUBLE_EQ(marginal_plus(LogRatio::fixed_minus()), 0.0);
  EXPECT_NEAR(marginal_plus(LogRatio(std::log(3.0))), 0.75, 1e-15);
  EXPECT_EQ(log_marginal_plus(LogRatio(-800.0)), -800.0);
  EXPECT_NEAR(log_marginal_plus(LogRatio(40.0)), -std::exp(-40.0), 1e-30);
}

SpinSystem random_instance(Rng& rng, std::size_t n, double coupling_max) {
  const double mean = std::min(3.0, static_cast<double>(n));
  return random_system(Graph(n, erdos_renyi_edges(n, mean, rng.next())), coupling_max, 1.0, rng);
}

TEST(TreeLogRatio, BoundarySensitivityBound) {
  Rng rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 4 + rng.below(6);
    const auto sys = random_instance(rng, n, 0.6);
    const double coupling = compute_scalars(sys).coupling;
    const Vertex root = static_cast<Vertex>(1 + rng.below(n));
    for (int t = 1; t <= 4; ++t) {
      const auto tree = build_saw_tree(sys, root, t);
      const double s = static_cast<double>(tree.frontier_count(t));
      const double bound = 4.0 * coupling * s * std::pow(std::tanh(coupling), t - 1);
      const double hi = tree_log_ratio(sys, tree, LogRatio::fixed_plus()).value();
      const double lo = tree_log_ratio(sys, tree, LogRatio::fixed_minus()).value();
      EXPECT_LE(std::abs(hi - lo), bound + 1e-12);
      for (int k = 0; k < 5; ++k) {
        const double mid = tree_log_ratio(sys, tree, LogRatio(rng.uniform(-10, 10))).value();
        EXPECT_LE(std::abs(mid - lo), bound + 1e-12);
        EXPECT_LE(std::abs(hi - mid), bound + 1e-12);
      }
    }
  }
}

TEST(TreeLogRatio, CompleteTreeIgnoresFrontier) {
  Rng rng(22);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.below(7);
    const auto sys = random_instance(rng, n, 1.0);
    const Vertex root = static_cast<Vertex>(1 + rng.below(n));
    const auto tree = build_saw_tree(sys, root, static_cast<int>(n));
    EXPECT_EQ(tree_log_ratio(sys, tree, LogRatio::fixed_plus()).value(),
              tree_log_ratio(sys, tree, LogRatio::fixed_minus()).value());
  }
}

TEST(TreeLogRatio, FlipSymmetry) {
  Rng rng(23);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.below(7);
    const auto sys = random_instance(rng, n, 1.0);
    const Vertex root = static_cast<Vertex>(1 + rng.below(n));
    const int limit = static_cast<int>(n);
    const double a = tree_log_ratio(sys, build_saw_tree(sys, root, limit)).value();
    // Complete trees, so flipping the cycle-closing spins is not needed:
    // compare against the flipped system's exact marginal via its own tree.
    const auto other = flipped(sys);
    const double b = tree_log_ratio(other, build_saw_tree(other, root, limit)).value();
    EXPECT_NEAR(a, -b, 1e-12);
  }
}

}  // namespace
}  // namespace twospin
