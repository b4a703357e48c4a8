#include <gtest/gtest.h>

#include <cmath>

#include "eulerlab/error.hpp"
#include "eulerlab/hitting.hpp"
#include "oracles.hpp"

using namespace eulerlab;

TEST(Hitting, NonLazyCycle) {
  for (std::size_t n : {3u, 5u, 9u}) {
    LazyChain c = LazyChain::build(gen_directed_cycle(n), 0.0);
    Eigen::MatrixXd h = hitting_times(c);
    EXPECT_NEAR(h(0, 1), 1.0, 1e-9);
    EXPECT_NEAR(h(1, 0), static_cast<double>(n - 1), 1e-9);
    EXPECT_NEAR(commute_time(h, 0, static_cast<VertexId>(n - 1)), static_cast<double>(n), 1e-9);
    EXPECT_NEAR(commute_time(c, 1, 2), static_cast<double>(n), 1e-9);
    LazyChain lazy = LazyChain::build(gen_directed_cycle(n), 0.5);
    EXPECT_NEAR(hitting_times(lazy)(1, 0), 2.0 * static_cast<double>(n - 1), 1e-9);
  }
}

TEST(Hitting, MatchesLinearSolveAndEnumeration) {
  std::vector<LazyChain> chains{LazyChain::build(gen_biased_cycle(5, 2, 1), 0.5),
                                LazyChain::build(gen_random_eulerian(5, 12, 3), 0.3),
                                LazyChain::build(gen_random_eulerian(4, 9, 8), 0.6)};
  for (const LazyChain& c : chains) {
    Eigen::MatrixXd h = hitting_times(c);
    EXPECT_LT(first_step_residual(c, h), 1e-9);
    Eigen::MatrixXd p = c.dense();
    for (VertexId v = 0; v < c.size(); ++v) {
      auto col = hitting_times_to(c, v);
      Eigen::VectorXd ref = oracle::hitting_to(p, v);
      EXPECT_EQ(h(v, v), 0.0);
      for (VertexId u = 0; u < c.size(); ++u) {
        EXPECT_NEAR(h(u, v), ref(u), 1e-9 * std::max(1.0, ref(u)));
        EXPECT_NEAR(col[u], ref(u), 1e-9 * std::max(1.0, ref(u)));
        EXPECT_NEAR(h(u, v), oracle::hitting_by_enumeration(p, u, v), 1e-8 * std::max(1.0, ref(u)));
      }
    }
  }
}

TEST(Hitting, BiasedCycleMaximumIsLinear) {
  auto max_h = [](std::size_t n) {
    return hitting_times(LazyChain::build(gen_biased_cycle(n, 2, 1), 0.5)).maxCoeff();
  };
  const double h64 = max_h(64), h128 = max_h(128), h256 = max_h(256);
  // linear up to a logarithmic correction: increments double with n
  const double ratio = (h256 - h128) / (h128 - h64);
  EXPECT_GT(ratio, 1.9);
  EXPECT_LT(ratio, 2.1);
  EXPECT_LT(h256 / 256.0, 6.0);
  EXPECT_GT(h256 / 256.0, 5.0);
}

TEST(Exit, SingleVertex) {
  LazyChain c = LazyChain::build(gen_directed_cycle(3), 0.5);
  EXPECT_NEAR(exit_time(c, {1}, 1), 2.0, 1e-12);
  EXPECT_NEAR(visits_before_exit(c, {1}, 1), 2.0, 1e-12);
  // non-lazy cycle: walk 0 -> 1 -> 2 -> out
  LazyChain d = LazyChain::build(gen_directed_cycle(5), 0.0);
  auto e = exit_times(d, {0, 1, 2});
  EXPECT_NEAR(e[0], 3.0, 1e-12);
  EXPECT_NEAR(e[2], 1.0, 1e-12);
  EXPECT_NEAR(visits_before_exit(d, {0, 1, 2}, 1), 1.0, 1e-12);
  EXPECT_THROW(exit_time(d, {0, 1}, 3), InputError);
}

TEST(Collision, StaticTargetMatchesHittingTime) {
  LazyChain c = LazyChain::build(gen_random_eulerian(6, 14, 2), 0.5);
  Eigen::MatrixXd h = hitting_times(c);
  for (VertexId v : {1u, 4u}) {
    auto est = moving_target_collision(c, 0, Trajectory::fixed(v), 20000, 0, 17);
    EXPECT_FALSE(est.flagged);
    EXPECT_NEAR(est.mean, h(0, v), 4.0 * est.stderr_);
  }
  auto zero = moving_target_collision(c, 3, Trajectory::fixed(3), 100, 0, 1);
  EXPECT_EQ(zero.mean, 0.0);
}

TEST(Collision, Deterministic) {
  LazyChain c = LazyChain::build(gen_biased_cycle(7, 2, 1), 0.5);
  auto traj = Trajectory::sweep(7, 2);
  auto a = moving_target_collision(c, 0, traj, 500, 0, 99, 0, 1);
  auto b = moving_target_collision(c, 0, traj, 500, 0, 99, 0, 1);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stderr_, b.stderr_);
}

TEST(Collision, TruncationFlag) {
  LazyChain c = LazyChain::build(gen_directed_cycle(50), 0.5);
  auto est = moving_target_collision(c, 0, Trajectory::fixed(49), 200, 5, 3);
  EXPECT_TRUE(est.flagged);
  EXPECT_DOUBLE_EQ(est.mean, 5.0);
  EXPECT_DOUBLE_EQ(est.truncated_fraction, 1.0);
}

TEST(Trajectory, Rules) {
  auto s = Trajectory::sweep(5, 2);
  EXPECT_EQ(s.at(0), 0u);
  EXPECT_EQ(s.at(3), 1u);
  EXPECT_EQ(s.at(10), 0u);
  auto t = Trajectory::from_table({2, 4, 1});
  EXPECT_EQ(t.at(1), 4u);
  EXPECT_EQ(t.at(100), 1u);
  auto a = Trajectory::antipodal_sweep(gen_directed_cycle(8), 0);
  EXPECT_EQ(a.at(0), 4u);
  EXPECT_EQ(a.at(2), 5u);
}

TEST(VisitCount, SmallTimes) {
  LazyChain c = LazyChain::build(gen_directed_cycle(3), 0.5);
  auto one = visit_count(c, 0, 1, 1000, 5);
  EXPECT_DOUBLE_EQ(one.mean, 1.0);
  EXPECT_DOUBLE_EQ(one.stderr_, 0.0);
  auto two = visit_count(c, 0, 2, 40000, 5);
  EXPECT_NEAR(two.mean, 1.5, 4.0 * two.stderr_);
}

TEST(Cover, NonLazyCycle) {
  for (std::size_t n : {4u, 11u}) {
    auto est = cover_time(LazyChain::build(gen_directed_cycle(n), 0.0), 0, 50, 1);
    EXPECT_DOUBLE_EQ(est.mean, static_cast<double>(n - 1));
  }
}

TEST(BoundAudit, NoViolationsOnSmallGraphs) {
  BoundAuditOptions opt;
  opt.samples = 200;
  opt.cover_replicas = 400;
  std::vector<EulerianMultigraph> simple{gen_directed_cycle(6), gen_random_eulerian(8, 20, 4, true),
                                         gen_random_eulerian(12, 30, 5, true)};
  for (const auto& g : simple) {
    auto verdicts = bound_audit(LazyChain::build(g, 0.0), g, opt);
    ASSERT_GE(verdicts.size(), 4u);
    for (const auto& v : verdicts) {
      EXPECT_GT(v.checked, 0u) << v.bound;
      EXPECT_EQ(v.violations, 0u) << v.bound << " " << v.example;
    }
  }
  BoundAuditOptions reg = opt;
  reg.exit_bound = true;
  reg.visit_bound = true;
  std::vector<EulerianMultigraph> regular{gen_random_regular(10, 3, 2)};
  std::vector<std::size_t> steps{1, 2};
  regular.push_back(gen_circulant(9, steps));
  for (const auto& g : regular) {
    auto verdicts = bound_audit(LazyChain::build(g, 0.0), g, reg);
    EXPECT_GE(verdicts.size(), 6u);
    for (const auto& v : verdicts) {
      EXPECT_EQ(v.violations, 0u) << v.bound << " " << v.example;
    }
  }
}
