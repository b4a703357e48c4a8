#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "eulerlab/chain.hpp"
#include "eulerlab/error.hpp"
#include "eulerlab/sensitivity.hpp"
#include "oracles.hpp"

using namespace eulerlab;

namespace {

void expect_kernel_eq(const LazyChain& a, const LazyChain& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LE((a.dense() - b.dense()).cwiseAbs().maxCoeff(), tol);
}

double row_sum_error(const LazyChain& c) {
  Eigen::MatrixXd p = c.dense();
  return (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

std::vector<LazyChain> sample_chains() {
  std::vector<LazyChain> out;
  out.push_back(LazyChain::build(gen_directed_cycle(3), 0.5));
  out.push_back(LazyChain::build(gen_biased_cycle(7, 2, 1), 0.5));
  for (std::uint64_t s = 0; s < 6; ++s) out.push_back(LazyChain::build(gen_random_eulerian(9, 25, s), 0.3));
  Gadget g = gen_two_cycle_gadget({8, static_cast<double>(golden_conjugate())});
  out.push_back(LazyChain::build(g.graph, g.holding));
  return out;
}

}  // namespace

TEST(Chain, LazyTriangle) {
  LazyChain c = LazyChain::build(gen_directed_cycle(3), 0.5);
  EXPECT_DOUBLE_EQ(c.prob(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(c.prob(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(c.prob(0, 2), 0.0);
  for (double p : c.stationary()) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(c.delta(), 0.5);
}

TEST(Chain, BiasedCycleProbabilities) {
  LazyChain c = LazyChain::build(gen_biased_cycle(8, 2, 1), 0.5);
  EXPECT_NEAR(c.prob(3, 4), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.prob(3, 2), 1.0 / 6.0, 1e-15);
}

TEST(Chain, GadgetStationaryMatchesSolve) {
  Gadget g = gen_two_cycle_gadget({8, static_cast<double>(golden_conjugate())});
  LazyChain c = LazyChain::build(g.graph, g.holding);
  Eigen::VectorXd oracle_pi = oracle::stationary(oracle::kernel(g.graph, g.holding));
  for (VertexId v = 0; v < c.size(); ++v) EXPECT_NEAR(c.stationary()[v], oracle_pi(v), 1e-13);
  // vertex 0 has twice the out-degree of a plain site with holding 1/2
  EXPECT_NEAR(c.stationary()[0] / c.stationary()[g.right(1)], 2.0, 1e-12);
  Distribution solved = stationary_by_solve(c);
  for (VertexId v = 0; v < c.size(); ++v) EXPECT_NEAR(solved[v], c.stationary()[v], 1e-13);
}

TEST(Chain, RejectsBadHolding) {
  EXPECT_THROW(LazyChain::build(gen_directed_cycle(3), 1.0), InputError);
  EXPECT_THROW(LazyChain::build(gen_directed_cycle(3), -0.1), InputError);
  std::vector<EdgeGroup> e{{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {0, 2, 1}};
  EXPECT_THROW(LazyChain::build(EulerianMultigraph(3, e), 0.5), InputError);
}

TEST(Chain, FromKernelValidatesRows) {
  std::vector<std::vector<KernelEntry>> rows{{{0, 0.5}, {1, 0.4}}, {{0, 0.5}, {1, 0.5}}};
  EXPECT_THROW(LazyChain::from_kernel(rows, {0.5, 0.5}), NumericalError);
  std::vector<std::vector<KernelEntry>> ok{{{0, 0.5}, {1, 0.5}}, {{0, 0.5}, {1, 0.5}}};
  EXPECT_NO_THROW(LazyChain::from_kernel(ok, {0.5, 0.5}));
  EXPECT_THROW(LazyChain::from_kernel(ok, {0.6, 0.4}), NumericalError);
}

TEST(Chain, StationaryPropertiesOnSamples) {
  for (const LazyChain& c : sample_chains()) {
    EXPECT_LE(row_sum_error(c), 1e-12);
    LazyChain r = time_reversal(c);
    LazyChain q = additive_reversibilization(c);
    EXPECT_LE(row_sum_error(r), 1e-12);
    EXPECT_LE(row_sum_error(q), 1e-12);
    const auto& pi = c.stationary();
    Eigen::MatrixXd p = c.dense(), ph = r.dense(), qd = q.dense();
    for (VertexId x = 0; x < c.size(); ++x) {
      EXPECT_GE(c.prob(x, x), c.delta());
      for (VertexId y = 0; y < c.size(); ++y) {
        EXPECT_NEAR(pi[x] * ph(x, y), pi[y] * p(y, x), 1e-12);
        EXPECT_NEAR(pi[x] * qd(x, y), pi[y] * qd(y, x), 1e-12);
        EXPECT_NEAR(qd(x, y), 0.5 * (p(x, y) + ph(x, y)), 1e-12);
      }
      EXPECT_NEAR(qd(x, x), p(x, x), 1e-15);
    }
    for (const LazyChain* k : std::initializer_list<const LazyChain*>{&c, &r, &q}) {
      Distribution next = k->step(pi);
      for (VertexId x = 0; x < c.size(); ++x) EXPECT_NEAR(next[x], pi[x], 1e-12);
    }
  }
}

TEST(Chain, ConstantHoldingStationaryProportionalToDegree) {
  auto g = gen_random_eulerian(10, 31, 3);
  LazyChain c = LazyChain::build(g, 0.5);
  const double m = static_cast<double>(g.edge_count());
  for (VertexId v = 0; v < 10; ++v) EXPECT_NEAR(c.stationary()[v], g.out_degree(v) / m, 1e-15);
  LazyChain r = LazyChain::build(gen_random_regular(12, 3, 2), 0.5);
  for (double p : r.stationary()) EXPECT_NEAR(p, 1.0 / 12.0, 1e-15);
}

TEST(Chain, ReversalOfTriangleAndReversibleChains) {
  LazyChain c = LazyChain::build(gen_directed_cycle(3), 0.5);
  LazyChain r = time_reversal(c);
  EXPECT_NEAR(r.prob(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(r.prob(0, 1), 0.0, 1e-15);
  LazyChain q = additive_reversibilization(c);
  EXPECT_NEAR(q.prob(0, 1), 0.25, 1e-15);
  EXPECT_NEAR(q.prob(0, 2), 0.25, 1e-15);

  LazyChain sym = LazyChain::build(gen_biased_cycle(6, 1, 1), 0.5);
  expect_kernel_eq(time_reversal(sym), sym, 1e-15);
  expect_kernel_eq(additive_reversibilization(sym), sym, 1e-15);
}

TEST(Chain, GadgetReversalEqualsReversedGraph) {
  Gadget g = gen_two_cycle_gadget({8, static_cast<double>(golden_conjugate())});
  LazyChain c = LazyChain::build(g.graph, g.holding);
  expect_kernel_eq(time_reversal(c), LazyChain::build(reverse(g.graph), g.holding), 1e-12);
}

TEST(Chain, GadgetHalfEqualsConstantHolding) {
  Gadget g = gen_two_cycle_gadget({16, 0.5});
  expect_kernel_eq(LazyChain::build(g.graph, g.holding), LazyChain::build(g.graph, 0.5), 0.0);
}

TEST(Chain, EvolveBasics) {
  LazyChain c = LazyChain::build(gen_biased_cycle(7, 2, 1), 0.5);
  Distribution mu = point_mass(7, 2);
  EXPECT_EQ(c.evolve(mu, 0), mu);
  Distribution one = c.evolve(mu, 1);
  for (VertexId v = 0; v < 7; ++v) EXPECT_DOUBLE_EQ(one[v], c.prob(2, v));
  Distribution a = c.evolve(c.evolve(mu, 37), 55);
  Distribution b = c.evolve(mu, 92);
  for (VertexId v = 0; v < 7; ++v) EXPECT_NEAR(a[v], b[v], 1e-10);
}

TEST(Chain, EvolveLongRunPreservesMass) {
  LazyChain c = LazyChain::build(gen_random_eulerian(12, 40, 9), 0.5);
  EvolveStats stats;
  Distribution mu = c.evolve(point_mass(12, 0), 200000, &stats);
  double total = 0.0;
  for (double x : mu) total += x;
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_EQ(stats.renormalizations, 20u);
  EXPECT_LT(stats.max_drift, 1e-10);
}

TEST(Chain, SamplePath) {
  LazyChain c = LazyChain::build(gen_directed_cycle(3), 0.5);
  EXPECT_EQ(sample_path(c, 1, 0, 4).states, std::vector<VertexId>{1});
  WalkPath p = sample_path(c, 0, 1'000'000, 17);
  EXPECT_EQ(p.states, sample_path(c, 0, 1'000'000, 17).states);
  std::uint64_t holds = 0;
  std::vector<char> seen(3, 0);
  for (std::size_t i = 1; i < p.states.size(); ++i) {
    const VertexId a = p.states[i - 1], b = p.states[i];
    seen[b] = 1;
    EXPECT_TRUE(b == a || b == (a + 1) % 3);
    holds += (a == b);
  }
  EXPECT_EQ(seen, std::vector<char>(3, 1));
  const double frac = static_cast<double>(holds) / 1e6;
  EXPECT_NEAR(frac, 0.5, 3.0 * std::sqrt(0.25 / 1e6));
}

TEST(Chain, DumpCsv) {
  LazyChain c = LazyChain::build(gen_directed_cycle(3), 0.5);
  std::ostringstream out;
  c.dump_csv(out);
  EXPECT_EQ(out.str(), "row,col,p\n0,0,0.5\n0,1,0.5\n1,1,0.5\n1,2,0.5\n2,0,0.5\n2,2,0.5\n");
}
