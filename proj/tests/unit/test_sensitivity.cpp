#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "eulerlab/error.hpp"
#include "eulerlab/random.hpp"
#include "eulerlab/sensitivity.hpp"
#include "oracles.hpp"

using namespace eulerlab;

namespace {

double golden() { return static_cast<double>(golden_conjugate()); }

double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return worst;
}

}  // namespace

TEST(ContinuedFraction, Golden) {
  auto cf = cf_expand(golden_conjugate(), 30);
  ASSERT_EQ(cf.a.size(), 31u);
  EXPECT_EQ(cf.a[0], 0);
  for (std::size_t i = 1; i < cf.a.size(); ++i) EXPECT_EQ(cf.a[i], 1) << i;
  EXPECT_NEAR(static_cast<double>(cf.value()), golden(), 1e-12);
  const long double g = golden_conjugate();
  EXPECT_NEAR(static_cast<double>(g - 1.0L / (1.0L + g)), 0.0, 1e-18);
}

TEST(ContinuedFraction, RationalTerminates) {
  auto cf = cf_expand(1.0L / 3.0L, 20);
  EXPECT_EQ(cf.a, (std::vector<std::int64_t>{0, 3}));
  EXPECT_THROW(cf_expand(0.3L, 41), InputError);
}

TEST(ContinuedFraction, GoldenRatioParameter) {
  auto m = gadget_moments(64, golden());
  const double expected = (8.0 * std::sqrt(5.0) - 10.0) / 55.0;
  EXPECT_NEAR(m.ratio, expected, 1e-12);
  auto cf = cf_expand(m.ratio, 25);
  EXPECT_NEAR(static_cast<double>(cf.value()), expected, 1e-9);
  // eventually periodic (quadratic irrational); reference digits from an 80-digit expansion
  const std::vector<std::int64_t> ref{0, 6, 1, 34, 1, 7, 1, 34, 1, 7};
  auto precise = cf_expand((8.0L * std::sqrt(5.0L) - 10.0L) / 55.0L, 9);
  EXPECT_EQ(precise.a, ref);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(cf.a[i], ref[i]);
}

TEST(SequenceGap, Examples) {
  auto half = sequence_gap(0.5L, 2);
  EXPECT_DOUBLE_EQ(half.gap, 0.5);
  auto g = sequence_gap(golden_conjugate(), 10000);
  EXPECT_LE(g.gap, 2.0 / 10000);
  EXPECT_LE(g.max_interval_count, 3u);
  EXPECT_GE(g.max_interval_count, 1u);
  EXPECT_THROW(sequence_gap(0.5L, 0), InputError);
}

TEST(GadgetMoments, ClosedForms) {
  EXPECT_NEAR(gadget_moments(4, 0.5).f_n, 3.6, 1e-12);
  EXPECT_NEAR(antipode_hitting_oracle(4), 3.6, 1e-12);
  for (std::size_t n : {4u, 8u, 16u, 32u, 64u, 128u, 256u}) {
    auto m = gadget_moments(n, 0.5);
    EXPECT_NEAR(m.f_n, antipode_hitting_oracle(n), 1e-9 * m.f_n);
    EXPECT_NEAR(m.mean_t1, 4.0 * m.f_n, 1e-12 * m.f_n);
    EXPECT_NEAR(m.mean_t2, 4.0 * m.f_n, 1e-12 * m.f_n);
  }
  auto gm = gadget_moments(32, golden());
  EXPECT_NEAR(gm.beta, (7.0 + std::sqrt(5.0)) / 2.0, 1e-12);
  EXPECT_THROW(gadget_moments(30, 0.5), InputError);
}

namespace {

double exact_commute(const LazyChain& c, std::size_t n) {
  Eigen::MatrixXd p = c.dense();
  const auto a = static_cast<Eigen::Index>(n / 2);
  return oracle::hitting_to(p, a)(0) + oracle::hitting_to(p, 0)(a);
}

}  // namespace

TEST(GadgetMoments, ClosedFormIsExactForHalfTheSites) {
  // The closed form counts alpha on exactly n/2 sites (n/4, 3n/4].
  for (std::size_t n : {16u, 32u, 64u}) {
    for (double alpha : {0.5, golden(), 0.2}) {
      std::vector<double> h(n, 0.5);
      for (std::size_t i = n / 4 + 1; i <= 3 * n / 4; ++i) h[i] = alpha;
      const double commute = exact_commute(LazyChain::build(gen_biased_cycle(n, 2, 1), h), n);
      EXPECT_NEAR(gadget_moments(n, alpha).mean_t1, commute, 1e-9 * commute);
    }
  }
}

TEST(GadgetMoments, SingleCycleChainMatchesClosedForm) {
  for (std::size_t n : {32u, 64u, 128u}) {
    const double commute = exact_commute(single_cycle_chain({n, golden()}, true), n);
    EXPECT_NEAR(commute, gadget_moments(n, golden()).mean_t1, 1e-9 * commute);
  }
}

TEST(GadgetMoments, ClosedIntervalAddsConstant) {
  // alpha on [n/4, 3n/4] is one site more; the excess over the closed form
  // does not grow with n.
  std::vector<double> excess;
  for (std::size_t n : {32u, 64u, 128u}) {
    std::vector<double> h(n, 0.5);
    for (std::size_t i = n / 4; i <= 3 * n / 4; ++i) h[i] = golden();
    const double commute = exact_commute(LazyChain::build(gen_biased_cycle(n, 2, 1), h), n);
    excess.push_back(commute - gadget_moments(n, golden()).mean_t1);
  }
  EXPECT_GT(excess[0], 0.0);
  EXPECT_NEAR(excess[1], excess[0], 1e-3);
  EXPECT_NEAR(excess[2], excess[0], 1e-3);
  EXPECT_NEAR(exact_commute(single_cycle_chain({32, 0.5}, true), 32), gadget_moments(32, 0.5).mean_t1, 1e-9);
}

TEST(Rounds, EmpiricalCommuteMoments) {
  std::vector<double> var_over_n;
  for (std::size_t n : {32u, 64u, 128u}) {
    GadgetSpec spec{n, golden()};
    LazyChain c = single_cycle_chain(spec, true);
    Rng rng(n);
    const int reps = 10000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < reps; ++i) {
      const double x = static_cast<double>(sample_commute(c, n, rng));
      s += x;
      s2 += x * x;
    }
    const double mean = s / reps;
    const double var = s2 / reps - mean * mean;
    EXPECT_NEAR(mean, exact_commute(c, n), 3.0 * std::sqrt(var / reps));
    var_over_n.push_back(var / static_cast<double>(n));
  }
  const auto [lo, hi] = std::minmax_element(var_over_n.begin(), var_over_n.end());
  EXPECT_LE(*hi / *lo, 2.0);
}

TEST(Rounds, PartialSumsIncrease) {
  auto seq = sample_rounds({32, golden()}, 200, 9);
  ASSERT_EQ(seq.partial_sums.size(), 200u);
  EXPECT_EQ(seq.partial_sums[0], seq.rounds[0].duration);
  for (std::size_t i = 1; i < 200; ++i) EXPECT_GT(seq.partial_sums[i], seq.partial_sums[i - 1]);
  std::size_t left = 0;
  for (const auto& r : seq.rounds) left += r.xi;
  EXPECT_GT(left, 60u);
  EXPECT_LT(left, 140u);
}

TEST(Rounds, CouplingInDistribution) {
  const std::size_t n = 64, rho = 4;
  const int reps = 10000;
  Gadget g = gen_two_cycle_gadget({n, golden()});
  LazyChain chain = gadget_chain(g);
  std::vector<double> full, indep;
  Rng rng(77);
  for (int i = 0; i < reps; ++i) full.push_back(static_cast<double>(gadget_round_times(g, chain, rho, rng).back()));
  for (int i = 0; i < reps; ++i) {
    indep.push_back(static_cast<double>(sample_rounds(g.spec, rho, 1000 + i).partial_sums.back()));
  }
  EXPECT_LE(ks_distance(full, indep), 0.05);
}

TEST(ReturnProfile, StartAndAgreement) {
  GadgetSpec spec{16, golden()};
  auto exact = return_probability_profile(spec, {0, 1, 5, 40, 200}, ProfileSource::exact);
  EXPECT_DOUBLE_EQ(exact[0].p, 1.0);
  Gadget g = gen_two_cycle_gadget(spec);
  Eigen::MatrixXd p = gadget_chain(g).dense();
  Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  std::uint64_t done = 0;
  for (const auto& pt : exact) {
    while (done < pt.t) {
      pw = pw * p;
      ++done;
    }
    EXPECT_NEAR(pt.p, pw(0, 0), 1e-12);
  }
  auto mc = return_probability_profile(spec, {0, 5, 40}, ProfileSource::mc, 20000, 3);
  EXPECT_DOUBLE_EQ(mc[0].p, 1.0);
  for (std::size_t i = 1; i < mc.size(); ++i) {
    const double q = pw.rows() > 0 ? exact[i == 1 ? 2 : 3].p : 0.0;
    EXPECT_NEAR(mc[i].p, q, 4.0 * std::sqrt(q * (1 - q) / 20000) + 1e-3);
  }
}

TEST(ReturnProfile, KilledReturnDecays) {
  const std::size_t n = 32;
  auto killed = killed_return_profile({n, golden()}, 20 * n);
  EXPECT_DOUBLE_EQ(killed[0], 1.0);
  std::vector<double> xs, ys;
  for (std::size_t s = 0; s < killed.size(); ++s) {
    if (killed[s] > 0.0) {
      xs.push_back(static_cast<double>(s));
      ys.push_back(std::log(killed[s]));
    }
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
  EXPECT_LT(sxy / sxx, 0.0);
}

TEST(ReturnProfile, KernelSpreadStable) {
  std::vector<double> spread;
  for (std::size_t n : {32u, 64u}) {
    LazyChain c = gadget_chain(gen_two_cycle_gadget({n, golden()}));
    KernelPowers kp(c);
    spread.push_back(kernel_spread(kp, static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.5))));
  }
  EXPECT_GE(spread[0], 1.0);
  EXPECT_LE(spread[1] / spread[0], 3.0);
  EXPECT_GE(spread[1] / spread[0], 1.0 / 3.0);
}

TEST(LineWalk, DriftSixth) {
  auto r = line_walk_concentration({0.5}, 3600, 20000, 4);
  EXPECT_LE(std::abs(r.k - 600), 2);
  EXPECT_LT(r.expected_tau_k, 3600.0);
  EXPECT_GE(r.coverage, 0.9);
  auto one = line_walk_concentration({0.5}, 1, 1000, 4, 1.0);
  EXPECT_DOUBLE_EQ(one.coverage, 1.0);
}

TEST(LineWalk, PeriodicHolding) {
  auto r = line_walk_concentration({0.5, golden(), 0.5, 0.2}, 5000, 20000, 8);
  EXPECT_GT(r.k, 0);
  EXPECT_GT(r.var_tau_k, 0.0);
  EXPECT_GE(r.coverage, 0.9);
}
