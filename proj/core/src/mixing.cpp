#include "eulerlab/mixing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "eulerlab/error.hpp"

namespace eulerlab {

namespace {
constexpr double kRoundoff = 1e-13;
}

double tv_distance(const Distribution& mu, const Distribution& nu) {
  if (mu.size() != nu.size()) throw InputError("tv_distance: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) total += std::abs(mu[i] - nu[i]);
  return 0.5 * total;
}

double worst_tv(const Eigen::MatrixXd& m, const Distribution& pi) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    double total = 0.0;
    for (Eigen::Index y = 0; y < m.cols(); ++y) total += std::abs(m(x, y) - pi[y]);
    worst = std::max(worst, 0.5 * total);
  }
  return worst;
}

double worst_relative(const Eigen::MatrixXd& m, const Distribution& pi) {
  double worst = 0.0;
  for (Eigen::Index y = 0; y < m.cols(); ++y) {
    const double inv = 1.0 / pi[y];
    for (Eigen::Index x = 0; x < m.rows(); ++x) worst = std::max(worst, std::abs(m(x, y) * inv - 1.0));
  }
  return worst;
}

double worst_row_pair_tv(const Eigen::MatrixXd& m) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    for (Eigen::Index z = x + 1; z < m.rows(); ++z) {
      worst = std::max(worst, 0.5 * (m.row(x) - m.row(z)).cwiseAbs().sum());
    }
  }
  return worst;
}

double distance(const Eigen::MatrixXd& m, const Distribution& pi, Metric metric) {
  return metric == Metric::tv ? worst_tv(m, pi) : worst_relative(m, pi);
}

KernelPowers::KernelPowers(const LazyChain& c) : chain_(&c) {}

const Eigen::MatrixXd& KernelPowers::power_of_two(unsigned j) {
  if (powers_.empty()) powers_.push_back(chain_->dense());
  while (powers_.size() <= j) {
    const Eigen::MatrixXd& last = powers_.back();
    Eigen::MatrixXd sq = last * last;
    powers_.push_back(std::move(sq));
  }
  return powers_[j];
}

Eigen::MatrixXd KernelPowers::power(std::uint64_t t) {
  const auto n = static_cast<Eigen::Index>(chain_->size());
  return advance(Eigen::MatrixXd::Identity(n, n), t);
}

Eigen::MatrixXd KernelPowers::advance(Eigen::MatrixXd m, std::uint64_t dt) {
  const double n = static_cast<double>(chain_->size());
  const double sparse_step_cost = static_cast<double>(m.rows()) * chain_->nonzeros();
  const double dense_cost = static_cast<double>(m.rows()) * n * n;
  while (dt > 0) {
    if (static_cast<double>(dt) * sparse_step_cost <= dense_cost) {
      for (; dt > 0; --dt) m = chain_->right_multiply(m);
      break;
    }
    const unsigned j = static_cast<unsigned>(std::bit_width(dt) - 1);
    m = m * power_of_two(j);
    dt -= std::uint64_t{1} << j;
  }
  return m;
}

DistanceProfile distance_profile(const LazyChain& c, const std::vector<std::uint64_t>& times,
                                 bool with_dbar) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1]) throw InputError("distance_profile: times must be strictly increasing");
  }
  KernelPowers powers(c);
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  std::uint64_t now = 0;
  DistanceProfile profile;
  profile.times = times;
  for (std::uint64_t t : times) {
    m = powers.advance(std::move(m), t - now);
    now = t;
    profile.d1.push_back(worst_tv(m, c.stationary()));
    profile.dinf.push_back(worst_relative(m, c.stationary()));
    if (with_dbar) profile.dbar.push_back(worst_row_pair_tv(m));
  }
  return profile;
}

ThresholdResult threshold_time(KernelPowers& powers, Metric metric, double epsilon,
                               std::uint64_t cap) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  const LazyChain& c = powers.chain();
  const auto& pi = c.stationary();
  const std::uint64_t n = c.size();
  if (cap == 0) cap = 64 * n * n * n;
  ThresholdResult result;
  result.cap = cap;

  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(dim, dim);
  const double d0 = distance(identity, pi, metric);
  if (d0 <= epsilon) {
    result.time = 0;
    result.value_at_time = d0;
    return result;
  }

  // Find the first power of two at which the target is met.
  unsigned top = 0;
  double d_top = 0.0;
  for (;; ++top) {
    const std::uint64_t t = std::uint64_t{1} << top;
    d_top = distance(powers.power_of_two(top), pi, metric);
    if (d_top <= epsilon) break;
    if (t >= cap) {
      result.value_at_time = d_top;
      return result;
    }
  }

  // Invariant: d(below) > epsilon and d(below + 2^(j+1)) <= epsilon.
  std::uint64_t below = 0;
  Eigen::MatrixXd m_below = identity;
  for (unsigned j = top; j-- > 0;) {
    Eigen::MatrixXd candidate = m_below * powers.power_of_two(j);
    if (distance(candidate, pi, metric) > epsilon) {
      below += std::uint64_t{1} << j;
      m_below = std::move(candidate);
    }
  }
  const std::uint64_t answer = below + 1;
  if (answer > cap) {
    result.value_at_time = distance(m_below, pi, metric);
    return result;
  }
  result.time = answer;
  result.value_at_time = distance(c.right_multiply(m_below), pi, metric);
  return result;
}

ThresholdResult threshold_time(const LazyChain& c, Metric metric, double epsilon,
                               std::uint64_t cap) {
  KernelPowers powers(c);
  return threshold_time(powers, metric, epsilon, cap);
}

ThresholdReport mixing_thresholds(const LazyChain& c, double epsilon, std::uint64_t cap) {
  KernelPowers powers(c);
  ThresholdReport report;
  report.epsilon = epsilon;
  report.t_mix = threshold_time(powers, Metric::tv, epsilon, cap);
  report.t_unif = threshold_time(powers, Metric::linf, epsilon, cap);
  return report;
}

SubmultiplicativityCheck submultiplicativity_audit(KernelPowers& powers, std::uint64_t s,
                                                   std::uint64_t t) {
  const auto& pi = powers.chain().stationary();
  Eigen::MatrixXd ps = powers.power(s);
  Eigen::MatrixXd pt = powers.power(t);
  Eigen::MatrixXd pst = ps * pt;
  SubmultiplicativityCheck check;
  check.s = s;
  check.t = t;
  check.lhs = worst_relative(pst, pi);
  const double dinf_s = worst_relative(ps, pi);
  const double d1_t = worst_tv(pt, pi);
  check.rhs = dinf_s * 2.0 * d1_t;
  check.tv_rhs = dinf_s * d1_t;
  // Exact equality cases (e.g. already mixed) must not fail on the last ulp.
  check.holds = check.lhs <= check.rhs + kRoundoff;
  check.tv_holds = check.lhs <= check.tv_rhs + kRoundoff;
  return check;
}

}  // namespace eulerlab
