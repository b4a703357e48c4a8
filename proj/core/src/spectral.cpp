#include "eulerlab/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "eulerlab/error.hpp"
#include "eulerlab/mixing.hpp"
#include "eulerlab/parallel.hpp"

namespace eulerlab {

double dirichlet_energy(const LazyChain& c, std::span<const double> f) {
  if (f.size() != c.size()) throw InputError("dirichlet_energy: f has wrong length");
  const auto& pi = c.stationary();
  double total = 0.0;
  for (VertexId v = 0; v < c.size(); ++v) {
    for (const auto& e : c.row(v)) {
      const double d = f[v] - f[e.col];
      total += d * d * pi[v] * e.p;
    }
  }
  return 0.5 * total;
}

double pi_variance(const Distribution& pi, std::span<const double> f) {
  double mean = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) mean += pi[i] * f[i];
  double var = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) var += pi[i] * (f[i] - mean) * (f[i] - mean);
  return var;
}

double pi_norm_squared(const Distribution& pi, std::span<const double> f) {
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) total += pi[i] * f[i] * f[i];
  return total;
}

SetSpectrumSolver::SetSpectrumSolver(const LazyChain& c) : q_(additive_reversibilization(c)) {}

SetSpectrum SetSpectrumSolver::solve(const VertexSet& s) const {
  const std::size_t n = q_.size();
  if (s.empty() || s.size() >= n) throw InputError("lambda_of_set: S must be nonempty and proper");
  std::vector<int> index(n, -1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= n || index[s[i]] != -1) throw InputError("lambda_of_set: bad or repeated vertex");
    index[s[i]] = static_cast<int>(i);
  }
  const auto k = static_cast<Eigen::Index>(s.size());
  const auto& pi = q_.stationary();
  Eigen::MatrixXd qs = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd root(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    root(i) = std::sqrt(pi[s[i]]);
    for (const auto& e : q_.row(s[i])) {
      if (index[e.col] >= 0) qs(i, index[e.col]) += e.p;
    }
  }
  // D^{1/2} Q_S D^{-1/2} is symmetric because Q is pi-reversible.
  Eigen::MatrixXd a = root.asDiagonal() * qs * root.cwiseInverse().asDiagonal();
  a = 0.5 * (a + a.transpose()).eval();
  // Gershgorin: the spectrum of A lies above 2 min diag - 1, so the shift
  // makes the Perron value dominant in absolute value.
  const double shift = std::max(0.0, 1.0 - 2.0 * qs.diagonal().minCoeff());

  Eigen::VectorXd u = Eigen::VectorXd::Constant(k, 1.0 / std::sqrt(static_cast<double>(k)));
  SetSpectrum out;
  double theta = 0.0;
  for (out.iterations = 1;; ++out.iterations) {
    Eigen::VectorXd w = a * u;
    theta = u.dot(w);
    out.residual = (w - theta * u).norm();
    if (out.residual <= tolerance) break;
    if (out.iterations >= max_iterations) {
      throw NumericalError("power iteration did not converge on a set of size " +
                           std::to_string(k) + " (residual " + std::to_string(out.residual) + ")");
    }
    u = (w + shift * u) / (1.0 + shift);
    u.normalize();
  }

  out.subset = s;
  out.rho = theta;
  out.lambda = 1.0 - theta;
  out.pi_mass = 0.0;
  for (VertexId v : s) out.pi_mass += pi[v];

  Eigen::VectorXd nu = u.cwiseAbs().cwiseProduct(root);
  nu /= nu.sum();
  out.nu.assign(nu.data(), nu.data() + k);
  Eigen::VectorXd phi = u.cwiseAbs().cwiseQuotient(root);
  double norm = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) norm += pi[s[i]] * phi(i) * phi(i);
  phi /= std::sqrt(norm);
  out.right.assign(phi.data(), phi.data() + k);

  Eigen::MatrixXd gen = Eigen::MatrixXd::Identity(k, k) - qs;
  Eigen::VectorXd h = gen.partialPivLu().solve(Eigen::VectorXd::Ones(k));
  out.mean_exit_nu = nu.dot(h);
  out.max_exit = h.maxCoeff();
  if (!(out.lambda > 0.0) || std::abs(out.lambda * out.mean_exit_nu - 1.0) > cross_check_tolerance ||
      1.0 / out.lambda > out.max_exit * (1.0 + cross_check_tolerance)) {
    throw NumericalError("set spectrum cross-check failed: lambda = " + std::to_string(out.lambda) +
                         ", 1 / E_nu[exit] = " + std::to_string(1.0 / out.mean_exit_nu));
  }
  return out;
}

SetSpectrum lambda_of_set(const LazyChain& c, const VertexSet& s) {
  return SetSpectrumSolver(c).solve(s);
}

double SpectralProfile::value_at(double r) const {
  double value = std::numeric_limits<double>::infinity();
  for (const auto& b : breakpoints) {
    if (b.r > r) break;
    value = b.value;
  }
  return value;
}

namespace {

bool induced_connected(const LazyChain& q, std::uint32_t mask) {
  const std::uint32_t start = mask & (~mask + 1);
  std::uint32_t seen = start, frontier = start;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) {
      const auto v = static_cast<VertexId>(std::countr_zero(f));
      for (const auto& e : q.row(v)) {
        if (e.p > 0.0) next |= std::uint32_t{1} << e.col;
      }
    }
    frontier = next & mask & ~seen;
    seen |= frontier;
  }
  return seen == mask;
}

}  // namespace

SpectralProfile spectral_profile(const LazyChain& c, ProfileMode mode, unsigned workers) {
  const std::size_t n = c.size();
  if (n < 2) throw InputError("spectral profile needs at least two states");
  if (n > 20) throw InputError("spectral profile enumeration is limited to n <= 20");
  SetSpectrumSolver solver(c);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;

  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    if (mode == ProfileMode::exact || induced_connected(solver.reversibilization(), mask)) {
      masks.push_back(mask);
    }
  }
  std::vector<double> lambda(masks.size()), mass(masks.size());
  parallel_for(
      masks.size(),
      [&](std::size_t i) {
        VertexSet s;
        for (std::uint32_t f = masks[i]; f; f &= f - 1) s.push_back(static_cast<VertexId>(std::countr_zero(f)));
        SetSpectrum spec = solver.solve(s);
        lambda[i] = spec.lambda;
        mass[i] = spec.pi_mass;
      },
      workers);

  std::vector<std::size_t> order(masks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (mass[x] != mass[y]) return mass[x] < mass[y];
    if (lambda[x] != lambda[y]) return lambda[x] < lambda[y];
    return masks[x] < masks[y];
  });

  SpectralProfile profile;
  profile.pi_star = c.pi_min();
  profile.subsets_evaluated = masks.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i : order) {
    if (lambda[i] < best) {
      best = lambda[i];
      ProfileBreakpoint b;
      b.r = mass[i];
      b.value = lambda[i];
      for (std::uint32_t f = masks[i]; f; f &= f - 1) b.witness.push_back(static_cast<VertexId>(std::countr_zero(f)));
      // Several sets of equal mass: keep only the smallest value at that r.
      if (!profile.breakpoints.empty() && profile.breakpoints.back().r == b.r) {
        profile.breakpoints.back() = std::move(b);
      } else {
        profile.breakpoints.push_back(std::move(b));
      }
    }
  }
  return profile;
}

GmtBound gmt_bound(const LazyChain& c, const SpectralProfile& profile, double a) {
  const double delta = c.delta();
  if (!(delta > 0.0)) throw InputError("the uniform mixing bound requires P(x,x) >= delta > 0");
  if (!(a > 0.0)) throw InputError("gmt_bound: a must be positive");
  if (profile.breakpoints.empty()) throw InputError("gmt_bound: empty spectral profile");
  const double lo = 4.0 * profile.pi_star;
  const double hi = 4.0 / a;
  if (!(lo < hi)) throw InputError("gmt_bound: empty integration range");

  GmtBound out;
  const auto& bp = profile.breakpoints;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const double seg_lo = std::max(lo, bp[i].r);
    const double seg_hi = std::min(hi, i + 1 < bp.size() ? bp[i + 1].r
                                                         : std::numeric_limits<double>::infinity());
    if (seg_lo >= seg_hi) continue;
    GmtPiece piece{seg_lo, seg_hi, bp[i].value, std::log(seg_hi / seg_lo) / (delta * bp[i].value)};
    out.integral += piece.contribution;
    out.trace.push_back(piece);
  }
  out.bound_steps = 2 * static_cast<std::uint64_t>(std::ceil(out.integral));
  return out;
}

double short_time_bound(std::uint64_t n, std::uint64_t m, std::uint64_t t, bool regular, double c) {
  if (t == 0) throw InputError("short_time_bound: t must be at least 1");
  const double dn = static_cast<double>(n), dm = static_cast<double>(m), dt = static_cast<double>(t);
  if (regular) return c * dn / std::sqrt(dt);
  return dt <= dn * dn ? c * dm / std::sqrt(dt) : c * dm * dn / dt;
}

double short_time_constant(const LazyChain& c, std::uint64_t n, std::uint64_t m,
                           std::uint64_t t_max, bool regular) {
  const auto dim = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(dim, dim);
  double worst = 0.0;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    p = c.right_multiply(p);
    worst = std::max(worst, worst_relative(p, c.stationary()) / short_time_bound(n, m, t, regular, 1.0));
  }
  return worst;
}

}  // namespace eulerlab
