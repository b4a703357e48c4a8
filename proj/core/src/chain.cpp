#include "eulerlab/chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "eulerlab/error.hpp"

namespace eulerlab {

namespace {

constexpr double kRowTolerance = 1e-12;
constexpr double kStationaryTolerance = 1e-12;
constexpr std::uint64_t kRenormalizeEvery = 10000;

double stationarity_residual(const LazyChain& c, const Distribution& pi) {
  Distribution next = c.step(pi);
  double worst = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) worst = std::max(worst, std::abs(next[i] - pi[i]));
  return worst;
}

}  // namespace

Distribution point_mass(std::size_t n, VertexId v) {
  if (v >= n) throw InputError("point mass vertex out of range");
  Distribution mu(n, 0.0);
  mu[v] = 1.0;
  return mu;
}

LazyChain LazyChain::build(const EulerianMultigraph& g, double holding) {
  std::vector<double> a(g.vertex_count(), holding);
  return build(g, a);
}

LazyChain LazyChain::build(const EulerianMultigraph& g, std::span<const double> holding) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw InputError("chain needs at least one vertex");
  if (holding.size() != n) throw InputError("holding vector length does not match vertex count");

  LazyChain c;
  c.pi_.assign(n, 0.0);
  c.row_ptr_.assign(1, 0);
  double total = 0.0;
  for (VertexId v = 0; v < n; ++v) {
    const double a = holding[v];
    if (!(a >= 0.0 && a < 1.0)) {
      throw InputError("holding at vertex " + std::to_string(v) + " must lie in [0, 1)");
    }
    const double deg = g.out_degree(v);
    if (deg == 0) throw InputError("vertex " + std::to_string(v) + " has no out-arcs");
    c.entries_.push_back({v, a});
    for (const Arc& arc : g.out_arcs(v)) {
      c.entries_.push_back({arc.target, (1.0 - a) * arc.multiplicity / deg});
    }
    c.row_ptr_.push_back(c.entries_.size());
    c.pi_[v] = deg / (1.0 - a);
    total += c.pi_[v];
  }
  for (double& p : c.pi_) p /= total;
  c.finalize();

  const double residual = stationarity_residual(c, c.pi_);
  if (residual > kStationaryTolerance) {
    throw InputError("closed-form stationary vector fails (residual " + std::to_string(residual) +
                     "); graph is not Eulerian");
  }
  return c;
}

LazyChain LazyChain::from_kernel(std::vector<std::vector<KernelEntry>> rows, Distribution pi) {
  const std::size_t n = rows.size();
  if (n == 0 || pi.size() != n) throw InputError("kernel and stationary vector sizes disagree");
  LazyChain c;
  c.row_ptr_.assign(1, 0);
  for (auto& r : rows) {
    for (const auto& e : r) {
      if (e.col >= n) throw InputError("kernel column out of range");
      if (!(e.p >= 0.0)) throw NumericalError("kernel has a negative or NaN entry");
      c.entries_.push_back(e);
    }
    c.row_ptr_.push_back(c.entries_.size());
  }
  double mass = 0.0;
  for (double p : pi) {
    if (!(p > 0.0)) throw NumericalError("stationary vector must be strictly positive");
    mass += p;
  }
  if (std::abs(mass - 1.0) > kStationaryTolerance) {
    throw NumericalError("stationary vector does not sum to 1");
  }
  c.pi_ = std::move(pi);
  c.finalize();
  const double residual = stationarity_residual(c, c.pi_);
  if (residual > kStationaryTolerance) {
    throw NumericalError("pi P != pi (residual " + std::to_string(residual) + ")");
  }
  return c;
}

void LazyChain::finalize() {
  const std::size_t n = row_ptr_.size() - 1;
  std::vector<KernelEntry> merged;
  std::vector<std::size_t> ptr{0};
  merged.reserve(entries_.size());
  delta_ = 1.0;
  for (std::size_t v = 0; v < n; ++v) {
    auto first = entries_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[v]);
    auto last = entries_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[v + 1]);
    std::sort(first, last, [](const KernelEntry& a, const KernelEntry& b) { return a.col < b.col; });
    const std::size_t row_start = merged.size();
    double sum = 0.0, diag = 0.0;
    for (auto it = first; it != last; ++it) {
      if (merged.size() > row_start && merged.back().col == it->col) {
        merged.back().p += it->p;
      } else {
        merged.push_back(*it);
      }
      sum += it->p;
      if (it->col == v) diag += it->p;
    }
    // Zero entries carry no transitions; keep the diagonal even when zero so
    // that holding lookups stay uniform.
    merged.erase(std::remove_if(merged.begin() + static_cast<std::ptrdiff_t>(row_start), merged.end(),
                                [v](const KernelEntry& e) { return e.p == 0.0 && e.col != v; }),
                 merged.end());
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw NumericalError("row " + std::to_string(v) + " sums to " + std::to_string(sum));
    }
    delta_ = std::min(delta_, diag);
    ptr.push_back(merged.size());
  }
  entries_ = std::move(merged);
  row_ptr_ = std::move(ptr);
  cumulative_.resize(entries_.size());
  for (std::size_t v = 0; v < n; ++v) {
    double run = 0.0;
    for (std::size_t i = row_ptr_[v]; i < row_ptr_[v + 1]; ++i) {
      run += entries_[i].p;
      cumulative_[i] = run;
    }
  }
}

double LazyChain::prob(VertexId u, VertexId v) const {
  for (const auto& e : row(u)) {
    if (e.col == v) return e.p;
  }
  return 0.0;
}

double LazyChain::pi_min() const { return *std::min_element(pi_.begin(), pi_.end()); }

Eigen::MatrixXd LazyChain::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (VertexId v = 0; v < size(); ++v) {
    for (const auto& e : row(v)) p(v, e.col) += e.p;
  }
  return p;
}

Distribution LazyChain::step(const Distribution& mu) const {
  if (mu.size() != size()) throw InputError("distribution length does not match chain size");
  Distribution next(size(), 0.0);
  for (VertexId v = 0; v < size(); ++v) {
    const double mass = mu[v];
    if (mass == 0.0) continue;
    for (const auto& e : row(v)) next[e.col] += mass * e.p;
  }
  return next;
}

Distribution LazyChain::evolve(Distribution mu, std::uint64_t t, EvolveStats* stats) const {
  if (mu.size() != size()) throw InputError("distribution length does not match chain size");
  Distribution next(size());
  for (std::uint64_t s = 1; s <= t; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (VertexId v = 0; v < size(); ++v) {
      const double mass = mu[v];
      if (mass == 0.0) continue;
      for (const auto& e : row(v)) next[e.col] += mass * e.p;
    }
    mu.swap(next);
    if (s % kRenormalizeEvery == 0) {
      double total = 0.0;
      for (double x : mu) total += x;
      if (stats) {
        ++stats->renormalizations;
        stats->max_drift = std::max(stats->max_drift, std::abs(total - 1.0));
      }
      for (double& x : mu) x /= total;
    }
  }
  return mu;
}

Eigen::MatrixXd LazyChain::right_multiply(const Eigen::MatrixXd& m) const {
  if (static_cast<std::size_t>(m.cols()) != size()) throw InputError("matrix width mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (VertexId v = 0; v < size(); ++v) {
    for (const auto& e : row(v)) out.col(e.col) += e.p * m.col(v);
  }
  return out;
}

VertexId LazyChain::sample_step(VertexId v, Rng& rng) const {
  const double u = rng.uniform();
  const std::size_t first = row_ptr_[v], last = row_ptr_[v + 1];
  for (std::size_t i = first; i + 1 < last; ++i) {
    if (u < cumulative_[i]) return entries_[i].col;
  }
  return entries_[last - 1].col;
}

void LazyChain::dump_csv(std::ostream& out) const {
  out << "row,col,p\n";
  char buf[64];
  for (VertexId v = 0; v < size(); ++v) {
    for (const auto& e : row(v)) {
      if (e.p == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", e.p);
      out << v << ',' << e.col << ',' << buf << '\n';
    }
  }
}

LazyChain time_reversal(const LazyChain& c) {
  const auto& pi = c.stationary();
  std::vector<std::vector<KernelEntry>> rows(c.size());
  for (VertexId u = 0; u < c.size(); ++u) {
    for (const auto& e : c.row(u)) rows[e.col].push_back({u, pi[u] * e.p / pi[e.col]});
  }
  return LazyChain::from_kernel(std::move(rows), pi);
}

LazyChain additive_reversibilization(const LazyChain& c) {
  const auto& pi = c.stationary();
  std::vector<std::vector<KernelEntry>> rows(c.size());
  for (VertexId u = 0; u < c.size(); ++u) {
    for (const auto& e : c.row(u)) {
      rows[u].push_back({e.col, 0.5 * e.p});
      rows[e.col].push_back({u, 0.5 * pi[u] * e.p / pi[e.col]});
    }
  }
  return LazyChain::from_kernel(std::move(rows), pi);
}

Distribution stationary_by_solve(const LazyChain& c) {
  const auto n = static_cast<Eigen::Index>(c.size());
  // Rows of (I - P)^T with the last equation replaced by normalization.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - c.dense().transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd x = a.fullPivLu().solve(b);
  return Distribution(x.data(), x.data() + n);
}

WalkPath sample_path(const LazyChain& c, VertexId start, std::uint64_t t, std::uint64_t seed) {
  if (start >= c.size()) throw InputError("start vertex out of range");
  WalkPath path;
  path.seed = seed;
  path.states.reserve(t + 1);
  path.states.push_back(start);
  Rng rng(seed);
  VertexId x = start;
  for (std::uint64_t s = 0; s < t; ++s) {
    x = c.sample_step(x, rng);
    path.states.push_back(x);
  }
  return path;
}

}  // namespace eulerlab
