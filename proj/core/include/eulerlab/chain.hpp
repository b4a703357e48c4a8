#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eulerlab/graph.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

// Probability mass over vertices 0..n-1.
using Distribution = std::vector<double>;

Distribution point_mass(std::size_t n, VertexId v);

struct KernelEntry {
  VertexId col;
  double p;
};

struct EvolveStats {
  std::uint64_t renormalizations = 0;
  double max_drift = 0.0;  // largest |mass - 1| seen before a renormalization
};

// Row-stochastic kernel stored as compressed rows, with its stationary
// distribution. Immutable once built.
class LazyChain {
 public:
  LazyChain() = default;

  // P(v,v) = a(v), P(v,w) = (1 - a(v)) mult(v,w) / outdeg(v); any self-loop
  // arcs add to the diagonal. pi is the closed form outdeg / (1 - a),
  // normalized, then checked against piP = pi.
  static LazyChain build(const EulerianMultigraph& g, double holding);
  static LazyChain build(const EulerianMultigraph& g, std::span<const double> holding);

  // Kernel given row by row. Rows are validated (sum 1 within 1e-12) and pi
  // must satisfy piP = pi within 1e-12.
  static LazyChain from_kernel(std::vector<std::vector<KernelEntry>> rows, Distribution pi);

  std::size_t size() const { return pi_.size(); }
  std::span<const KernelEntry> row(VertexId v) const {
    return {entries_.data() + row_ptr_[v], entries_.data() + row_ptr_[v + 1]};
  }
  std::size_t nonzeros() const { return entries_.size(); }
  double prob(VertexId u, VertexId v) const;
  const Distribution& stationary() const { return pi_; }
  double pi_min() const;
  // min_x P(x,x)
  double delta() const { return delta_; }
  double holding(VertexId v) const { return prob(v, v); }

  Eigen::MatrixXd dense() const;

  // mu P
  Distribution step(const Distribution& mu) const;
  // mu P^t by t sparse products. Mass is renormalized every 10^4 steps.
  Distribution evolve(Distribution mu, std::uint64_t t, EvolveStats* stats = nullptr) const;
  // M P for a dense row-block M (each row a distribution).
  Eigen::MatrixXd right_multiply(const Eigen::MatrixXd& m) const;

  VertexId sample_step(VertexId v, Rng& rng) const;

  void dump_csv(std::ostream& out) const;

 private:
  void finalize();

  std::vector<std::size_t> row_ptr_{0};
  std::vector<KernelEntry> entries_;
  std::vector<double> cumulative_;  // per-entry running row sums for sampling
  Distribution pi_;
  double delta_ = 0.0;
};

// pi(v) Phat(v,u) = pi(u) P(u,v)
LazyChain time_reversal(const LazyChain& c);
// Q = (P + Phat) / 2
LazyChain additive_reversibilization(const LazyChain& c);

// Stationary vector by a dense solve of pi (I - P) = 0, sum pi = 1.
Distribution stationary_by_solve(const LazyChain& c);

struct WalkPath {
  std::vector<VertexId> states;
  std::uint64_t seed = 0;
};

WalkPath sample_path(const LazyChain& c, VertexId start, std::uint64_t t, std::uint64_t seed);

}  // namespace eulerlab
