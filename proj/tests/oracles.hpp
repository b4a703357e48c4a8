#pragma once

// Independent reference computations used to freeze expected values. Nothing
// here calls into the library beyond plain graph accessors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "eulerlab/graph.hpp"

namespace oracle {

using eulerlab::EulerianMultigraph;
using eulerlab::VertexId;

inline Eigen::MatrixXd kernel(const EulerianMultigraph& g, const std::vector<double>& a) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edge_groups()) {
    p(e.source, e.target) += (1.0 - a[e.source]) * e.multiplicity / g.out_degree(e.source);
  }
  for (Eigen::Index v = 0; v < n; ++v) p(v, v) += a[static_cast<std::size_t>(v)];
  return p;
}

inline Eigen::MatrixXd kernel(const EulerianMultigraph& g, double a) {
  return kernel(g, std::vector<double>(g.vertex_count(), a));
}

// Left null vector of I - P by dense solve.
inline Eigen::VectorXd stationary(const Eigen::MatrixXd& p) {
  const auto n = p.rows();
  Eigen::MatrixXd a = (Eigen::MatrixXd::Identity(n, n) - p).transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  return a.colPivHouseholderQr().solve(b);
}

inline double d1(const Eigen::MatrixXd& m, const Eigen::VectorXd& pi) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    worst = std::max(worst, 0.5 * (m.row(x).transpose() - pi).cwiseAbs().sum());
  }
  return worst;
}

inline double dinf(const Eigen::MatrixXd& m, const Eigen::VectorXd& pi) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    for (Eigen::Index y = 0; y < m.cols(); ++y) worst = std::max(worst, std::abs(m(x, y) / pi(y) - 1.0));
  }
  return worst;
}

// First t with metric <= eps by stepping P^t forward one product at a time.
inline std::uint64_t forward_threshold(const Eigen::MatrixXd& p, double eps, bool relative,
                                       std::uint64_t cap = 1'000'000) {
  const Eigen::VectorXd pi = stationary(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  for (std::uint64_t t = 0; t <= cap; ++t) {
    if ((relative ? dinf(m, pi) : d1(m, pi)) <= eps) return t;
    m = m * p;
  }
  return UINT64_MAX;
}

// E_u[tau_v] for all u via the linear system off v.
inline Eigen::VectorXd hitting_to(const Eigen::MatrixXd& p, Eigen::Index v) {
  const auto n = p.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - p;
  Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  a.row(v).setZero();
  a(v, v) = 1.0;
  b(v) = 0.0;
  return a.fullPivLu().solve(b);
}

// E_u[tau_v] as sum_{t >= 0} P_u(tau_v > t), accumulated by evolving the
// killed walk until the surviving mass is below `tail`.
inline double hitting_by_enumeration(const Eigen::MatrixXd& p, Eigen::Index u, Eigen::Index v,
                                     double tail = 1e-13) {
  Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(p.rows());
  mu(u) = 1.0;
  double total = 0.0;
  for (int t = 0; t < 10'000'000; ++t) {
    mu(v) = 0.0;
    const double alive = mu.sum();
    if (alive < tail) break;
    total += alive;
    mu = mu * p;
  }
  return total;
}

// Quasi-stationary data of Q restricted to S by a full symmetric eigensolve.
struct SetOracle {
  double lambda;
  double pi_mass;
};

inline SetOracle set_spectrum(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi,
                              const std::vector<VertexId>& s) {
  const auto n = p.rows();
  Eigen::MatrixXd phat(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) phat(x, y) = pi(y) * p(y, x) / pi(x);
  }
  Eigen::MatrixXd q = 0.5 * (p + phat);
  const auto k = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd a(k, k);
  double mass = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    mass += pi(s[i]);
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = std::sqrt(pi(s[i])) * q(s[i], s[j]) / std::sqrt(pi(s[j]));
  }
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  return {1.0 - es.eigenvalues().maxCoeff(), mass};
}

// Direct check of the window definition of good vertices.
inline std::vector<VertexId> good(const std::vector<VertexId>& order, const std::vector<char>& visited) {
  const std::size_t n = order.size();
  std::vector<VertexId> out;
  for (std::size_t j = 0; j < n; ++j) {
    if (visited[order[j]]) continue;
    bool ok = true;
    for (std::size_t len = 1; len <= n; ++len) {
      double hits = 0;
      for (std::size_t i = 0; i < len; ++i) hits += visited[order[(j + i) % n]];
      if (hits > len / 2.0) ok = false;
    }
    if (ok) out.push_back(order[j]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
