#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eulerlab/chain.hpp"
#include "eulerlab/graph.hpp"
#include "eulerlab/spectral.hpp"

namespace eulerlab {

// H(u, v) = E_u[tau_v], zero on the diagonal. Computed from the fundamental
// matrix Z = (I - P + 1 pi)^{-1} as (Z(v,v) - Z(u,v)) / pi(v); the first-step
// equations are checked to 1e-9 and NumericalError is thrown otherwise.
Eigen::MatrixXd hitting_times(const LazyChain& c);

// E_u[tau_v] for all u, by solving (I - P) h = 1 off v.
std::vector<double> hitting_times_to(const LazyChain& c, VertexId v);

// Largest |H(u,v) - 1 - sum_w P(u,w) H(w,v)| over u != v.
double first_step_residual(const LazyChain& c, const Eigen::MatrixXd& h);

double commute_time(const LazyChain& c, VertexId u, VertexId v);
double commute_time(const Eigen::MatrixXd& h, VertexId u, VertexId v);

// E_v[first time outside S] for every v in S (indexed like s).
std::vector<double> exit_times(const LazyChain& c, const VertexSet& s);
double exit_time(const LazyChain& c, const VertexSet& s, VertexId start);
// E_v[number of visits to v before leaving S], counting time 0.
double visits_before_exit(const LazyChain& c, const VertexSet& s, VertexId v);

// Deterministic target position u_t.
class Trajectory {
 public:
  static Trajectory fixed(VertexId v);
  // u_t = (t / dwell) mod n
  static Trajectory sweep(std::size_t n, std::uint64_t dwell = 1);
  // Starts at the vertex farthest (undirected) from `walker_start` and then
  // steps through vertex ids in increasing order, dwelling 2 steps on each.
  static Trajectory antipodal_sweep(const EulerianMultigraph& g, VertexId walker_start);
  // u_t = table[t] for t < size, then the last entry.
  static Trajectory from_table(std::vector<VertexId> table);

  VertexId at(std::uint64_t t) const { return rule_(t); }
  const std::string& name() const { return name_; }

 private:
  std::function<VertexId(std::uint64_t)> rule_;
  std::string name_;
};

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
};

struct CollisionEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;
  double truncated_fraction = 0.0;
  bool flagged = false;  // more than 10% of replicas hit the horizon
  // Mean of Z = sum_{s < z_window} 1(X_s = u_s) / pi(u_s); zero when z_window is 0.
  double mean_z = 0.0;
};

// tau_col = inf{t >= 0 : X_t = u_t}, truncated at the horizon (truncated
// replicas contribute the horizon). horizon = 0 means 100 m n with m the
// number of kernel nonzeros off the diagonal.
CollisionEstimate moving_target_collision(const LazyChain& c, VertexId start, const Trajectory& traj,
                                          std::uint64_t replicas, std::uint64_t horizon,
                                          std::uint64_t seed, std::uint64_t z_window = 0,
                                          unsigned workers = 0);

// E_v N_v(t) with N_v(t) = #{0 <= s < t : X_s = v}.
McEstimate visit_count(const LazyChain& c, VertexId v, std::uint64_t t, std::uint64_t replicas,
                       std::uint64_t seed, unsigned workers = 0);

McEstimate cover_time(const LazyChain& c, VertexId start, std::uint64_t replicas,
                      std::uint64_t seed, unsigned workers = 0);

struct AuditVerdict {
  AuditVerdict() = default;
  explicit AuditVerdict(std::string name) : bound(std::move(name)) {}

  std::string bound;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  double worst_ratio = 0.0;  // max measured / bound
  std::string example;       // first violating instance, if any
};

struct BoundAuditOptions {
  std::uint64_t seed = 1;
  std::uint64_t samples = 1000;
  std::size_t exhaustive_below = 8;
  std::uint64_t cover_replicas = 2000;
  bool lemma_key = true;     // needs a simple graph
  bool exit_bound = false;   // needs a regular simple graph
  bool visit_bound = false;  // needs a regular graph
  std::uint64_t visit_replicas = 4000;
};

// Audits on the walk `c` over `g` (c is expected to be the non-lazy walk):
//   commute: C(u,v) <= m d(u,v) for all pairs
//   distance: d(v, A^c) <= 3|A|/d + 1 on the undirected view
//   cover:   E cover <= 16 m n / d_min + 3 stderr
//   set-hit: H(s, Z) <= 12 |W|^2 for s in W adjacent to Z
//   exit:    E_v exit(A) <= 10 |A|^2 and E_v N_v(A^c) <= 10 |A|
//   visits:  E_v N_v(t) <= 8 sqrt(t) + 3 stderr for t <= 10 n^2
std::vector<AuditVerdict> bound_audit(const LazyChain& c, const EulerianMultigraph& g,
                                      const BoundAuditOptions& options);

}  // namespace eulerlab
