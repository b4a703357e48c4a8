#include "eulerlab/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "eulerlab/error.hpp"
#include "eulerlab/parallel.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

namespace {

constexpr double kFirstStepTolerance = 1e-9;

template <typename Sample>
McEstimate run_replicas(std::uint64_t replicas, std::uint64_t seed, unsigned workers, Sample sample) {
  if (replicas == 0) throw InputError("replicas must be at least 1");
  std::vector<double> values(replicas);
  parallel_for(
      replicas,
      [&](std::size_t i) {
        Rng rng(derive_stream_seed(seed, i));
        values[i] = sample(rng);
      },
      workers);
  McEstimate est;
  est.replicas = replicas;
  est.seed = seed;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(replicas);
  if (replicas > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.stderr_ = std::sqrt(ss / static_cast<double>(replicas - 1) / static_cast<double>(replicas));
  }
  return est;
}

// Dense (I - P_S) for the rows and columns of s.
Eigen::MatrixXd restricted_generator(const LazyChain& c, const VertexSet& s) {
  std::vector<int> index(c.size(), -1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= c.size() || index[s[i]] != -1) throw InputError("vertex set has bad or repeated entries");
    index[s[i]] = static_cast<int>(i);
  }
  const auto k = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (const auto& e : c.row(s[i])) {
      if (index[e.col] >= 0) a(i, index[e.col]) -= e.p;
    }
  }
  return a;
}

std::vector<VertexId> complement(std::size_t n, const VertexSet& s) {
  std::vector<bool> in(n, false);
  for (VertexId v : s) in[v] = true;
  std::vector<VertexId> out;
  for (VertexId v = 0; v < n; ++v) {
    if (!in[v]) out.push_back(v);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd hitting_times(const LazyChain& c) {
  const auto n = static_cast<Eigen::Index>(c.size());
  const auto& pi = c.stationary();
  Eigen::RowVectorXd pi_row(n);
  for (Eigen::Index i = 0; i < n; ++i) pi_row(i) = pi[i];
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - c.dense() +
                      Eigen::VectorXd::Ones(n) * pi_row;
  Eigen::MatrixXd z = a.partialPivLu().inverse();
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index v = 0; v < n; ++v) {
    for (Eigen::Index u = 0; u < n; ++u) h(u, v) = u == v ? 0.0 : (z(v, v) - z(u, v)) / pi[v];
  }
  const double residual = first_step_residual(c, h);
  const double scale = std::max(1.0, h.maxCoeff());
  if (residual > kFirstStepTolerance * scale) {
    throw NumericalError("hitting times fail first-step equations (residual " +
                         std::to_string(residual) + ")");
  }
  return h;
}

std::vector<double> hitting_times_to(const LazyChain& c, VertexId v) {
  if (v >= c.size()) throw InputError("target vertex out of range");
  VertexSet others;
  for (VertexId u = 0; u < c.size(); ++u) {
    if (u != v) others.push_back(u);
  }
  std::vector<double> out(c.size(), 0.0);
  if (others.empty()) return out;
  Eigen::MatrixXd a = restricted_generator(c, others);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw NumericalError("hitting-time system is singular");
  Eigen::VectorXd h = lu.solve(Eigen::VectorXd::Ones(a.rows()));
  for (std::size_t i = 0; i < others.size(); ++i) out[others[i]] = h(static_cast<Eigen::Index>(i));
  return out;
}

double first_step_residual(const LazyChain& c, const Eigen::MatrixXd& h) {
  const auto n = static_cast<Eigen::Index>(c.size());
  double worst = 0.0;
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (u == v) continue;
      double rhs = 1.0;
      for (const auto& e : c.row(static_cast<VertexId>(u))) rhs += e.p * h(e.col, v);
      worst = std::max(worst, std::abs(h(u, v) - rhs));
    }
  }
  return worst;
}

double commute_time(const LazyChain& c, VertexId u, VertexId v) {
  if (u == v) throw InputError("commute_time needs distinct vertices");
  return hitting_times_to(c, v)[u] + hitting_times_to(c, u)[v];
}

double commute_time(const Eigen::MatrixXd& h, VertexId u, VertexId v) { return h(u, v) + h(v, u); }

std::vector<double> exit_times(const LazyChain& c, const VertexSet& s) {
  if (s.empty() || s.size() >= c.size()) throw InputError("exit set must be nonempty and proper");
  Eigen::MatrixXd a = restricted_generator(c, s);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw NumericalError("exit-time system is singular");
  Eigen::VectorXd h = lu.solve(Eigen::VectorXd::Ones(a.rows()));
  return {h.data(), h.data() + h.size()};
}

double exit_time(const LazyChain& c, const VertexSet& s, VertexId start) {
  auto it = std::find(s.begin(), s.end(), start);
  if (it == s.end()) throw InputError("exit_time: start must lie in S");
  return exit_times(c, s)[static_cast<std::size_t>(it - s.begin())];
}

double visits_before_exit(const LazyChain& c, const VertexSet& s, VertexId v) {
  auto it = std::find(s.begin(), s.end(), v);
  if (it == s.end()) throw InputError("visits_before_exit: v must lie in S");
  if (s.size() >= c.size()) throw InputError("exit set must be proper");
  const auto i = static_cast<Eigen::Index>(it - s.begin());
  Eigen::MatrixXd a = restricted_generator(c, s);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(a.rows());
  e(i) = 1.0;
  // Green function G = (I - P_S)^{-1}; G(v,v) is the expected visit count.
  Eigen::VectorXd col = a.fullPivLu().solve(e);
  return col(i);
}

Trajectory Trajectory::fixed(VertexId v) {
  Trajectory t;
  t.rule_ = [v](std::uint64_t) { return v; };
  t.name_ = "static:" + std::to_string(v);
  return t;
}

Trajectory Trajectory::sweep(std::size_t n, std::uint64_t dwell) {
  if (n == 0 || dwell == 0) throw InputError("sweep needs n >= 1 and dwell >= 1");
  Trajectory t;
  t.rule_ = [n, dwell](std::uint64_t s) { return static_cast<VertexId>((s / dwell) % n); };
  t.name_ = "sweep";
  return t;
}

Trajectory Trajectory::antipodal_sweep(const EulerianMultigraph& g, VertexId walker_start) {
  auto dist = bfs_distances(undirected_view(g), walker_start);
  VertexId far = walker_start;
  for (VertexId v = 0; v < dist.size(); ++v) {
    if (dist[v] != kUnreachable && dist[v] > dist[far]) far = v;
  }
  const std::size_t n = g.vertex_count();
  Trajectory t;
  t.rule_ = [far, n](std::uint64_t s) { return static_cast<VertexId>((far + s / 2) % n); };
  t.name_ = "antipodal-sweep";
  return t;
}

Trajectory Trajectory::from_table(std::vector<VertexId> table) {
  if (table.empty()) throw InputError("trajectory table is empty");
  Trajectory t;
  auto shared = std::make_shared<const std::vector<VertexId>>(std::move(table));
  t.rule_ = [shared](std::uint64_t s) {
    return s < shared->size() ? (*shared)[s] : shared->back();
  };
  t.name_ = "table";
  return t;
}

CollisionEstimate moving_target_collision(const LazyChain& c, VertexId start, const Trajectory& traj,
                                          std::uint64_t replicas, std::uint64_t horizon,
                                          std::uint64_t seed, std::uint64_t z_window,
                                          unsigned workers) {
  if (start >= c.size()) throw InputError("start vertex out of range");
  if (horizon == 0) {
    std::uint64_t arcs = 0;
    for (VertexId v = 0; v < c.size(); ++v) {
      for (const auto& e : c.row(v)) arcs += (e.col != v && e.p > 0.0);
    }
    horizon = 100 * arcs * c.size();
  }
  const auto& pi = c.stationary();
  std::vector<double> z(replicas, 0.0);
  std::vector<char> truncated(replicas, 0);

  std::vector<double> times(replicas);
  parallel_for(
      replicas,
      [&](std::size_t i) {
        Rng rng(derive_stream_seed(seed, i));
        VertexId x = start;
        std::uint64_t hit = horizon;
        bool found = false;
        double zsum = 0.0;
        const std::uint64_t run_to = std::max(horizon, z_window);
        for (std::uint64_t t = 0; t <= run_to; ++t) {
          const VertexId target = traj.at(t);
          if (x == target) {
            if (!found && t <= horizon) {
              found = true;
              hit = t;
            }
            if (t < z_window) zsum += 1.0 / pi[target];
          }
          if ((found || t >= horizon) && t + 1 >= z_window) break;
          x = c.sample_step(x, rng);
        }
        times[i] = static_cast<double>(hit);
        truncated[i] = found ? 0 : 1;
        z[i] = zsum;
      },
      workers);

  CollisionEstimate est;
  est.replicas = replicas;
  est.seed = seed;
  est.horizon = horizon;
  double sum = 0.0, zs = 0.0;
  std::uint64_t cut = 0;
  for (std::size_t i = 0; i < replicas; ++i) {
    sum += times[i];
    zs += z[i];
    cut += truncated[i];
  }
  est.mean = sum / static_cast<double>(replicas);
  est.mean_z = zs / static_cast<double>(replicas);
  if (replicas > 1) {
    double ss = 0.0;
    for (double v : times) ss += (v - est.mean) * (v - est.mean);
    est.stderr_ = std::sqrt(ss / static_cast<double>(replicas - 1) / static_cast<double>(replicas));
  }
  est.truncated_fraction = static_cast<double>(cut) / static_cast<double>(replicas);
  est.flagged = est.truncated_fraction > 0.1;
  return est;
}

McEstimate visit_count(const LazyChain& c, VertexId v, std::uint64_t t, std::uint64_t replicas,
                       std::uint64_t seed, unsigned workers) {
  if (v >= c.size()) throw InputError("vertex out of range");
  if (t == 0) throw InputError("visit_count: t must be at least 1");
  return run_replicas(replicas, seed, workers, [&](Rng& rng) {
    VertexId x = v;
    std::uint64_t visits = 0;
    for (std::uint64_t s = 0; s < t; ++s) {
      visits += (x == v);
      if (s + 1 < t) x = c.sample_step(x, rng);
    }
    return static_cast<double>(visits);
  });
}

McEstimate cover_time(const LazyChain& c, VertexId start, std::uint64_t replicas, std::uint64_t seed,
                      unsigned workers) {
  if (start >= c.size()) throw InputError("start vertex out of range");
  const std::size_t n = c.size();
  return run_replicas(replicas, seed, workers, [&](Rng& rng) {
    std::vector<char> seen(n, 0);
    seen[start] = 1;
    std::size_t count = 1;
    VertexId x = start;
    std::uint64_t t = 0;
    while (count < n) {
      x = c.sample_step(x, rng);
      ++t;
      if (!seen[x]) {
        seen[x] = 1;
        ++count;
      }
    }
    return static_cast<double>(t);
  });
}

namespace {

struct SetSampler {
  std::size_t n;
  bool exhaustive;
  std::uint64_t samples;
  Rng rng;

  // Calls fn(set) for every nonempty proper subset, or for `samples` random
  // ones whose size is uniform in [1, n-1].
  template <typename Fn>
  void for_each(Fn fn) {
    if (exhaustive) {
      for (std::uint32_t mask = 1; mask + 1 < (std::uint32_t{1} << n); ++mask) {
        VertexSet s;
        for (VertexId v = 0; v < n; ++v) {
          if (mask >> v & 1) s.push_back(v);
        }
        fn(s);
      }
      return;
    }
    std::vector<VertexId> perm(n);
    for (std::uint64_t i = 0; i < samples; ++i) {
      const std::size_t size = 1 + rng.below(n - 1);
      std::iota(perm.begin(), perm.end(), VertexId{0});
      for (std::size_t j = 0; j < size; ++j) std::swap(perm[j], perm[j + rng.below(n - j)]);
      VertexSet s(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(size));
      std::sort(s.begin(), s.end());
      fn(s);
    }
  }
};

void record(AuditVerdict& v, double measured, double bound, const std::string& what) {
  ++v.checked;
  const double ratio = measured / bound;
  v.worst_ratio = std::max(v.worst_ratio, ratio);
  // linear-solve round-off: the directed cycle attains commute = m d exactly
  if (measured > bound * (1.0 + 1e-9)) {
    if (v.violations == 0) v.example = what;
    ++v.violations;
  }
}

std::string describe(const VertexSet& s) {
  std::ostringstream ss;
  ss << '{';
  for (std::size_t i = 0; i < s.size(); ++i) ss << (i ? "," : "") << s[i];
  ss << '}';
  return ss.str();
}

}  // namespace

std::vector<AuditVerdict> bound_audit(const LazyChain& c, const EulerianMultigraph& g,
                                      const BoundAuditOptions& options) {
  const std::size_t n = g.vertex_count();
  if (c.size() != n) throw InputError("bound_audit: chain and graph sizes differ");
  const double m = static_cast<double>(g.edge_count());
  const UndirectedGraph ug = undirected_view(g);
  std::vector<std::vector<std::uint32_t>> dist(n);
  for (VertexId v = 0; v < n; ++v) dist[v] = bfs_distances(ug, v);
  const bool exhaustive = n < options.exhaustive_below;
  std::vector<AuditVerdict> out;

  {
    AuditVerdict v{"commute <= m d(u,v)"};
    Eigen::MatrixXd h = hitting_times(c);
    for (VertexId a = 0; a < n; ++a) {
      for (VertexId b = a + 1; b < n; ++b) {
        record(v, commute_time(h, a, b), m * dist[a][b],
               "(" + std::to_string(a) + "," + std::to_string(b) + ")");
      }
    }
    out.push_back(v);
  }

  if (n >= 2) {
    AuditVerdict v{"d(v, A^c) <= 3|A|/d + 1"};
    const double d = static_cast<double>(ug.min_distinct_degree());
    SetSampler sampler{n, exhaustive, options.samples, Rng(derive_stream_seed(options.seed, 1))};
    sampler.for_each([&](const VertexSet& a) {
      auto outside = complement(n, a);
      const double bound = 3.0 * static_cast<double>(a.size()) / d + 1.0;
      for (VertexId x : a) {
        std::uint32_t best = kUnreachable;
        for (VertexId y : outside) best = std::min(best, dist[x][y]);
        record(v, best, bound, "A=" + describe(a) + " v=" + std::to_string(x));
      }
    });
    out.push_back(v);
  }

  {
    AuditVerdict v{"cover <= 16 m n / d_min + 3 se"};
    const double bound = 16.0 * m * static_cast<double>(n) / g.min_out_degree();
    std::vector<VertexId> starts;
    const std::size_t count = std::min<std::size_t>(n, 4);
    for (std::size_t i = 0; i < count; ++i) starts.push_back(static_cast<VertexId>(i * n / count));
    for (VertexId s : starts) {
      McEstimate est = cover_time(c, s, options.cover_replicas, derive_stream_seed(options.seed, 2 + s));
      record(v, est.mean - 3.0 * est.stderr_, bound, "start=" + std::to_string(s));
    }
    out.push_back(v);
  }

  if (options.lemma_key && n >= 2) {
    AuditVerdict v{"H(s,Z) <= 12 |W|^2"};
    SetSampler sampler{n, exhaustive, options.samples, Rng(derive_stream_seed(options.seed, 3))};
    sampler.for_each([&](const VertexSet& w) {
      std::vector<bool> in_w(n, false);
      for (VertexId x : w) in_w[x] = true;
      auto h = exit_times(c, w);
      const double bound = 12.0 * static_cast<double>(w.size() * w.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        bool boundary = false;
        for (VertexId y : ug.neighbors(w[i])) boundary = boundary || !in_w[y];
        if (boundary) record(v, h[i], bound, "W=" + describe(w) + " s=" + std::to_string(w[i]));
      }
    });
    out.push_back(v);
  }

  if (options.exit_bound && n >= 2) {
    AuditVerdict exit{"exit(A) <= 10 |A|^2"};
    AuditVerdict visits{"N_v(A^c) <= 10 |A|"};
    SetSampler sampler{n, exhaustive, options.samples, Rng(derive_stream_seed(options.seed, 4))};
    sampler.for_each([&](const VertexSet& a) {
      auto h = exit_times(c, a);
      const double size = static_cast<double>(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        record(exit, h[i], 10.0 * size * size, "A=" + describe(a) + " v=" + std::to_string(a[i]));
      }
      record(visits, visits_before_exit(c, a, a.front()), 10.0 * size,
             "A=" + describe(a) + " v=" + std::to_string(a.front()));
    });
    out.push_back(exit);
    out.push_back(visits);
  }

  if (options.visit_bound) {
    // Exact: E_v N_v(t) = sum_{s<t} P^s(v,v), evolved from every start.
    AuditVerdict v{"E_v N_v(t) <= 8 sqrt(t), t <= 10 n^2"};
    const std::uint64_t t_max = 10 * n * n;
    std::vector<double> worst(n, 0.0);
    std::vector<std::uint64_t> checked(n, 0);
    std::vector<std::uint64_t> bad(n, 0);
    parallel_for(n, [&](std::size_t vi) {
      const auto v0 = static_cast<VertexId>(vi);
      Distribution mu = point_mass(n, v0);
      double visits = 0.0;
      for (std::uint64_t t = 1; t <= t_max; ++t) {
        visits += mu[v0];
        const double bound = 8.0 * std::sqrt(static_cast<double>(t));
        worst[vi] = std::max(worst[vi], visits / bound);
        ++checked[vi];
        if (visits > bound) ++bad[vi];
        mu = c.step(mu);
      }
    });
    for (std::size_t i = 0; i < n; ++i) {
      v.checked += checked[i];
      v.worst_ratio = std::max(v.worst_ratio, worst[i]);
      if (bad[i] && v.violations == 0) v.example = "v=" + std::to_string(i);
      v.violations += bad[i];
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace eulerlab
