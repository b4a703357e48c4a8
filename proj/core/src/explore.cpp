#include "eulerlab/explore.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "eulerlab/error.hpp"
#include "eulerlab/parallel.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

namespace {

void label_rec(std::vector<std::vector<VertexId>>& adj, VertexId v, std::vector<VertexId>& out) {
  if (adj[v].empty()) {
    out.push_back(v);
    return;
  }
  auto it = std::min_element(adj[v].begin(), adj[v].end());
  const VertexId w = *it;
  adj[v].erase(it);
  adj[w].erase(std::find(adj[w].begin(), adj[w].end(), v));
  label_rec(adj, v, out);
  const std::size_t mark = out.size();
  label_rec(adj, w, out);
  std::reverse(out.begin() + static_cast<std::ptrdiff_t>(mark), out.end());
}

}  // namespace

CycleLabelling tree_labelling(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& tree,
                              VertexId root) {
  if (root >= n) throw InputError("labelling root out of range");
  if (tree.size() + 1 != n) throw InputError("spanning tree must have n - 1 edges");
  std::vector<std::vector<VertexId>> adj(n);
  for (auto [a, b] : tree) {
    if (a >= n || b >= n) throw InputError("tree edge out of range");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  CycleLabelling lab;
  lab.tree_edges = tree;
  lab.order.reserve(n);
  label_rec(adj, root, lab.order);
  if (lab.order.size() != n) throw InputError("tree edges do not span all vertices");
  lab.position.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) lab.position[lab.order[i]] = i;
  return lab;
}

CycleLabelling ham_labelling(const UndirectedGraph& g, VertexId root) {
  const std::size_t n = g.vertex_count();
  if (root >= n) throw InputError("labelling root out of range");
  std::vector<std::pair<VertexId, VertexId>> tree;
  std::vector<char> seen(n, 0);
  std::deque<VertexId> queue{root};
  seen[root] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (VertexId w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        tree.emplace_back(v, w);
        queue.push_back(w);
      }
    }
  }
  if (tree.size() + 1 != n) throw InputError("ham_labelling: graph is not connected");
  return tree_labelling(n, tree, root);
}

bool verify_labelling(const UndirectedGraph& g, const std::vector<VertexId>& order) {
  const std::size_t n = g.vertex_count();
  if (order.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (VertexId v : order) {
    if (v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  if (n == 1) return true;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto dist = bfs_distances(g, order[i]);
    if (dist[order[i + 1]] > 3) return false;
  }
  return bfs_distances(g, order.front())[order.back()] == 1;
}

std::vector<VertexId> good_vertices(const CycleLabelling& lab, const std::vector<char>& visited) {
  const std::size_t n = lab.order.size();
  // b = +1 on visited, -1 otherwise; a window is acceptable iff its b-sum is
  // <= 0, i.e. max_{j < i <= j+n} prefix[i] <= prefix[j].
  std::vector<long> prefix(2 * n + 1, 0);
  for (std::size_t i = 0; i < 2 * n; ++i) prefix[i + 1] = prefix[i] + (visited[lab.order[i % n]] ? 1 : -1);
  std::vector<VertexId> good;
  std::deque<std::size_t> window;  // indices in (j, j+n] with decreasing prefix values
  for (std::size_t i = 1; i <= n; ++i) {
    while (!window.empty() && prefix[window.back()] <= prefix[i]) window.pop_back();
    window.push_back(i);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!visited[lab.order[j]] && prefix[window.front()] <= prefix[j]) good.push_back(lab.order[j]);
    // slide to (j+1, j+1+n]
    if (window.front() == j + 1) window.pop_front();
    const std::size_t add = j + 1 + n;
    while (!window.empty() && prefix[window.back()] <= prefix[add]) window.pop_back();
    window.push_back(add);
  }
  std::sort(good.begin(), good.end());
  return good;
}

std::vector<VertexId> good_vertices_naive(const CycleLabelling& lab, const std::vector<char>& visited) {
  const std::size_t n = lab.order.size();
  std::vector<VertexId> good;
  for (std::size_t j = 0; j < n; ++j) {
    if (visited[lab.order[j]]) continue;
    bool ok = true;
    for (std::size_t len = 1; len <= n && ok; ++len) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < len; ++i) hits += visited[lab.order[(j + i) % n]] ? 1 : 0;
      ok = 2 * hits <= len;
    }
    if (ok) good.push_back(lab.order[j]);
  }
  std::sort(good.begin(), good.end());
  return good;
}

namespace {

struct ReplicaResult {
  std::vector<std::uint64_t> hit_time;  // T_k per target
  std::vector<std::size_t> phases;      // phases started before T_k
  std::uint64_t phase_checks = 0;
  std::vector<PhaseRecord> trace;
};

std::string dump_phase(const PhaseRecord& p, std::size_t index) {
  std::ostringstream ss;
  ss << "phase " << index << ": s=" << p.start << " r=" << p.successor << " |Y|=" << p.visited
     << " |U|=" << p.good << " |B|=" << p.bad;
  return ss.str();
}

ReplicaResult simulate(const LazyChain& c, const CycleLabelling& lab, VertexId start,
                       const std::vector<std::size_t>& targets, Rng& rng, bool keep_trace) {
  const std::size_t n = c.size();
  const std::size_t k_max = targets.back();
  ReplicaResult res;
  res.hit_time.assign(targets.size(), 0);
  res.phases.assign(targets.size(), 0);

  std::vector<char> visited(n, 0);
  std::vector<char> in_target(n, 0);
  visited[start] = 1;
  std::size_t distinct = 1;
  std::size_t next_target = 0;
  std::size_t phases_started = 0;
  std::uint64_t t = 0;
  VertexId x = start;

  auto settle_targets = [&] {
    while (next_target < targets.size() && distinct >= targets[next_target]) {
      res.hit_time[next_target] = t;
      res.phases[next_target] = phases_started;
      ++next_target;
    }
  };
  settle_targets();

  while (distinct < k_max) {
    // New phase at time t from s = x.
    PhaseRecord rec;
    rec.start = x;
    rec.successor = lab.order[(lab.position[x] + 1) % n];
    rec.visited = distinct;
    auto good = good_vertices(lab, visited);
    rec.good = good.size();
    rec.bad = n - good.size() - distinct;
    ++phases_started;
    if (2 * rec.visited <= n) {
      ++res.phase_checks;
      if (rec.bad > rec.visited) {
        throw AuditViolation("|B| > |Y| with |Y| <= n/2 at " + dump_phase(rec, phases_started));
      }
    }
    std::fill(in_target.begin(), in_target.end(), 0);
    for (VertexId u : good) in_target[u] = 1;
    in_target[rec.successor] = 1;

    const std::uint64_t phase_start = t;
    do {
      x = c.sample_step(x, rng);
      ++t;
      if (!visited[x]) {
        visited[x] = 1;
        ++distinct;
        settle_targets();
      }
    } while (!in_target[x] && distinct < k_max);
    rec.length = t - phase_start;
    if (keep_trace) res.trace.push_back(rec);
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (res.phases[i] > 2 * targets[i]) {
      std::ostringstream ss;
      ss << res.phases[i] << " phases started before visiting " << targets[i]
         << " vertices (start " << start << ")";
      throw AuditViolation(ss.str());
    }
  }
  return res;
}

}  // namespace

ExplorationRecord run_phases(const LazyChain& c, const CycleLabelling& lab, VertexId start,
                             const std::vector<std::size_t>& k_targets, std::uint64_t replicas,
                             std::uint64_t seed, unsigned workers) {
  const std::size_t n = c.size();
  if (lab.order.size() != n) throw InputError("labelling size does not match chain");
  if (start >= n) throw InputError("start vertex out of range");
  if (k_targets.empty()) throw InputError("no exploration targets");
  if (replicas == 0) throw InputError("replicas must be at least 1");
  std::vector<std::size_t> targets = k_targets;
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (targets.front() < 1 || targets.back() > n) throw InputError("exploration targets must lie in [1, n]");

  std::vector<ReplicaResult> results(replicas);
  parallel_for(
      replicas,
      [&](std::size_t i) {
        Rng rng(derive_stream_seed(seed, i));
        results[i] = simulate(c, lab, start, targets, rng, i == 0);
      },
      workers);

  ExplorationRecord rec;
  rec.start = start;
  rec.replicas = replicas;
  rec.trace = std::move(results[0].trace);
  for (const auto& r : results) rec.phase_checks += r.phase_checks;
  const double reps = static_cast<double>(replicas);
  for (std::size_t j = 0; j < targets.size(); ++j) {
    ExplorationPoint p;
    p.k = targets[j];
    double sum = 0.0, phase_sum = 0.0;
    for (const auto& r : results) {
      sum += static_cast<double>(r.hit_time[j]);
      phase_sum += static_cast<double>(r.phases[j]);
      p.max_phases = std::max(p.max_phases, r.phases[j]);
    }
    p.mean = sum / reps;
    p.mean_phases = phase_sum / reps;
    if (replicas > 1) {
      double ss = 0.0;
      for (const auto& r : results) {
        const double d = static_cast<double>(r.hit_time[j]) - p.mean;
        ss += d * d;
      }
      p.stderr_ = std::sqrt(ss / (reps - 1.0) / reps);
    }
    rec.points.push_back(p);
  }
  return rec;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("fit needs at least two points");
  double mx = 0.0, my = 0.0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw InputError("log-log fit needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ExplorationAudit exploration_audit(const LazyChain& c, const EulerianMultigraph& g,
                                   const std::vector<std::size_t>& k_grid, std::uint64_t replicas,
                                   std::uint64_t seed, unsigned workers) {
  const std::size_t n = g.vertex_count();
  ExplorationAudit audit;
  audit.regular = validate(g).regular_degree.has_value();
  const UndirectedGraph ug = undirected_view(g);

  std::vector<VertexId> starts;
  const std::size_t count = std::min<std::size_t>(n, 8);
  for (std::size_t i = 0; i < count; ++i) starts.push_back(static_cast<VertexId>(i * n / count));

  std::vector<double> worst_mean;
  for (std::size_t si = 0; si < starts.size(); ++si) {
    const VertexId s = starts[si];
    CycleLabelling lab = ham_labelling(ug, s);
    audit.records.push_back(run_phases(c, lab, s, k_grid, replicas, derive_stream_seed(seed, si), workers));
    const auto& pts = audit.records.back().points;
    if (worst_mean.empty()) worst_mean.assign(pts.size(), 0.0);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double k = static_cast<double>(pts[j].k);
      const double bound = audit.regular ? 512.0 * k * k : 288.0 * k * k * k;
      ++audit.checked;
      const double low = pts[j].mean - 3.0 * pts[j].stderr_;
      audit.worst_ratio = std::max(audit.worst_ratio, low / bound);
      if (low > bound) ++audit.violations;
      worst_mean[j] = std::max(worst_mean[j], pts[j].mean);
    }
  }
  std::vector<double> ks, ts;
  const auto& pts = audit.records.front().points;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (pts[j].k >= 2 && worst_mean[j] > 0.0) {
      ks.push_back(static_cast<double>(pts[j].k));
      ts.push_back(worst_mean[j]);
    }
  }
  if (ks.size() >= 2) audit.fitted_exponent = fit_loglog_slope(ks, ts);
  return audit;
}

}  // namespace eulerlab
