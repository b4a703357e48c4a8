#include "eulerlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

#include "eulerlab/error.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

EulerianMultigraph::EulerianMultigraph(std::size_t n, std::span<const EdgeGroup> edges)
    : out_(n), out_degree_(n, 0), in_degree_(n, 0) {
  for (const auto& e : edges) {
    if (e.source >= n || e.target >= n) {
      throw InputError("edge (" + std::to_string(e.source) + ", " + std::to_string(e.target) +
                       ") out of range for n = " + std::to_string(n));
    }
    if (e.multiplicity == 0) throw InputError("edge multiplicity must be at least 1");
    out_[e.source].push_back({e.target, e.multiplicity});
  }
  for (VertexId v = 0; v < n; ++v) {
    auto& arcs = out_[v];
    std::sort(arcs.begin(), arcs.end(),
              [](const Arc& a, const Arc& b) { return a.target < b.target; });
    std::vector<Arc> merged;
    for (const Arc& a : arcs) {
      if (!merged.empty() && merged.back().target == a.target) {
        merged.back().multiplicity += a.multiplicity;
      } else {
        merged.push_back(a);
      }
    }
    arcs = std::move(merged);
    for (const Arc& a : arcs) {
      out_degree_[v] += a.multiplicity;
      in_degree_[a.target] += a.multiplicity;
      edge_count_ += a.multiplicity;
    }
  }
}

std::uint32_t EulerianMultigraph::multiplicity(VertexId u, VertexId v) const {
  const auto& arcs = out_[u];
  auto it = std::lower_bound(arcs.begin(), arcs.end(), v,
                             [](const Arc& a, VertexId t) { return a.target < t; });
  return (it != arcs.end() && it->target == v) ? it->multiplicity : 0;
}

std::uint32_t EulerianMultigraph::min_out_degree() const {
  if (out_degree_.empty()) return 0;
  return *std::min_element(out_degree_.begin(), out_degree_.end());
}

bool EulerianMultigraph::has_self_loops() const {
  for (VertexId v = 0; v < out_.size(); ++v) {
    if (multiplicity(v, v) > 0) return true;
  }
  return false;
}

bool EulerianMultigraph::is_simple() const {
  for (const auto& arcs : out_) {
    for (const Arc& a : arcs) {
      if (a.multiplicity > 1) return false;
    }
  }
  return true;
}

std::vector<EdgeGroup> EulerianMultigraph::edge_groups() const {
  std::vector<EdgeGroup> groups;
  for (VertexId v = 0; v < out_.size(); ++v) {
    for (const Arc& a : out_[v]) groups.push_back({v, a.target, a.multiplicity});
  }
  return groups;
}

ValidationReport validate(const EulerianMultigraph& g) {
  ValidationReport report;
  const std::size_t n = g.vertex_count();
  report.eulerian = true;
  bool regular = n > 0;
  for (VertexId v = 0; v < n; ++v) {
    if (g.out_degree(v) != g.in_degree(v)) report.eulerian = false;
    if (g.out_degree(v) != g.out_degree(0) || g.in_degree(v) != g.out_degree(0)) regular = false;
  }
  report.connected = is_connected(undirected_view(g));
  if (regular) report.regular_degree = g.out_degree(0);
  return report;
}

namespace {

std::vector<bool> reach(std::size_t n, const std::vector<std::vector<VertexId>>& adj,
                        VertexId source) {
  std::vector<bool> seen(n, false);
  std::vector<VertexId> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_strongly_connected(const EulerianMultigraph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return true;
  std::vector<std::vector<VertexId>> fwd(n), bwd(n);
  for (const auto& e : g.edge_groups()) {
    fwd[e.source].push_back(e.target);
    bwd[e.target].push_back(e.source);
  }
  auto f = reach(n, fwd, 0);
  auto b = reach(n, bwd, 0);
  return std::all_of(f.begin(), f.end(), [](bool x) { return x; }) &&
         std::all_of(b.begin(), b.end(), [](bool x) { return x; });
}

EulerianMultigraph reverse(const EulerianMultigraph& g) {
  auto groups = g.edge_groups();
  for (auto& e : groups) std::swap(e.source, e.target);
  return EulerianMultigraph(g.vertex_count(), groups);
}

UndirectedGraph::UndirectedGraph(std::size_t n,
                                 std::span<const std::pair<VertexId, VertexId>> edges)
    : adj_(n) {
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw InputError("undirected edge endpoint out of range");
    if (u == v) continue;
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& nb : adj_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

std::size_t UndirectedGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& nb : adj_) total += nb.size();
  return total / 2;
}

std::size_t UndirectedGraph::min_distinct_degree() const {
  std::size_t best = SIZE_MAX;
  for (const auto& nb : adj_) best = std::min(best, nb.size());
  return adj_.empty() ? 0 : best;
}

UndirectedGraph undirected_view(const EulerianMultigraph& g) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& e : g.edge_groups()) edges.emplace_back(e.source, e.target);
  return UndirectedGraph(g.vertex_count(), edges);
}

std::vector<std::uint32_t> bfs_distances(const UndirectedGraph& g, VertexId source) {
  std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (VertexId w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

bool is_connected(const UndirectedGraph& g) {
  if (g.vertex_count() == 0) return true;
  auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](auto d) { return d == kUnreachable; });
}

std::uint32_t undirected_distance(const EulerianMultigraph& g, VertexId u, VertexId v) {
  if (u >= g.vertex_count() || v >= g.vertex_count()) throw InputError("vertex out of range");
  auto dist = bfs_distances(undirected_view(g), u);
  if (dist[v] == kUnreachable) {
    throw InputError("vertex " + std::to_string(v) + " unreachable from " + std::to_string(u));
  }
  return dist[v];
}

// ---- generators ------------------------------------------------------------

EulerianMultigraph gen_directed_cycle(std::size_t n) {
  if (n < 2) throw InputError("directed cycle needs n >= 2");
  std::vector<EdgeGroup> edges;
  for (VertexId i = 0; i < n; ++i) edges.push_back({i, static_cast<VertexId>((i + 1) % n), 1});
  return EulerianMultigraph(n, edges);
}

EulerianMultigraph gen_biased_cycle(std::size_t n, std::uint32_t forward_mult,
                                    std::uint32_t backward_mult) {
  if (n < 3) throw InputError("biased cycle needs n >= 3");
  if (forward_mult == 0 || backward_mult == 0) {
    throw InputError("biased cycle multiplicities must be at least 1");
  }
  std::vector<EdgeGroup> edges;
  for (VertexId i = 0; i < n; ++i) {
    edges.push_back({i, static_cast<VertexId>((i + 1) % n), forward_mult});
    edges.push_back({i, static_cast<VertexId>((i + n - 1) % n), backward_mult});
  }
  return EulerianMultigraph(n, edges);
}

EulerianMultigraph gen_circulant(std::size_t n, std::span<const std::size_t> steps) {
  if (n < 2) throw InputError("circulant needs n >= 2");
  std::vector<EdgeGroup> edges;
  for (std::size_t s : steps) {
    if (s % n == 0) throw InputError("circulant step must be nonzero mod n");
    for (VertexId i = 0; i < n; ++i) edges.push_back({i, static_cast<VertexId>((i + s) % n), 1});
  }
  return EulerianMultigraph(n, edges);
}

VertexId Gadget::left(std::size_t position) const {
  position %= spec.n;
  return position == 0 ? 0 : static_cast<VertexId>(position);
}

VertexId Gadget::right(std::size_t position) const {
  position %= spec.n;
  return position == 0 ? 0 : static_cast<VertexId>(spec.n - 1 + position);
}

Gadget gen_two_cycle_gadget(const GadgetSpec& spec) {
  const std::size_t n = spec.n;
  if (n < 4 || n % 4 != 0) throw InputError("gadget cycle length must be a positive multiple of 4");
  if (!(spec.alpha >= 0.0 && spec.alpha < 1.0)) throw InputError("gadget alpha must lie in [0, 1)");

  Gadget gadget;
  gadget.spec = spec;
  const std::size_t vertices = 2 * n - 1;
  std::vector<EdgeGroup> edges;
  for (int side = 0; side < 2; ++side) {
    auto at = [&](std::size_t pos) { return side == 0 ? gadget.left(pos) : gadget.right(pos); };
    for (std::size_t pos = 0; pos < n; ++pos) {
      // Clockwise arcs carry weight 2, counter-clockwise weight 1; vertex 0
      // receives one such pair from each cycle.
      edges.push_back({at(pos), at(pos + 1), 2});
      edges.push_back({at(pos), at(pos + n - 1), 1});
    }
  }
  gadget.graph = EulerianMultigraph(vertices, edges);

  gadget.holding.assign(vertices, 0.5);
  // exactly n/2 slow sites, so each site pairs with its antipode across the
  // stretch boundary and the commute mean has its closed form
  for (std::size_t pos = n / 4 + 1; pos <= 3 * n / 4; ++pos) gadget.holding[gadget.left(pos)] = spec.alpha;

  gadget.landmarks = {0, gadget.left(n / 2), gadget.right(n / 2)};
  return gadget;
}

EulerianMultigraph gen_random_eulerian(std::size_t n, std::uint64_t target_m, std::uint64_t seed,
                                       bool simple) {
  if (n < 2) throw InputError("random Eulerian graph needs n >= 2");
  if (target_m < n) throw InputError("target_m must be at least n");
  if (simple && target_m > n * (n - 1)) throw InputError("target_m exceeds simple digraph capacity");

  constexpr int kAttempts = 1000;
  constexpr int kRejectionsPerAttempt = 2000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(derive_stream_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<std::vector<bool>> used(simple ? n : 0, std::vector<bool>(simple ? n : 0, false));
    std::vector<EdgeGroup> edges;
    std::uint64_t m = 0;
    int rejections = 0;
    std::vector<VertexId> perm(n);
    while (m < target_m && rejections < kRejectionsPerAttempt) {
      const std::size_t len = 2 + rng.below(n - 1);
      std::iota(perm.begin(), perm.end(), VertexId{0});
      // Partial Fisher-Yates: the first `len` entries are a uniform ordered sample.
      for (std::size_t i = 0; i < len; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
      if (simple) {
        bool clash = false;
        for (std::size_t i = 0; i < len && !clash; ++i) clash = used[perm[i]][perm[(i + 1) % len]];
        if (clash) {
          ++rejections;
          continue;
        }
      }
      for (std::size_t i = 0; i < len; ++i) {
        VertexId u = perm[i], v = perm[(i + 1) % len];
        if (simple) used[u][v] = true;
        edges.push_back({u, v, 1});
      }
      m += len;
    }
    if (m < target_m) continue;
    EulerianMultigraph g(n, edges);
    if (is_connected(undirected_view(g))) return g;
  }
  throw NumericalError("gen_random_eulerian: no connected graph within retry budget (n = " +
                       std::to_string(n) + ", target_m = " + std::to_string(target_m) + ")");
}

EulerianMultigraph gen_random_regular(std::size_t n, std::uint32_t d, std::uint64_t seed) {
  if (n < 2) throw InputError("random regular graph needs n >= 2");
  if (d == 0 || d > n - 1) throw InputError("regular degree must lie in [1, n-1]");

  constexpr int kAttempts = 1000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(derive_stream_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    for (VertexId v = 0; v < n; ++v) used[v][v] = true;
    std::vector<EdgeGroup> edges;
    bool ok = true;
    for (std::uint32_t layer = 0; layer < d && ok; ++layer) {
      std::vector<VertexId> perm(n);
      bool found = false;
      for (int tries = 0; tries < 200 && !found; ++tries) {
        std::iota(perm.begin(), perm.end(), VertexId{0});
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        found = true;
        for (VertexId v = 0; v < n && found; ++v) found = !used[v][perm[v]];
      }
      if (!found) {
        ok = false;
        break;
      }
      for (VertexId v = 0; v < n; ++v) {
        used[v][perm[v]] = true;
        edges.push_back({v, perm[v], 1});
      }
    }
    if (!ok) continue;
    EulerianMultigraph g(n, edges);
    if (is_connected(undirected_view(g))) return g;
  }
  throw NumericalError("gen_random_regular: no connected graph within retry budget");
}

}  // namespace eulerlab
