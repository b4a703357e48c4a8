#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "eulerlab/chain.hpp"
#include "eulerlab/graph.hpp"

namespace eulerlab {

// Cyclic order v_1..v_n with d(v_i, v_{i+1}) <= 3 and d(v_1, v_n) = 1 in
// the undirected graph.
struct CycleLabelling {
  std::vector<VertexId> order;
  std::vector<std::size_t> position;  // inverse of order
  std::vector<std::pair<VertexId, VertexId>> tree_edges;
};

// BFS spanning tree from `root`, then the recursive split: cut the edge to
// the smallest-index neighbour w, label the root's side forward and w's side
// backward.
CycleLabelling ham_labelling(const UndirectedGraph& g, VertexId root);
// Same recursion applied to an explicit tree.
CycleLabelling tree_labelling(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& tree,
                              VertexId root);

bool verify_labelling(const UndirectedGraph& g, const std::vector<VertexId>& order);

// Vertices v_j outside `visited` such that every forward cyclic window
// starting at v_j of length l <= n holds at most l/2 visited vertices.
// Linear time via prefix sums and a sliding-window maximum.
std::vector<VertexId> good_vertices(const CycleLabelling& lab, const std::vector<char>& visited);
// Direct O(n^2) window check of the same definition.
std::vector<VertexId> good_vertices_naive(const CycleLabelling& lab, const std::vector<char>& visited);

struct PhaseRecord {
  VertexId start = 0;      // s_i
  VertexId successor = 0;  // r_i
  std::size_t visited = 0;  // |Y_i|
  std::size_t good = 0;     // |U_i|
  std::size_t bad = 0;      // |B_i|
  std::uint64_t length = 0;
};

struct ExplorationPoint {
  std::size_t k = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double mean_phases = 0.0;
  std::size_t max_phases = 0;  // phases started before T_k, worst replica
};

struct ExplorationRecord {
  VertexId start = 0;
  std::uint64_t replicas = 0;
  std::vector<ExplorationPoint> points;
  std::uint64_t phase_checks = 0;  // phases audited for |B| <= |Y|
  std::vector<PhaseRecord> trace;  // phases of replica 0
};

// Simulates the walk with phase bookkeeping until max(k_targets) distinct
// vertices are seen. Throws AuditViolation if more than 2k phases start
// before T_k, or if |B_i| > |Y_i| while |Y_i| <= n/2.
ExplorationRecord run_phases(const LazyChain& c, const CycleLabelling& lab, VertexId start,
                             const std::vector<std::size_t>& k_targets, std::uint64_t replicas,
                             std::uint64_t seed, unsigned workers = 0);

struct ExplorationAudit {
  bool regular = false;
  std::vector<ExplorationRecord> records;  // one per sampled start
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  double worst_ratio = 0.0;     // max (mean - 3 se) / bound
  double fitted_exponent = 0.0; // slope of log max-start E[T_k] against log k, k >= 2
};

// E[T_k] <= 512 k^2 + 3 se when g is regular, <= 288 k^3 + 3 se otherwise.
// Starts: every vertex when n <= 8, else 8 evenly spaced vertices.
ExplorationAudit exploration_audit(const LazyChain& c, const EulerianMultigraph& g,
                                   const std::vector<std::size_t>& k_grid, std::uint64_t replicas,
                                   std::uint64_t seed, unsigned workers = 0);

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace eulerlab
