#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace eulerlab {

using VertexId = std::uint32_t;

struct Arc {
  VertexId target;
  std::uint32_t multiplicity;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct EdgeGroup {
  VertexId source;
  VertexId target;
  std::uint32_t multiplicity;

  friend bool operator==(const EdgeGroup&, const EdgeGroup&) = default;
};

// Directed multigraph on vertices 0..n-1. Parallel arcs are stored once with
// a multiplicity; out-arcs of each vertex are sorted by target. Immutable
// after construction.
class EulerianMultigraph {
 public:
  EulerianMultigraph() = default;

  // Duplicate (source, target) groups are merged by summing multiplicities.
  // Throws InputError on out-of-range endpoints or zero multiplicity.
  EulerianMultigraph(std::size_t n, std::span<const EdgeGroup> edges);

  std::size_t vertex_count() const { return out_.size(); }
  // Total number of directed edges counted with multiplicity.
  std::uint64_t edge_count() const { return edge_count_; }

  std::span<const Arc> out_arcs(VertexId v) const { return out_[v]; }
  std::uint32_t out_degree(VertexId v) const { return out_degree_[v]; }
  std::uint32_t in_degree(VertexId v) const { return in_degree_[v]; }
  std::uint32_t multiplicity(VertexId u, VertexId v) const;

  std::uint32_t min_out_degree() const;
  bool has_self_loops() const;
  // No arc has multiplicity above one.
  bool is_simple() const;

  // Edge groups in (source, target) lexicographic order.
  std::vector<EdgeGroup> edge_groups() const;

  friend bool operator==(const EulerianMultigraph& a, const EulerianMultigraph& b) {
    return a.out_ == b.out_;
  }

 private:
  std::vector<std::vector<Arc>> out_;
  std::vector<std::uint32_t> out_degree_;
  std::vector<std::uint32_t> in_degree_;
  std::uint64_t edge_count_ = 0;
};

struct ValidationReport {
  bool eulerian = false;
  bool connected = false;
  std::optional<std::uint32_t> regular_degree;
};

ValidationReport validate(const EulerianMultigraph& g);

// Strong connectivity via forward and backward reachability from vertex 0.
bool is_strongly_connected(const EulerianMultigraph& g);

EulerianMultigraph reverse(const EulerianMultigraph& g);

// Simple undirected graph underlying a digraph: orientation, multiplicity and
// self-loops are dropped.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  UndirectedGraph(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges);

  std::size_t vertex_count() const { return adj_.size(); }
  std::span<const VertexId> neighbors(VertexId v) const { return adj_[v]; }
  std::size_t edge_count() const;
  // Smallest number of distinct neighbours over all vertices.
  std::size_t min_distinct_degree() const;

 private:
  std::vector<std::vector<VertexId>> adj_;
};

UndirectedGraph undirected_view(const EulerianMultigraph& g);

inline constexpr std::uint32_t kUnreachable = UINT32_MAX;

// BFS distances from `source`; unreachable vertices get kUnreachable.
std::vector<std::uint32_t> bfs_distances(const UndirectedGraph& g, VertexId source);
bool is_connected(const UndirectedGraph& g);

// Undirected hop distance. Throws InputError when v is unreachable from u.
std::uint32_t undirected_distance(const EulerianMultigraph& g, VertexId u, VertexId v);

// ---- generators ------------------------------------------------------------

EulerianMultigraph gen_directed_cycle(std::size_t n);

// Vertex i gets forward_mult arcs to i+1 and backward_mult arcs to i-1 (mod n).
EulerianMultigraph gen_biased_cycle(std::size_t n, std::uint32_t forward_mult,
                                    std::uint32_t backward_mult);

// Vertex i has one arc to i+s (mod n) for each step s.
EulerianMultigraph gen_circulant(std::size_t n, std::span<const std::size_t> steps);

struct GadgetSpec {
  std::size_t n = 8;  // cycle length, divisible by 4
  double alpha = 0.5;  // holding on left positions n/4 + 1 .. 3n/4
};

struct GadgetLandmarks {
  VertexId zero = 0;
  VertexId a = 0;  // antipode of 0 on the left cycle
  VertexId b = 0;  // antipode of 0 on the right cycle
};

// Two biased n-cycles glued at vertex 0. Vertex ids: 0 is shared; left-cycle
// position i (1 <= i < n) is vertex i; right-cycle position i is vertex
// n - 1 + i. Clockwise is increasing position.
struct Gadget {
  GadgetSpec spec;
  EulerianMultigraph graph;
  std::vector<double> holding;
  GadgetLandmarks landmarks;

  VertexId left(std::size_t position) const;
  VertexId right(std::size_t position) const;
};

Gadget gen_two_cycle_gadget(const GadgetSpec& spec);

// Connected Eulerian digraph built by superposing random directed cycles
// (lengths uniform in [2, n], vertices distinct) until at least target_m arcs
// exist. With `simple` set, cycles that would repeat an existing arc are
// rejected, so the result has no parallel arcs. Deterministic in `seed`.
// Throws NumericalError if no connected graph is found within the retry budget.
EulerianMultigraph gen_random_eulerian(std::size_t n, std::uint64_t target_m, std::uint64_t seed,
                                       bool simple = false);

// Simple connected d-regular digraph: union of d random fixed-point-free
// permutations with no repeated arcs.
EulerianMultigraph gen_random_regular(std::size_t n, std::uint32_t d, std::uint64_t seed);

}  // namespace eulerlab
