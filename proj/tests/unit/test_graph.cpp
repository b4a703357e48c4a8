#include <gtest/gtest.h>

#include <sstream>

#include "eulerlab/error.hpp"
#include "eulerlab/graph.hpp"
#include "eulerlab/graph_io.hpp"
#include "eulerlab/sensitivity.hpp"

using namespace eulerlab;

TEST(Validate, DirectedTriangle) {
  auto r = validate(gen_directed_cycle(3));
  EXPECT_TRUE(r.eulerian);
  EXPECT_TRUE(r.connected);
  ASSERT_TRUE(r.regular_degree);
  EXPECT_EQ(*r.regular_degree, 1u);
}

TEST(Validate, SingleEdgeIsNotEulerian) {
  std::vector<EdgeGroup> e{{0, 1, 1}};
  auto r = validate(EulerianMultigraph(2, e));
  EXPECT_FALSE(r.eulerian);
  EXPECT_TRUE(r.connected);
  EXPECT_FALSE(r.regular_degree);
}

TEST(Validate, BiasedCycleIsThreeRegular) {
  auto r = validate(gen_biased_cycle(8, 2, 1));
  EXPECT_TRUE(r.eulerian);
  ASSERT_TRUE(r.regular_degree);
  EXPECT_EQ(*r.regular_degree, 3u);
}

TEST(Validate, DisconnectedUnion) {
  std::vector<EdgeGroup> e{{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}};
  auto r = validate(EulerianMultigraph(4, e));
  EXPECT_TRUE(r.eulerian);
  EXPECT_FALSE(r.connected);
}

TEST(Multigraph, RejectsBadInput) {
  std::vector<EdgeGroup> out_of_range{{0, 5, 1}};
  EXPECT_THROW(EulerianMultigraph(3, out_of_range), InputError);
  std::vector<EdgeGroup> zero{{0, 1, 0}};
  EXPECT_THROW(EulerianMultigraph(3, zero), InputError);
}

TEST(Multigraph, MergesDuplicateGroups) {
  std::vector<EdgeGroup> e{{0, 1, 1}, {0, 1, 2}, {1, 0, 3}};
  EulerianMultigraph g(2, e);
  EXPECT_EQ(g.multiplicity(0, 1), 3u);
  EXPECT_EQ(g.edge_count(), 6u);
  EXPECT_FALSE(g.is_simple());
}

TEST(BiasedCycle, Counts) {
  auto g3 = gen_biased_cycle(3, 1, 1);
  EXPECT_EQ(g3.edge_count(), 6u);
  auto g4 = gen_biased_cycle(4, 2, 1);
  for (VertexId v = 0; v < 4; ++v) {
    EXPECT_EQ(g4.out_degree(v), 3u);
    EXPECT_EQ(g4.in_degree(v), 3u);
  }
  EXPECT_EQ(g4.multiplicity(1, 2), 2u);
  EXPECT_EQ(g4.multiplicity(1, 0), 1u);
  EXPECT_THROW(gen_biased_cycle(2, 1, 1), InputError);
  EXPECT_THROW(gen_biased_cycle(5, 0, 1), InputError);
}

TEST(Gadget, Shape) {
  Gadget g = gen_two_cycle_gadget({8, 0.5});
  EXPECT_EQ(g.graph.vertex_count(), 15u);
  EXPECT_EQ(g.graph.out_degree(0), 6u);
  for (VertexId v = 1; v < 15; ++v) EXPECT_EQ(g.graph.out_degree(v), 3u);
  EXPECT_TRUE(validate(g.graph).eulerian);
  for (double a : g.holding) EXPECT_EQ(a, 0.5);
  EXPECT_EQ(g.landmarks.a, 4u);
  EXPECT_EQ(g.landmarks.b, 11u);
  EXPECT_THROW(gen_two_cycle_gadget({6, 0.5}), InputError);
  EXPECT_THROW(gen_two_cycle_gadget({8, 1.0}), InputError);
}

TEST(Gadget, GoldenSitesOnHalfTheCycle) {
  const double golden = static_cast<double>(golden_conjugate());
  Gadget g = gen_two_cycle_gadget({8, golden});
  std::size_t count = 0;
  for (VertexId v = 0; v < g.holding.size(); ++v) {
    if (g.holding[v] == golden) {
      ++count;
      EXPECT_GE(v, 3u);
      EXPECT_LE(v, 6u);
    }
  }
  EXPECT_EQ(count, 4u);
}

TEST(Gadget, ArcsFollowPositions) {
  Gadget g = gen_two_cycle_gadget({8, 0.5});
  EXPECT_EQ(g.graph.multiplicity(0, g.left(1)), 2u);
  EXPECT_EQ(g.graph.multiplicity(0, g.left(7)), 1u);
  EXPECT_EQ(g.graph.multiplicity(0, g.right(1)), 2u);
  EXPECT_EQ(g.graph.multiplicity(0, g.right(7)), 1u);
  EXPECT_EQ(g.graph.multiplicity(g.left(7), 0), 2u);
  EXPECT_EQ(g.graph.multiplicity(g.right(3), g.right(2)), 1u);
}

TEST(RandomEulerian, SingleSpanningCycle) {
  // Some seed yields one 5-cycle; every result with m = 5 must be a single Hamiltonian cycle.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = gen_random_eulerian(5, 5, seed);
    auto r = validate(g);
    EXPECT_TRUE(r.eulerian && r.connected);
    if (g.edge_count() == 5) {
      for (VertexId v = 0; v < 5; ++v) EXPECT_EQ(g.out_degree(v), 1u);
    }
  }
}

TEST(RandomEulerian, ValidAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = gen_random_eulerian(8, 24, seed);
    auto r = validate(g);
    EXPECT_TRUE(r.eulerian);
    EXPECT_TRUE(r.connected);
    EXPECT_GE(g.edge_count(), 24u);
    EXPECT_FALSE(g.has_self_loops());
    EXPECT_EQ(g.edge_groups(), gen_random_eulerian(8, 24, seed).edge_groups());
  }
}

TEST(RandomEulerian, SimpleFlag) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = gen_random_eulerian(7, 14, seed, true);
    EXPECT_TRUE(g.is_simple());
    EXPECT_TRUE(validate(g).eulerian);
  }
  EXPECT_THROW(gen_random_eulerian(4, 13, 1, true), InputError);
}

TEST(RandomRegular, SimpleConnectedRegular) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = gen_random_regular(16, 3, seed);
    auto r = validate(g);
    ASSERT_TRUE(r.regular_degree);
    EXPECT_EQ(*r.regular_degree, 3u);
    EXPECT_TRUE(r.connected);
    EXPECT_TRUE(g.is_simple());
    EXPECT_FALSE(g.has_self_loops());
  }
}

TEST(Reverse, Involution) {
  auto g = gen_random_eulerian(9, 30, 4);
  auto r = reverse(g);
  EXPECT_EQ(reverse(r), g);
  EXPECT_EQ(r.edge_count(), g.edge_count());
  for (VertexId v = 0; v < 9; ++v) {
    EXPECT_EQ(r.out_degree(v), g.in_degree(v));
    EXPECT_EQ(r.in_degree(v), g.out_degree(v));
  }
  auto b = reverse(gen_biased_cycle(5, 2, 1));
  EXPECT_EQ(b, gen_biased_cycle(5, 1, 2));
  auto c = reverse(gen_directed_cycle(3));
  EXPECT_EQ(c.multiplicity(1, 0), 1u);
  EXPECT_EQ(c.multiplicity(0, 1), 0u);
}

TEST(Distance, Undirected) {
  auto g = gen_directed_cycle(10);
  EXPECT_EQ(undirected_distance(g, 3, 3), 0u);
  EXPECT_EQ(undirected_distance(g, 1, 0), 1u);
  EXPECT_EQ(undirected_distance(g, 0, 5), 5u);
  std::vector<EdgeGroup> e{{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}};
  EXPECT_THROW(undirected_distance(EulerianMultigraph(4, e), 0, 3), InputError);
}

TEST(Connectivity, StrongAgreesWithUndirectedOnEulerian) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = gen_random_eulerian(3 + seed % 10, 3 + seed % 10 + seed % 7, seed);
    EXPECT_EQ(is_strongly_connected(g), is_connected(undirected_view(g)));
  }
  std::vector<EdgeGroup> e{{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}};
  EulerianMultigraph split(4, e);
  EXPECT_FALSE(is_strongly_connected(split));
  EXPECT_FALSE(is_connected(undirected_view(split)));
}

TEST(GraphIo, RoundTripIsByteExact) {
  Gadget g = gen_two_cycle_gadget({8, static_cast<double>(golden_conjugate())});
  const std::string text = to_text(g.graph, g.holding);
  std::istringstream in(text);
  GraphFile f = read_graph(in);
  EXPECT_EQ(f.graph, g.graph);
  EXPECT_EQ(f.holding, g.holding);
  EXPECT_EQ(to_text(f.graph, f.holding), text);
}

TEST(GraphIo, CommentsAndDefaults) {
  std::istringstream in(
      "# triangle\n"
      "eul 3 3   # header\n"
      "0 1 1\n1 2 1\n\n2 0 1\n"
      "holding\n1 0.25\n");
  GraphFile f = read_graph(in);
  EXPECT_EQ(f.graph.vertex_count(), 3u);
  ASSERT_EQ(f.holding.size(), 3u);
  EXPECT_EQ(f.holding[0], 0.5);
  EXPECT_EQ(f.holding[1], 0.25);
}

TEST(GraphIo, Errors) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_graph(in);
  };
  EXPECT_THROW(parse(""), InputError);
  EXPECT_THROW(parse("eul 3 2\n0 1 1\n"), InputError);
  EXPECT_THROW(parse("eul 2 1\n0 7 1\n"), InputError);
  EXPECT_THROW(parse("eul 2 1\n0 1\n"), InputError);
  EXPECT_THROW(parse("eul 2 2\n0 1 1\n1 0 1\nholding\n0 1.0\n"), InputError);
  EXPECT_THROW(parse("graph 2 2\n"), InputError);
}
