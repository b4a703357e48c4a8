#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eulerlab/graph.hpp"

namespace eulerlab {

struct CorpusEntry {
  std::string name;
  std::string family;  // cycle, biased, random, random-simple, regular, circulant, gadget
  EulerianMultigraph graph;
  std::vector<double> holding;  // per-vertex holding of the lazy walk
};

// n <= 12, holding 1/2 (gadget: its own holding): directed and biased
// cycles, random Eulerian multigraphs and simple digraphs, the n = 4 gadget.
std::vector<CorpusEntry> small_corpus(std::uint64_t seed = 1);

// Random simple Eulerian digraphs with n in [4, 12] and m spread over
// [n, min(3n, n(n-1)/3)], holding 1/2.
std::vector<CorpusEntry> density_corpus(std::size_t count = 36, std::uint64_t seed = 7);

// Regular simple digraphs at each size: directed cycle, circulant {1, 2},
// random 3-regular. Holding 1/2.
std::vector<CorpusEntry> regular_corpus(const std::vector<std::size_t>& sizes, std::uint64_t seed = 3);

// Eulerian digraphs outside the regular families, at each size: random
// simple with m = 3n, random multigraph with m = 3n, biased cycle (2, 1)
// (degree-regular as a multigraph). Holding 1/2.
std::vector<CorpusEntry> general_corpus(const std::vector<std::size_t>& sizes, std::uint64_t seed = 5);

}  // namespace eulerlab
