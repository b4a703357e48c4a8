#include "eulerlab/corpus.hpp"

#include <algorithm>
#include <array>

#include "eulerlab/random.hpp"
#include "eulerlab/sensitivity.hpp"

namespace eulerlab {

namespace {

CorpusEntry entry(std::string name, std::string family, EulerianMultigraph g) {
  std::vector<double> holding(g.vertex_count(), 0.5);
  return {std::move(name), std::move(family), std::move(g), std::move(holding)};
}

std::string sized(const std::string& stem, std::size_t n) { return stem + "-n" + std::to_string(n); }

}  // namespace

std::vector<CorpusEntry> small_corpus(std::uint64_t seed) {
  std::vector<CorpusEntry> out;
  for (std::size_t n : {3u, 5u, 8u, 12u}) out.push_back(entry(sized("cycle", n), "cycle", gen_directed_cycle(n)));
  for (std::size_t n : {3u, 6u, 10u}) out.push_back(entry(sized("biased", n), "biased", gen_biased_cycle(n, 2, 1)));
  std::uint64_t stream = 0;
  for (std::size_t n : {4u, 6u, 8u, 10u, 12u}) {
    out.push_back(entry(sized("random", n), "random",
                        gen_random_eulerian(n, 2 * n, derive_stream_seed(seed, stream++))));
    out.push_back(entry(sized("random-simple", n), "random-simple",
                        gen_random_eulerian(n, std::min(2 * n, n * (n - 1) / 2),
                                            derive_stream_seed(seed, stream++), true)));
  }
  for (double alpha : {0.5, static_cast<double>(golden_conjugate())}) {
    Gadget g = gen_two_cycle_gadget({4, alpha});
    out.push_back({alpha == 0.5 ? "gadget-n4-half" : "gadget-n4-golden", "gadget", g.graph, g.holding});
  }
  return out;
}

std::vector<CorpusEntry> density_corpus(std::size_t count, std::uint64_t seed) {
  std::vector<CorpusEntry> out;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 4 + i % 9;
    const std::size_t hi = std::max(n, std::min(3 * n, n * (n - 1) / 3));
    const std::size_t m = n + rng.below(hi - n + 1);
    out.push_back(entry("dense-" + std::to_string(i) + "-n" + std::to_string(n) + "-m" + std::to_string(m),
                        "random-simple", gen_random_eulerian(n, m, derive_stream_seed(seed, i), true)));
  }
  return out;
}

std::vector<CorpusEntry> regular_corpus(const std::vector<std::size_t>& sizes, std::uint64_t seed) {
  std::vector<CorpusEntry> out;
  const std::array<std::size_t, 2> steps{1, 2};
  for (std::size_t n : sizes) {
    out.push_back(entry(sized("cycle", n), "cycle", gen_directed_cycle(n)));
    out.push_back(entry(sized("circulant12", n), "circulant", gen_circulant(n, steps)));
    out.push_back(entry(sized("regular3", n), "regular", gen_random_regular(n, 3, derive_stream_seed(seed, n))));
  }
  return out;
}

std::vector<CorpusEntry> general_corpus(const std::vector<std::size_t>& sizes, std::uint64_t seed) {
  std::vector<CorpusEntry> out;
  for (std::size_t n : sizes) {
    out.push_back(entry(sized("random-simple", n), "random-simple",
                        gen_random_eulerian(n, 3 * n, derive_stream_seed(seed, 2 * n), true)));
    out.push_back(entry(sized("random", n), "random",
                        gen_random_eulerian(n, 3 * n, derive_stream_seed(seed, 2 * n + 1))));
    out.push_back(entry(sized("biased", n), "biased", gen_biased_cycle(n, 2, 1)));
  }
  return out;
}

}  // namespace eulerlab
