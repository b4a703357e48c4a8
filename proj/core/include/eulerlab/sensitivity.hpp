#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eulerlab/chain.hpp"
#include "eulerlab/graph.hpp"
#include "eulerlab/mixing.hpp"

namespace eulerlab {

// (sqrt 5 - 1) / 2, computed in long double; checked against 2 / (sqrt 5 + 1)
// on first use.
long double golden_conjugate();

struct ContinuedFraction {
  std::vector<std::int64_t> a;  // a_0; a_1, a_2, ...
  std::vector<long double> p, q;  // convergents p_i / q_i

  long double value() const;
};

// Expansion of x by the Gauss map, stopping early once the remainder is
// exhausted (rational input). depth counts coefficients after a_0 and is
// limited to 40 because the double-rounding error of the map grows
// geometrically.
ContinuedFraction cf_expand(long double x, std::size_t depth);

struct GapReport {
  double gap = 0.0;  // largest cyclic spacing of {k xi mod 1 : 1 <= k <= n}
  std::size_t max_interval_count = 0;  // most points in a half-open window of length 1/n
};

GapReport sequence_gap(long double xi, std::uint64_t n);

struct GadgetMoments {
  double f_n = 0.0;     // expected non-lazy biased hitting time of the antipode
  double mean_t1 = 0.0;  // commute time on the cycle with holding alpha on the middle half
  double mean_t2 = 0.0;  // commute time on the cycle with holding 1/2
  double beta = 0.0;     // mean_t1 / f_n
  double ratio = 0.0;    // 2 (beta - 4) / (beta + 4)
};

// f(n) = 3n/2 - 3n / (2^{n/2} + 1)
GadgetMoments gadget_moments(std::size_t n, double alpha);

// H(0, n/2) for the non-lazy (2/3, 1/3) walk on Z_n, by linear solve.
double antipode_hitting_oracle(std::size_t n);

// Walk on a single n-cycle of the gadget. left = true applies alpha on
// positions n/4 + 1 .. 3n/4, otherwise holding is 1/2 everywhere.
LazyChain single_cycle_chain(const GadgetSpec& spec, bool left);
LazyChain gadget_chain(const Gadget& gadget);

struct RoundSample {
  bool xi = false;  // true: the round used the left cycle
  std::uint64_t duration = 0;
};

struct RoundSequence {
  std::vector<RoundSample> rounds;
  std::vector<std::uint64_t> partial_sums;  // S_1..S_k
};

// One commute excursion 0 -> antipode -> 0 on a single cycle.
std::uint64_t sample_commute(const LazyChain& cycle, std::size_t n, Rng& rng);
RoundSequence sample_rounds(const GadgetSpec& spec, std::size_t k, std::uint64_t seed);

// Times at which the full gadget walk from 0 completes rounds 1..rho (a
// round ends at the first return to 0 after hitting either antipode).
std::vector<std::uint64_t> gadget_round_times(const Gadget& gadget, const LazyChain& chain,
                                              std::size_t rho, Rng& rng);

enum class ProfileSource { exact, mc };

struct ReturnPoint {
  std::uint64_t t = 0;
  double p = 0.0;  // P_0(X_t = 0)
};

std::vector<ReturnPoint> return_probability_profile(const GadgetSpec& spec,
                                                    std::vector<std::uint64_t> times,
                                                    ProfileSource source,
                                                    std::uint64_t replicas = 10000,
                                                    std::uint64_t seed = 1);

// Empirical sum_k P(S_k = t) at the requested times.
std::vector<ReturnPoint> round_sum_profile(const GadgetSpec& spec, std::vector<std::uint64_t> times,
                                           std::uint64_t replicas, std::uint64_t seed);

// Exact P_0(X_s = 0, tau_a and tau_b > s) for s = 0..s_max.
std::vector<double> killed_return_profile(const GadgetSpec& spec, std::uint64_t s_max);

// max over (x,y) of P^t(x,y) divided by the min over (x,y).
double kernel_spread(KernelPowers& powers, std::uint64_t t);

struct LineWalkReport {
  std::int64_t k = 0;          // largest k with E_0 tau_k < t
  double expected_tau_k = 0.0;
  double var_tau_k = 0.0;
  double c = 0.0;              // half-width multiplier actually used
  double coverage = 0.0;       // P(Y_t in [k - c sqrt t, k + c sqrt t])
  double coverage_stderr = 0.0;
};

// Birth-and-death chain on Z from 0 with holding h(x) = pattern[x mod len],
// up-probability 2(1 - h)/3 and down-probability (1 - h)/3. Passage-time
// means and variances come from the exact one-site recursions; when c is
// not given it is picked by Chebyshev for 90% coverage.
LineWalkReport line_walk_concentration(const std::vector<double>& holding_pattern, std::uint64_t t,
                                       std::uint64_t replicas, std::uint64_t seed,
                                       std::optional<double> c = std::nullopt,
                                       unsigned workers = 0);

struct SensitivityRow {
  std::size_t n = 0;
  double alpha = 0.0;
  std::optional<std::uint64_t> t_mix;
  std::optional<std::uint64_t> t_unif;
};

struct SensitivityReport {
  std::vector<SensitivityRow> rows;
  std::vector<double> alphas;
  std::vector<double> exponent_t_mix;   // per alpha; NaN when a point was not reached
  std::vector<double> exponent_t_unif;
};

SensitivityReport sensitivity_experiment(const std::vector<std::size_t>& n_grid,
                                         const std::vector<double>& alphas, double epsilon = 0.25,
                                         unsigned workers = 0);

}  // namespace eulerlab
