#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eulerlab/chain.hpp"

namespace eulerlab {

// (1/2) sum_{v,w} (f(v) - f(w))^2 pi(v) P(v,w)
double dirichlet_energy(const LazyChain& c, std::span<const double> f);
double pi_variance(const Distribution& pi, std::span<const double> f);
double pi_norm_squared(const Distribution& pi, std::span<const double> f);

using VertexSet = std::vector<VertexId>;

struct SetSpectrum {
  VertexSet subset;
  double pi_mass = 0.0;
  double lambda = 0.0;  // 1 - rho
  double rho = 0.0;     // Perron value of Q restricted to S
  Distribution nu;      // quasi-stationary law on S (indexed like `subset`)
  std::vector<double> right;  // right Perron vector, pi-normalized (indexed like `subset`)
  double mean_exit_nu = 0.0;  // E_nu[exit time of S] under Q
  double max_exit = 0.0;      // max_{v in S} E_v[exit time of S] under Q
  std::uint64_t iterations = 0;
  double residual = 0.0;
};

// Power iteration on the symmetrized substochastic block of the additive
// reversibilization. Throws NumericalError when the residual does not reach
// the tolerance within the budget, or when the exit-time cross-check fails.
class SetSpectrumSolver {
 public:
  explicit SetSpectrumSolver(const LazyChain& c);

  const LazyChain& reversibilization() const { return q_; }
  SetSpectrum solve(const VertexSet& s) const;

  double tolerance = 1e-12;
  std::uint64_t max_iterations = 1'000'000;
  double cross_check_tolerance = 1e-9;

 private:
  LazyChain q_;
};

SetSpectrum lambda_of_set(const LazyChain& c, const VertexSet& s);

enum class ProfileMode { exact, connected_only };

struct ProfileBreakpoint {
  double r = 0.0;       // pi mass of the witness
  double value = 0.0;   // Lambda(r) from here up to the next breakpoint
  VertexSet witness;
};

// Lambda(r) = min { lambda(S) : pi_* <= pi(S) <= r } as a right-continuous
// step function, constant beyond the last breakpoint.
struct SpectralProfile {
  std::vector<ProfileBreakpoint> breakpoints;
  double pi_star = 0.0;
  std::uint64_t subsets_evaluated = 0;

  double value_at(double r) const;
};

// Enumerates nonempty proper subsets (n <= 20). connected_only skips sets
// whose induced support graph under Q is disconnected; those never lower
// the envelope.
SpectralProfile spectral_profile(const LazyChain& c, ProfileMode mode = ProfileMode::connected_only,
                                 unsigned workers = 0);

struct GmtPiece {
  double r_lo = 0.0, r_hi = 0.0, lambda = 0.0, contribution = 0.0;
};

struct GmtBound {
  std::uint64_t bound_steps = 0;
  double integral = 0.0;
  std::vector<GmtPiece> trace;
};

// 2 * ceil( int_{4 pi_*}^{4/a} dr / (delta r Lambda(r)) ), summed exactly
// over the steps of the profile.
GmtBound gmt_bound(const LazyChain& c, const SpectralProfile& profile, double a);

// C m / sqrt(t) for t <= n^2 and C m n / t beyond; with `regular`, C n / sqrt(t)
// for all t.
double short_time_bound(std::uint64_t n, std::uint64_t m, std::uint64_t t, bool regular, double c);

// Smallest C for which short_time_bound dominates |P^t(u,v)/pi(v) - 1| for
// all u, v and 1 <= t <= t_max.
double short_time_constant(const LazyChain& c, std::uint64_t n, std::uint64_t m,
                           std::uint64_t t_max, bool regular);

}  // namespace eulerlab
