#include "eulerlab/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eulerlab/error.hpp"
#include "eulerlab/explore.hpp"
#include "eulerlab/hitting.hpp"
#include "eulerlab/parallel.hpp"
#include "eulerlab/random.hpp"

namespace eulerlab {

long double golden_conjugate() {
  static const long double value = [] {
    const long double root5 = std::sqrt(5.0L);
    const long double x = (root5 - 1.0L) / 2.0L;
    const long double y = 2.0L / (root5 + 1.0L);
    if (std::abs(x - y) > 4 * std::numeric_limits<long double>::epsilon()) {
      throw NumericalError("golden conjugate identity fails in long double");
    }
    return x;
  }();
  return value;
}

long double ContinuedFraction::value() const {
  if (q.empty()) return 0.0L;
  return p.back() / q.back();
}

ContinuedFraction cf_expand(long double x, std::size_t depth) {
  if (depth > 40) throw InputError("continued fraction depth is limited to 40");
  if (!std::isfinite(static_cast<double>(x))) throw InputError("continued fraction of a non-finite value");
  constexpr long double kExhausted = 1e-12L;
  ContinuedFraction cf;
  long double a0 = std::floor(x);
  long double r = x - a0;
  cf.a.push_back(static_cast<std::int64_t>(a0));
  long double p_prev = 1.0L, p = a0, q_prev = 0.0L, q = 1.0L;
  cf.p.push_back(p);
  cf.q.push_back(q);
  for (std::size_t i = 0; i < depth && r > kExhausted; ++i) {
    const long double y = 1.0L / r;
    long double a = std::floor(y + kExhausted);
    r = std::max(0.0L, y - a);
    cf.a.push_back(static_cast<std::int64_t>(a));
    const long double p_next = a * p + p_prev;
    const long double q_next = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    cf.p.push_back(p);
    cf.q.push_back(q);
  }
  return cf;
}

GapReport sequence_gap(long double xi, std::uint64_t n) {
  if (n == 0) throw InputError("sequence_gap: n must be at least 1");
  std::vector<long double> pts(n);
  for (std::uint64_t k = 1; k <= n; ++k) {
    long double v = std::fmod(static_cast<long double>(k) * xi, 1.0L);
    if (v < 0) v += 1.0L;
    pts[k - 1] = v;
  }
  std::sort(pts.begin(), pts.end());
  GapReport out;
  long double gap = 1.0L - pts.back() + pts.front();
  for (std::size_t i = 1; i < pts.size(); ++i) gap = std::max(gap, pts[i] - pts[i - 1]);
  out.gap = static_cast<double>(gap);

  const long double width = 1.0L / static_cast<long double>(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // points in [pts[i], pts[i] + width), wrapping past 1
    if (j < i) j = i;
    auto at = [&](std::size_t idx) { return idx < n ? pts[idx] : pts[idx - n] + 1.0L; };
    while (j < i + n && at(j) < pts[i] + width) ++j;
    out.max_interval_count = std::max(out.max_interval_count, j - i);
  }
  return out;
}

GadgetMoments gadget_moments(std::size_t n, double alpha) {
  if (n == 0 || n % 4 != 0) throw InputError("gadget cycle length must be a positive multiple of 4");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("alpha must lie in [0, 1)");
  const double dn = static_cast<double>(n);
  const double x = std::exp2(-dn / 2.0);
  GadgetMoments m;
  // 3n 2^{-n/2}(2^{n/2} - 1)/(2^{n/2} - 2^{-n/2}) simplifies to 3n x / (1 + x).
  m.f_n = 1.5 * dn - 3.0 * dn * x / (1.0 + x);
  m.beta = 2.0 + 1.0 / (1.0 - alpha);
  m.mean_t1 = m.beta * m.f_n;
  m.mean_t2 = 4.0 * m.f_n;
  m.ratio = 2.0 * (m.beta - 4.0) / (m.beta + 4.0);
  return m;
}

double antipode_hitting_oracle(std::size_t n) {
  if (n < 4 || n % 2 != 0) throw InputError("antipode oracle needs an even n >= 4");
  LazyChain c = LazyChain::build(gen_biased_cycle(n, 2, 1), 0.0);
  return hitting_times_to(c, static_cast<VertexId>(n / 2))[0];
}

LazyChain single_cycle_chain(const GadgetSpec& spec, bool left) {
  if (spec.n < 4 || spec.n % 4 != 0) throw InputError("gadget cycle length must be a positive multiple of 4");
  std::vector<double> holding(spec.n, 0.5);
  if (left) {
    for (std::size_t pos = spec.n / 4 + 1; pos <= 3 * spec.n / 4; ++pos) holding[pos] = spec.alpha;
  }
  return LazyChain::build(gen_biased_cycle(spec.n, 2, 1), holding);
}

LazyChain gadget_chain(const Gadget& gadget) { return LazyChain::build(gadget.graph, gadget.holding); }

std::uint64_t sample_commute(const LazyChain& cycle, std::size_t n, Rng& rng) {
  const auto antipode = static_cast<VertexId>(n / 2);
  VertexId x = 0;
  std::uint64_t t = 0;
  while (x != antipode) {
    x = cycle.sample_step(x, rng);
    ++t;
  }
  while (x != 0) {
    x = cycle.sample_step(x, rng);
    ++t;
  }
  return t;
}

RoundSequence sample_rounds(const GadgetSpec& spec, std::size_t k, std::uint64_t seed) {
  const LazyChain left = single_cycle_chain(spec, true);
  const LazyChain right = single_cycle_chain(spec, false);
  Rng rng(seed);
  RoundSequence seq;
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    RoundSample r;
    r.xi = rng.coin();
    r.duration = sample_commute(r.xi ? left : right, spec.n, rng);
    sum += r.duration;
    seq.rounds.push_back(r);
    seq.partial_sums.push_back(sum);
  }
  return seq;
}

std::vector<std::uint64_t> gadget_round_times(const Gadget& gadget, const LazyChain& chain,
                                              std::size_t rho, Rng& rng) {
  std::vector<std::uint64_t> out;
  const VertexId a = gadget.landmarks.a, b = gadget.landmarks.b;
  VertexId x = 0;
  std::uint64_t t = 0;
  bool reached = false;
  while (out.size() < rho) {
    x = chain.sample_step(x, rng);
    ++t;
    if (x == a || x == b) reached = true;
    if (x == 0 && reached) {
      out.push_back(t);
      reached = false;
    }
  }
  return out;
}

namespace {

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> times) {
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

}  // namespace

std::vector<ReturnPoint> return_probability_profile(const GadgetSpec& spec,
                                                    std::vector<std::uint64_t> times,
                                                    ProfileSource source, std::uint64_t replicas,
                                                    std::uint64_t seed) {
  times = sorted_unique(std::move(times));
  const Gadget gadget = gen_two_cycle_gadget(spec);
  const LazyChain chain = gadget_chain(gadget);
  std::vector<ReturnPoint> out;
  if (times.empty()) return out;
  if (source == ProfileSource::exact) {
    if (chain.size() > 20000) throw InputError("exact return profile is limited to 2*10^4 states");
    Distribution mu = point_mass(chain.size(), 0);
    std::uint64_t now = 0;
    for (std::uint64_t t : times) {
      mu = chain.evolve(std::move(mu), t - now);
      now = t;
      out.push_back({t, mu[0]});
    }
    return out;
  }
  if (replicas == 0) throw InputError("replicas must be at least 1");
  std::vector<std::vector<char>> hits(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    Rng rng(derive_stream_seed(seed, i));
    hits[i].assign(times.size(), 0);
    VertexId x = 0;
    std::uint64_t t = 0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      for (; t < times[j]; ++t) x = chain.sample_step(x, rng);
      hits[i][j] = x == 0;
    }
  });
  for (std::size_t j = 0; j < times.size(); ++j) {
    std::uint64_t count = 0;
    for (const auto& h : hits) count += static_cast<std::uint64_t>(h[j]);
    out.push_back({times[j], static_cast<double>(count) / static_cast<double>(replicas)});
  }
  return out;
}

std::vector<ReturnPoint> round_sum_profile(const GadgetSpec& spec, std::vector<std::uint64_t> times,
                                           std::uint64_t replicas, std::uint64_t seed) {
  times = sorted_unique(std::move(times));
  std::vector<ReturnPoint> out;
  if (times.empty()) return out;
  if (replicas == 0) throw InputError("replicas must be at least 1");
  const LazyChain left = single_cycle_chain(spec, true);
  const LazyChain right = single_cycle_chain(spec, false);
  std::vector<std::vector<char>> hits(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    Rng rng(derive_stream_seed(seed, i));
    hits[i].assign(times.size(), 0);
    std::uint64_t s = 0;
    while (s <= times.back()) {
      s += sample_commute(rng.coin() ? left : right, spec.n, rng);
      auto it = std::lower_bound(times.begin(), times.end(), s);
      if (it != times.end() && *it == s) hits[i][static_cast<std::size_t>(it - times.begin())] = 1;
    }
  });
  for (std::size_t j = 0; j < times.size(); ++j) {
    std::uint64_t count = 0;
    for (const auto& h : hits) count += static_cast<std::uint64_t>(h[j]);
    out.push_back({times[j], static_cast<double>(count) / static_cast<double>(replicas)});
  }
  return out;
}

std::vector<double> killed_return_profile(const GadgetSpec& spec, std::uint64_t s_max) {
  const Gadget gadget = gen_two_cycle_gadget(spec);
  const LazyChain chain = gadget_chain(gadget);
  Distribution mu = point_mass(chain.size(), 0);
  std::vector<double> out{mu[0]};
  for (std::uint64_t s = 1; s <= s_max; ++s) {
    mu = chain.step(mu);
    mu[gadget.landmarks.a] = 0.0;
    mu[gadget.landmarks.b] = 0.0;
    out.push_back(mu[0]);
  }
  return out;
}

double kernel_spread(KernelPowers& powers, std::uint64_t t) {
  Eigen::MatrixXd m = powers.power(t);
  return m.maxCoeff() / m.minCoeff();
}

LineWalkReport line_walk_concentration(const std::vector<double>& holding_pattern, std::uint64_t t,
                                       std::uint64_t replicas, std::uint64_t seed,
                                       std::optional<double> c, unsigned workers) {
  if (holding_pattern.empty()) throw InputError("line walk needs a holding pattern");
  for (double h : holding_pattern) {
    if (!(h >= 0.0 && h < 1.0)) throw InputError("line walk holding must lie in [0, 1)");
  }
  if (t == 0) throw InputError("line walk needs t >= 1");
  if (replicas == 0) throw InputError("replicas must be at least 1");
  const auto len = static_cast<std::int64_t>(holding_pattern.size());
  auto hold = [&](std::int64_t x) { return holding_pattern[static_cast<std::size_t>(((x % len) + len) % len)]; };

  // e(y), s(y): mean and second moment of the passage time from y-1 to y.
  // Started far to the left at the homogeneous fixed point; the influence of
  // the start decays like 2^{-distance}.
  constexpr std::int64_t kLead = 200;
  double e_prev = 3.0 / (1.0 - hold(-kLead));
  double s_prev = 0.0;
  {
    // homogeneous second moment: s = (2e - 1 + q(s + 2e^2)) / p
    const double h = hold(-kLead);
    const double p = 2.0 * (1.0 - h) / 3.0, q = (1.0 - h) / 3.0;
    s_prev = (2.0 * e_prev - 1.0 + 2.0 * q * e_prev * e_prev) / (p - q);
  }
  for (std::int64_t y = -kLead + 1; y <= 0; ++y) {
    const double h = hold(y - 1);
    const double p = 2.0 * (1.0 - h) / 3.0, q = (1.0 - h) / 3.0;
    const double e = (1.0 + q * e_prev) / p;
    const double s = (2.0 * e - 1.0 + q * (s_prev + 2.0 * e_prev * e)) / p;
    e_prev = e;
    s_prev = s;
  }
  LineWalkReport rep;
  double mean = 0.0, var = 0.0, max_e = 0.0;
  for (std::int64_t y = 1;; ++y) {
    const double h = hold(y - 1);
    const double p = 2.0 * (1.0 - h) / 3.0, q = (1.0 - h) / 3.0;
    const double e = (1.0 + q * e_prev) / p;
    const double s = (2.0 * e - 1.0 + q * (s_prev + 2.0 * e_prev * e)) / p;
    max_e = std::max(max_e, e);
    if (mean + e >= static_cast<double>(t)) break;
    mean += e;
    var += s - e * e;
    rep.k = y;
    e_prev = e;
    s_prev = s;
  }
  rep.expected_tau_k = mean;
  rep.var_tau_k = var;
  const double root_t = std::sqrt(static_cast<double>(t));
  // Chebyshev: each tail of tau_k beyond c sqrt(t) - max_e has mass <= 5%.
  rep.c = c ? *c : (std::sqrt(var / 0.05) + max_e) / root_t;

  const double lo = static_cast<double>(rep.k) - rep.c * root_t;
  const double hi = static_cast<double>(rep.k) + rep.c * root_t;
  std::vector<char> inside(replicas, 0);
  parallel_for(
      replicas,
      [&](std::size_t i) {
        Rng rng(derive_stream_seed(seed, i));
        std::int64_t y = 0;
        for (std::uint64_t s = 0; s < t; ++s) {
          const double h = hold(y);
          const double u = rng.uniform();
          if (u < h) continue;
          y += (u < h + 2.0 * (1.0 - h) / 3.0) ? 1 : -1;
        }
        const double yd = static_cast<double>(y);
        inside[i] = yd >= lo && yd <= hi;
      },
      workers);
  std::uint64_t count = 0;
  for (char x : inside) count += static_cast<std::uint64_t>(x);
  const double reps = static_cast<double>(replicas);
  rep.coverage = static_cast<double>(count) / reps;
  rep.coverage_stderr = std::sqrt(rep.coverage * (1.0 - rep.coverage) / reps);
  return rep;
}

SensitivityReport sensitivity_experiment(const std::vector<std::size_t>& n_grid,
                                         const std::vector<double>& alphas, double epsilon,
                                         unsigned workers) {
  for (std::size_t n : n_grid) {
    if (n < 4 || n % 4 != 0) throw InputError("gadget sizes must be positive multiples of 4");
  }
  SensitivityReport rep;
  rep.alphas = alphas;
  const std::size_t jobs = n_grid.size() * alphas.size();
  rep.rows.resize(jobs);
  parallel_for(
      jobs,
      [&](std::size_t j) {
        const double alpha = alphas[j / n_grid.size()];
        const std::size_t n = n_grid[j % n_grid.size()];
        const Gadget g = gen_two_cycle_gadget({n, alpha});
        const ThresholdReport thr = mixing_thresholds(gadget_chain(g), epsilon);
        rep.rows[j] = {n, alpha, thr.t_mix.time, thr.t_unif.time};
      },
      workers);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    std::vector<double> ns, mix, unif;
    bool mix_ok = true, unif_ok = true;
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      const auto& row = rep.rows[a * n_grid.size() + i];
      ns.push_back(static_cast<double>(row.n));
      mix_ok = mix_ok && row.t_mix && *row.t_mix > 0;
      unif_ok = unif_ok && row.t_unif && *row.t_unif > 0;
      mix.push_back(row.t_mix ? static_cast<double>(*row.t_mix) : 0.0);
      unif.push_back(row.t_unif ? static_cast<double>(*row.t_unif) : 0.0);
    }
    const bool enough = ns.size() >= 2;
    rep.exponent_t_mix.push_back(enough && mix_ok ? fit_loglog_slope(ns, mix) : nan);
    rep.exponent_t_unif.push_back(enough && unif_ok ? fit_loglog_slope(ns, unif) : nan);
  }
  return rep;
}

}  // namespace eulerlab
