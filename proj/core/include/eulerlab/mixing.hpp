#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "eulerlab/chain.hpp"

namespace eulerlab {

double tv_distance(const Distribution& mu, const Distribution& nu);

// Worst-start distances of the rows of a kernel power M = P^t.
double worst_tv(const Eigen::MatrixXd& m, const Distribution& pi);
double worst_relative(const Eigen::MatrixXd& m, const Distribution& pi);
// max over row pairs of the total variation between rows
double worst_row_pair_tv(const Eigen::MatrixXd& m);

struct DistanceProfile {
  std::vector<std::uint64_t> times;
  std::vector<double> d1;    // max_x TV(P^t(x,.), pi)
  std::vector<double> dinf;  // max_{x,y} |P^t(x,y)/pi(y) - 1|
  std::vector<double> dbar;  // max_{x,x'} TV(P^t(x,.), P^t(x',.)); empty unless requested
};

// Exact profile at strictly increasing times, obtained by advancing the full
// matrix of point-mass evolutions between checkpoints.
DistanceProfile distance_profile(const LazyChain& c, const std::vector<std::uint64_t>& times,
                                 bool with_dbar = false);

enum class Metric { tv, linf };

struct ThresholdResult {
  std::optional<std::uint64_t> time;  // empty when not reached by the cap
  std::uint64_t cap = 0;
  double value_at_time = 0.0;  // distance at the reported time (or at the cap)
};

struct ThresholdReport {
  double epsilon = 0.25;
  ThresholdResult t_mix;
  ThresholdResult t_unif;
};

// Caches P^(2^j) as dense matrices and evaluates P^t by binary composition.
class KernelPowers {
 public:
  explicit KernelPowers(const LazyChain& c);

  const LazyChain& chain() const { return *chain_; }
  // P^(2^j), computed on demand by repeated squaring.
  const Eigen::MatrixXd& power_of_two(unsigned j);
  Eigen::MatrixXd power(std::uint64_t t);
  // m P^dt, mixing sparse single steps and cached dense powers by cost.
  Eigen::MatrixXd advance(Eigen::MatrixXd m, std::uint64_t dt);

 private:
  const LazyChain* chain_;
  std::vector<Eigen::MatrixXd> powers_;
};

double distance(const Eigen::MatrixXd& m, const Distribution& pi, Metric metric);

// Smallest t with d(t) <= epsilon. Both d1 and dinf are nonincreasing in t,
// so the search doubles t until the target is met and then fixes the bits of
// the answer from the top down. cap = 0 means 64 n^3.
ThresholdResult threshold_time(KernelPowers& powers, Metric metric, double epsilon,
                               std::uint64_t cap = 0);
ThresholdResult threshold_time(const LazyChain& c, Metric metric, double epsilon,
                               std::uint64_t cap = 0);
ThresholdReport mixing_thresholds(const LazyChain& c, double epsilon, std::uint64_t cap = 0);

struct SubmultiplicativityCheck {
  std::uint64_t s = 0, t = 0;
  double lhs = 0.0;      // dinf(s + t)
  double rhs = 0.0;      // dinf(s) * max_x ||P^t(x,.) - pi||_1
  bool holds = false;
  double tv_rhs = 0.0;   // dinf(s) * d1(t), the total-variation reading
  bool tv_holds = false;
};

SubmultiplicativityCheck submultiplicativity_audit(KernelPowers& powers, std::uint64_t s,
                                                   std::uint64_t t);

}  // namespace eulerlab
