#pragma once

#include <stdexcept>
#include <string>

namespace eulerlab {

// Malformed input: bad graph files, out-of-range parameters, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to meet its own tolerance (singular solve,
// non-converged power iteration, non-stochastic row).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An online audit observed a violated invariant. The message carries a
// counterexample dump.
class AuditViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eulerlab
