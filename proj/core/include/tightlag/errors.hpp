#pragma once

#include <stdexcept>

namespace tightlag {

/// A numerical contract failed (unstable rank, rank-deficient chart,
/// non-convergent refinement).  The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A verified property did not hold (expected-tight surface with violations,
/// mismatched replay counts).  The CLI maps this to exit code 1.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tightlag
