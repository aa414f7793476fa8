#pragma once

// Seeded randomized property suites for the series kernel, the group-law
// logarithm and the phi-basis division.

#include <string>

#include "fglab/padic.hpp"

namespace fglab {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  u64 seed = 0;
  int D = 0;
  int N = 0;
  /// Description of the first failing case, empty when all pass.
  std::string first_failure;
  bool ok() const { return cases > 0 && failures == 0; }
};

/// f o rev(f) = rev(f) o f = X for random f = uX + ..., u a unit.
SuiteResult reversion_suite(u64 p, int f, int N, int D, int cases, u64 seed);
/// exp o log = X and log F(g, h) = log g + log h for random Lubin-Tate laws,
/// at precision N - floor(log_p(D - 1)).
SuiteResult log_exp_suite(u64 p, int N, int D, int cases, u64 seed);
/// f o (g o h) = (f o g) o h for random f and g, h without constant term.
SuiteResult compose_assoc_suite(u64 p, int f, int N, int D, int cases, u64 seed);
/// Random series over W(F_q) at D = 9q decomposed over phi = ([p]: pX + X^q)
/// and reconstructed on the certified window; also checks that 0 maps to 0.
SuiteResult phi_decompose_suite(u64 p, int f, int N, int cases, u64 seed);

}  // namespace fglab
