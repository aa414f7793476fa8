#pragma once

// Endomorphisms detected from the group law alone: g = exp(a log X) with an
// integrality check, the residue degree f_F of the endomorphism subfield,
// the full-height predicate and the finite-order automorphism tau_infinity.

#include <optional>
#include <string>
#include <vector>

#include "fglab/formal_group.hpp"

namespace fglab {

/// Linear coefficient of an endomorphism series.
UnramifiedRingElem c_map(const TruncSeries1& g);

struct EndoAttempt {
  /// Exact modulo (X^D, p^N_eff) and verified against the law there.
  std::optional<TruncSeries1> series;
  /// First degree at which a coefficient fails to be integral, -1 on success.
  int first_obstruction = -1;
  int D = 0;
  int N_eff = 0;
};

/// Solves log(g) = a log(X) over the ring of F to degree F.D().  The effective
/// precision is N - floor(log_p(D - 1)); PrecisionError when it is below 3.
EndoAttempt try_endomorphism(const TruncSeries2& F, const ExactScalar& a);

struct EndoOptions {
  /// Truncation; 0 picks 4 p^h + 1.
  int D = 0;
  /// Working precision; 0 picks the least N >= the group's with N_eff >= 3.
  int N = 0;
};

struct EndoCandidate {
  /// "p" or "T(F_{p^d})".
  std::string label;
  ExactScalar a;
  /// Residue degree of the subfield generated; 0 for the candidate p.
  int d = 0;
  bool success = false;
  int first_obstruction = -1;
};

struct EndoReport {
  int h = 0;
  int f = 0;
  int D = 0;
  int N = 0;
  int N_eff = 0;
  std::vector<EndoCandidate> candidates;
  int f_F = 0;
  bool full_height = false;
};

/// Tests p and the Teichmuller generator of F_{p^d} for each divisor d of
/// gcd(f, h), largest first; f_F is the largest d that succeeds.
EndoReport compute_endo_subfield(const FormalModule& G, const EndoOptions& opt = {});

struct TauCertificate {
  bool exists = false;
  std::string reason;
  /// Teichmuller generator of mu_{q-1}, q = p^h.
  std::string zeta;
  int q = 0;
  /// Least k >= 1 with tau^{o k} = X, 0 when none up to q - 1.
  int order = 0;
  int D = 0;
  int N_eff = 0;
  std::optional<TruncSeries1> tau;
};

/// Looks for tau = zeta X + ... in End(G) with tau^{o(q-1)} = X, from the law.
TauCertificate tau_infinity_search(const FormalModule& G, const EndoOptions& opt = {});
/// Same, for a group already known to be of full height; PreconditionError otherwise.
TauCertificate tau_infinity_check(const FormalModule& G, const EndoReport& report, const EndoOptions& opt = {});

}  // namespace fglab
