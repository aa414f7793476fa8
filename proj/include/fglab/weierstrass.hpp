#pragma once

// Weierstrass preparation, the division of O_K[[X]] over phi(O_K[[X]]) with
// basis 1, X, ..., X^{q-1} (phi(a) = a([pi](X))), and division polynomials.

#include <vector>

#include "fglab/formal_group.hpp"
#include "fglab/series.hpp"

namespace fglab {

struct WeierstrassData {
  /// Monic, degree d, stored at truncation d + 1.
  TruncSeries1 P;
  /// Unit with f = P * U modulo X^window.
  TruncSeries1 U;
  int d = 0;
  int window = 0;
};

struct PrepOptions {
  /// f is a polynomial whose terms all sit below its truncation; the result is
  /// then exact on the full truncation.
  bool exact_polynomial = false;
  /// Starting value for 1/U; the default is the inverse of f_{>=d} / X^d.
  const TruncSeries1* start = nullptr;
};

/// f = P * U with P distinguished of degree d = first unit index of f.
/// For truncated f the unit is guaranteed to degree D - N*d.
/// Throws PrecisionError when no coefficient below D is a unit or the
/// guaranteed window does not cover P.
WeierstrassData weierstrass_prep(const TruncSeries1& f, const PrepOptions& opt = {});

struct Claim22Step {
  /// Digit representatives (coefficients in [0, p)) of f_0, ..., f_{q-1} mod p.
  std::vector<UnramifiedRingElem> a;
  TruncSeries1 g;
  /// Determined modulo p^{N-1}; its top digit is zero.
  TruncSeries1 f1;
  /// f = sum a_i X^i + piSeries * g + p * f1 holds modulo X^window.
  int window = 0;
};

/// One step of the division: f = sum_{i<q} a_i X^i + [pi] g + p f1.  `prep`
/// must be the preparation of piSeries, with P of degree q.
Claim22Step claim22_step(const TruncSeries1& f, const TruncSeries1& piSeries, const WeierstrassData& prep);
Claim22Step claim22_step(const TruncSeries1& f, const TruncSeries1& piSeries, int q);

struct PhiDecomposition {
  /// a_0, ..., a_{q-1}, each at truncation `levels`.
  std::vector<TruncSeries1> a;
  int q = 0;
  /// floor(D / q): number of X-adic levels produced.
  int levels = 0;
  /// Degree k coefficients of the a_i are determined by f mod X^D only modulo
  /// p^min(N, levels - k); below this degree they are exact mod p^N.
  int exact_degree = 0;
  /// sum phi(a_i) X^i == f modulo (X^recon_window, p^N).
  int recon_window = 0;
  /// Total number of claim22 steps run.
  int n_iter = 0;
};

/// Decomposes f (truncation D) as sum_i phi(a_i) X^i.  `piSeries` is the
/// [pi]-series; when `pi_is_polynomial` is false it must be known to degree
/// q*(D/q + N + 1) + N*q, otherwise PrecisionError.
PhiDecomposition phi_basis_decompose(const TruncSeries1& f, const TruncSeries1& piSeries, int q,
                                     bool pi_is_polynomial);
/// sum_i a_i([pi](X)) X^i at truncation D.
TruncSeries1 phi_reconstruct(const std::vector<TruncSeries1>& a, const TruncSeries1& piSeries, int D);

struct DivisionPolynomial {
  int n = 0;
  /// Monic distinguished of degree e (q^{n-1}(q-1) for a module of height
  /// log_p q), stored at truncation e + 1.
  TruncSeries1 P;
  TruncSeries1 U;
  int e = 0;
  /// Weierstrass degree of [p^n].
  int full_degree = 0;
  int D = 0;
};

/// Weierstrass polynomial of ([p](Y)/Y)(Y = [p^{n-1}](X)) for the [p]-series
/// of the module.  D = 0 picks a truncation that makes P exact.
DivisionPolynomial division_polynomial(const FormalModule& G, int n, int D = 0);

/// [p^n] to degree D by iterated composition.
TruncSeries1 p_power_series(const FormalModule& G, int n, int D);

}  // namespace fglab
