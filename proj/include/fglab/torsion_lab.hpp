#pragma once

// Torsion-field models K(z) = K[X]/(P_n), Newton polygons, exact valuations
// and the torsion checks built on them: degree and cardinality certificates,
// the generation test for F[p^n] inside K(z), ramification breaks and mu_p.

#include <boost/rational.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fglab/formal_group.hpp"
#include "fglab/weierstrass.hpp"

namespace fglab {

using Rational = boost::rational<i64>;

struct NewtonSegment {
  /// Common valuation v_p of the roots on this segment.
  Rational slope;
  int length = 0;
};

struct NewtonPolygon {
  /// Lower hull vertices (index, v_p(coefficient)), left to right.
  std::vector<std::pair<int, int>> vertices;
  /// Ordered by strictly increasing slope.
  std::vector<NewtonSegment> segments;

  int degree() const;
  bool is_pure() const { return segments.size() == 1; }
  std::string to_string() const;
};

/// Lower convex hull of {(i, v_p(c_i))} for the coefficients of P (degree
/// P.D() - 1).  Throws PrecisionError when a coefficient that vanishes mod p^N
/// could lie below the hull, and std::invalid_argument when the leading
/// coefficient vanishes.
NewtonPolygon newton_polygon(const TruncSeries1& P);
/// Same from raw valuations; kInfiniteValuation marks a coefficient that is
/// zero mod p^N.
NewtonPolygon newton_polygon(const std::vector<int>& valuations, int N);

struct TorsionDegreeCertificate {
  int n = 0;
  int expected_degree = 0;
  int degree = 0;
  NewtonPolygon polygon;
  bool ok = false;
  int D = 0;
  int N = 0;
};
/// Certifies that P_n is Eisenstein-like: a single slope 1/e with
/// e = q^{n-1}(q-1).  A failed certificate is returned, not thrown.
TorsionDegreeCertificate certify_torsion_degree(const FormalModule& G, int n);

struct TorsionCountCertificate {
  int n = 0;
  int weierstrass_degree = 0;
  u64 expected = 0;
  bool ok = false;
};
/// Weierstrass degree of [p^n] against p^{nh}.
TorsionCountCertificate torsion_count(const FormalModule& G, int n);

/// O_K[z] = O_K[X] / (P) for a monic distinguished P of degree e whose
/// Newton polygon is pure of slope 1/e, so z is a uniformizer of K(z).
class TorsionFieldModel {
 public:
  using Elem = TruncSeries1;

  /// Level-n model from the division polynomial of G.
  static TorsionFieldModel build(const FormalModule& G, int n);
  /// P monic of degree e, stored at truncation e + 1.
  explicit TorsionFieldModel(TruncSeries1 P, int level = 0);

  int e() const { return e_; }
  int level() const { return level_; }
  const RingPtr& ring() const { return P_.ring(); }
  const TruncSeries1& P() const { return P_; }
  /// N * e: evaluations of series need at least this many terms.
  int required_truncation() const { return ring()->N() * e_; }

  Elem zero() const { return Elem(ring(), e_); }
  Elem one() const { return scalar(UnramifiedRingElem(ring(), 1)); }
  Elem z() const;
  Elem scalar(const UnramifiedRingElem& c) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem times_z(const Elem& a) const;
  Elem pow(const Elem& a, u64 k) const;
  /// Inverse of a unit (a(0) a unit of O_K); throws PreconditionError otherwise.
  Elem inverse_unit(const Elem& a) const;

  /// v_L with v_L(z) = 1; std::nullopt when a == 0 mod p^N (so v_L >= N e).
  std::optional<int> valuation(const Elem& a) const;
  /// s(z); requires s.D() >= N e unless `exact_polynomial`.
  Elem evaluate(const TruncSeries1& s, bool exact_polynomial = false) const;
  /// s(x) for v_L(x) >= 1; requires s.D() >= N e unless `exact_polynomial`.
  Elem apply(const TruncSeries1& s, const Elem& x, bool exact_polynomial = false) const;
  /// F(x, y) for v_L(x), v_L(y) >= 1; exact modulo z^{F.D()}.
  Elem apply2(const TruncSeries2& F, const Elem& x, const Elem& y) const;

 private:
  void reduce_into(const TruncSeries1& wide, Elem& out) const;

  TruncSeries1 P_;
  int e_ = 0;
  int level_ = 0;
  /// X^{e+j} mod P for 0 <= j < e - 1.
  std::vector<TruncSeries1> overflow_;
};

std::optional<int> element_valuation(const TorsionFieldModel& model, const TorsionFieldModel::Elem& y);
TorsionFieldModel::Elem evaluate_series_at_z(const TruncSeries1& s, const TorsionFieldModel& model);

struct AssumptionCertificate {
  int n = 0;
  /// "enumeration" or "root_count".
  std::string method;
  bool holds = false;
  /// Enumeration: q^n values [a](z) expected distinct; root count: e roots.
  u64 expected = 0;
  u64 found = 0;
  bool annihilated = true;
  bool distinct = true;
  int structure_degree = 0;
  int N = 0;
  int D = 0;
};
/// Tests F[p^n] subset K(z) for z a primitive p^n-torsion point.  With an
/// O_F-structure of residue degree h the q^n values [a](z), a = sum_{i<n}
/// w_i p^i, are enumerated; otherwise the roots of P_n in K(z) are counted by
/// a certified digit search.  The structure is that of a Lubin-Tate module,
/// or for Honda groups the Teichmuller endomorphism when it integrates.
AssumptionCertificate assumption_check(const FormalModule& G, int n);

struct BreakEntry {
  /// u in U_k minus U_{k+1}; -1 for u = 1.
  int k = -1;
  std::string u;
  /// v_L(F([u](z), iota(z))); std::nullopt when it is at least the table's
  /// resolution (the truncation degree of F).
  std::optional<int> i_sigma;
  /// v_L([u](z) - z), computed independently; std::nullopt when it is zero mod p^N.
  std::optional<int> i_diff;
  std::optional<int> expected;
  bool ok = false;
};
struct BreakTable {
  int n = 0;
  int q = 0;
  int N = 0;
  int D = 0;
  int resolution = 0;
  std::vector<BreakEntry> entries;
  bool ok() const;
};
/// For full-height modules, i(sigma_u) for u = w (k = 0) and u = 1 + p^k w
/// (1 <= k < n), w running over two Teichmuller digits, plus u = 1.
/// Throws PreconditionError when the Teichmuller endomorphism of F_{p^h} is
/// not available.
BreakTable ramification_breaks(const FormalModule& G, int n);

struct MuPResult {
  bool member = false;
  int d_used = 0;
  TorsionFieldModel::Elem witness;
  /// witness^{p-1} + p == 0 mod p^verified_precision.
  int verified_precision = 0;
  std::string note;
};
/// Searches for y in K'(z), K' unramified of degree d <= d_max over K and z a
/// primitive [p]-torsion point, with y^{p-1} = -p.
MuPResult mu_p_membership(const FormalModule& G, int d_max);

}  // namespace fglab
