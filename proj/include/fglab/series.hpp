#pragma once

// Truncated power series over W(F_{p^f}) / p^N in one and two variables, plus
// a one-variable series type over K whose coefficients carry their own
// valuation (needed for logarithms and integration).

#include <string>
#include <vector>

#include "fglab/padic.hpp"

namespace fglab {

/// a_0 + a_1 X + ... + a_{D-1} X^{D-1}, coefficients stored flat with stride f.
class TruncSeries1 {
 public:
  TruncSeries1() = default;
  TruncSeries1(RingPtr ring, int D);
  /// Integer coefficients (embedded via Z -> W(F_{p^f})).
  static TruncSeries1 from_ints(RingPtr ring, int D, const std::vector<i64>& coeffs);
  static TruncSeries1 monomial(RingPtr ring, int D, int k, const UnramifiedRingElem& c);
  static TruncSeries1 identity(RingPtr ring, int D);

  const RingPtr& ring() const { return ring_; }
  int D() const { return D_; }

  UnramifiedRingElem coeff(int k) const;
  void set_coeff(int k, const UnramifiedRingElem& c);
  const u64* raw(int k) const { return c_.data() + static_cast<std::size_t>(k) * stride(); }
  u64* raw(int k) { return c_.data() + static_cast<std::size_t>(k) * stride(); }
  bool coeff_is_zero(int k) const;
  /// v_p of the degree-k coefficient (kInfiniteValuation when it is 0 mod p^N).
  int coeff_valuation(int k) const;

  bool is_zero() const;
  /// Index of the first nonzero coefficient, or D when the series is zero.
  int order() const;
  /// Index of the first unit coefficient, or -1 when there is none below D.
  int first_unit_index() const;

  TruncSeries1 operator-() const;
  TruncSeries1& operator+=(const TruncSeries1& o);
  TruncSeries1& operator-=(const TruncSeries1& o);
  friend TruncSeries1 operator+(TruncSeries1 a, const TruncSeries1& b) { return a += b; }
  friend TruncSeries1 operator-(TruncSeries1 a, const TruncSeries1& b) { return a -= b; }
  friend TruncSeries1 operator*(const TruncSeries1& a, const TruncSeries1& b);
  TruncSeries1 scaled(const UnramifiedRingElem& c) const;
  bool operator==(const TruncSeries1& o) const;
  bool operator!=(const TruncSeries1& o) const { return !(*this == o); }

  TruncSeries1 pow(u64 e) const;
  TruncSeries1 derivative() const;
  /// Same coefficients at truncation D2 (zero-padded when D2 > D).
  TruncSeries1 resized(int D2) const;
  TruncSeries1 at_precision(const RingPtr& ring) const;
  /// f / X^k; the first k coefficients must vanish.  Truncation drops to D - k.
  TruncSeries1 divided_by_x(int k) const;
  /// X^k f, truncated at D.
  TruncSeries1 times_x(int k) const;
  /// Exact division of every coefficient by p^k.
  TruncSeries1 divided_by_p(int k) const;
  TruncSeries1 frobenius() const;
  TruncSeries1 mapped(const RingEmbedding& emb) const;

  std::string to_string() const;

 private:
  std::size_t stride() const { return static_cast<std::size_t>(ring_->f()); }
  void check_same(const TruncSeries1& o) const;

  RingPtr ring_;
  int D_ = 0;
  std::vector<u64> c_;
};

/// f(g); g must have zero constant term.
TruncSeries1 compose(const TruncSeries1& f, const TruncSeries1& g);
/// Compositional inverse of f = uX + ..., u a unit.
TruncSeries1 reversion(const TruncSeries1& f);
/// 1/h for h(0) a unit.
TruncSeries1 inverse_series(const TruncSeries1& h);

/// Series in X and Y truncated at total degree D.  Coefficient (i, j) is
/// stored at s(s+1)/2 + j with s = i + j.
class TruncSeries2 {
 public:
  TruncSeries2() = default;
  TruncSeries2(RingPtr ring, int D);
  static TruncSeries2 x(RingPtr ring, int D);
  static TruncSeries2 y(RingPtr ring, int D);
  /// g(X) viewed as a series in X and Y.
  static TruncSeries2 from_x(const TruncSeries1& g);
  static TruncSeries2 from_y(const TruncSeries1& g);

  const RingPtr& ring() const { return ring_; }
  int D() const { return D_; }
  static std::size_t index(int i, int j) {
    const std::size_t s = static_cast<std::size_t>(i + j);
    return s * (s + 1) / 2 + static_cast<std::size_t>(j);
  }

  UnramifiedRingElem coeff(int i, int j) const;
  void set_coeff(int i, int j, const UnramifiedRingElem& c);
  const u64* raw(int i, int j) const { return c_.data() + index(i, j) * stride(); }
  u64* raw(int i, int j) { return c_.data() + index(i, j) * stride(); }
  bool coeff_is_zero(int i, int j) const;

  bool is_zero() const;
  TruncSeries2 operator-() const;
  TruncSeries2& operator+=(const TruncSeries2& o);
  TruncSeries2& operator-=(const TruncSeries2& o);
  friend TruncSeries2 operator+(TruncSeries2 a, const TruncSeries2& b) { return a += b; }
  friend TruncSeries2 operator-(TruncSeries2 a, const TruncSeries2& b) { return a -= b; }
  friend TruncSeries2 operator*(const TruncSeries2& a, const TruncSeries2& b);
  TruncSeries2 scaled(const UnramifiedRingElem& c) const;
  bool operator==(const TruncSeries2& o) const;
  bool operator!=(const TruncSeries2& o) const { return !(*this == o); }

  TruncSeries2 pow(u64 e) const;
  /// F(Y, X).
  TruncSeries2 swapped() const;
  TruncSeries2 resized(int D2) const;
  TruncSeries2 at_precision(const RingPtr& ring) const;
  TruncSeries2 divided_by_p(int k) const;
  TruncSeries2 mapped(const RingEmbedding& emb) const;
  /// True if the total-degree-s part vanishes.
  bool degree_is_zero(int s) const;

  std::string to_string() const;

 private:
  std::size_t stride() const { return static_cast<std::size_t>(ring_->f()); }
  void check_same(const TruncSeries2& o) const;

  RingPtr ring_;
  int D_ = 0;
  std::vector<u64> c_;
};

/// F(g(X), h(X)); g and h must have zero constant term.
TruncSeries1 substitute2(const TruncSeries2& F, const TruncSeries1& g, const TruncSeries1& h);
/// F(g(X), h(Y)) as a series in X and Y.
TruncSeries2 substitute_separate(const TruncSeries2& F, const TruncSeries1& g, const TruncSeries1& h);
/// f(G(X, Y)); G must have zero constant term.
TruncSeries2 compose_outer(const TruncSeries1& f, const TruncSeries2& G);

/// One-variable series over K with per-coefficient valuation tracking.
class ScaledSeries1 {
 public:
  ScaledSeries1() = default;
  /// All coefficients zero, known to absolute precision N.
  ScaledSeries1(RingPtr ring, int D);
  explicit ScaledSeries1(const TruncSeries1& s);

  const RingPtr& ring() const { return ring_; }
  int D() const { return D_; }
  const ScaledFieldElem& coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
  void set_coeff(int k, const ScaledFieldElem& c) { c_[static_cast<std::size_t>(k)] = c; }

  ScaledSeries1 operator-() const;
  friend ScaledSeries1 operator+(const ScaledSeries1& a, const ScaledSeries1& b);
  friend ScaledSeries1 operator-(const ScaledSeries1& a, const ScaledSeries1& b);
  friend ScaledSeries1 operator*(const ScaledSeries1& a, const ScaledSeries1& b);

  ScaledSeries1 derivative() const;
  /// Term-wise antiderivative with zero constant term; the top coefficient
  /// falls off the truncation.
  ScaledSeries1 integrate() const;

  /// Smallest exponent over nonzero coefficients (0 for the zero series).
  int min_exponent() const;
  /// Smallest absolute precision over all coefficients.
  int min_abs_prec() const;
  bool is_integral() const;
  /// Integral coefficients reduced mod p^N; throws if some coefficient is not
  /// integral.
  TruncSeries1 to_integral() const;
  /// True if every coefficient of (*this - o) is zero at the joint precision
  /// capped at `prec`.
  bool agrees_with(const ScaledSeries1& o, int prec) const;

  std::string to_string() const;

 private:
  RingPtr ring_;
  int D_ = 0;
  std::vector<ScaledFieldElem> c_;
};

ScaledSeries1 compose(const ScaledSeries1& f, const ScaledSeries1& g);
/// Compositional inverse of f = uX + ..., u nonzero.
ScaledSeries1 reversion(const ScaledSeries1& f);

}  // namespace fglab
