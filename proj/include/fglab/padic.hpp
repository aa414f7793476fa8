#pragma once

// Exact arithmetic in F_{p^f} and in the unramified ring W(F_{p^f}) / p^N.
//
// Elements of W(F_{p^f}) are stored as polynomials of degree < f in a root
// theta of the (lifted) defining polynomial, with coefficients in Z/p^N.
// The defining polynomial is monic with coefficients in [0, p) and is
// irreducible mod p, so 1, theta, ..., theta^{f-1} is an integral basis and
// v_p of an element is the minimum of v_p over its coefficients.

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fglab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Sentinel for "divisible by every power of p available at this precision".
inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

class RingDescriptor;
using RingPtr = std::shared_ptr<const RingDescriptor>;

/// p, f, N and the defining polynomial of the residue field.  Immutable and
/// shared between every element built on it.
class RingDescriptor {
 public:
  /// Uses the default modulus: the monic irreducible of degree f over F_p
  /// whose low coefficients (c_0 + c_1 p + ... + c_{f-1} p^{f-1}) encode the
  /// smallest integer.
  static RingPtr make(u64 p, int f, int N);
  /// `modulus` holds c_0..c_{f-1} of the monic polynomial X^f + ... + c_0.
  static RingPtr make(u64 p, int f, int N, std::vector<u64> modulus);

  static std::vector<u64> default_modulus(u64 p, int f);
  static bool is_irreducible_mod_p(u64 p, const std::vector<u64>& monic_low);

  u64 p() const { return p_; }
  int f() const { return f_; }
  int N() const { return N_; }
  /// p^N, the coefficient modulus.
  u64 pN() const { return pN_; }
  /// p^k for 0 <= k <= N.
  u64 ppow(int k) const { return ppow_[static_cast<std::size_t>(k)]; }
  /// p^f, the size of the residue field.
  u64 residue_size() const { return q_; }
  const std::vector<u64>& modulus() const { return modulus_; }

  /// Same field, different precision.
  RingPtr with_precision(int N) const;
  /// Same p, f and modulus (precision may differ).
  bool same_field(const RingDescriptor& other) const;
  bool operator==(const RingDescriptor& other) const {
    return same_field(other) && N_ == other.N_;
  }

  /// Image of theta under the Frobenius automorphism of W(F_{p^f}).
  std::span<const u64> frobenius_theta() const { return frob_theta_; }

  // Coefficient-level kernels.  All inputs are reduced into [0, p^N).
  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= pN_ ? s - pN_ : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (pN_ - b); }
  u64 neg(u64 a) const { return a == 0 ? 0 : pN_ - a; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>((static_cast<u128>(a) * b) % pN_); }
  u64 reduce_signed(i64 v) const;

  /// out = a * b in W(F_{p^f}); spans have length f; out must not alias.
  void mul_elem(const u64* a, const u64* b, u64* out) const;
  /// Reduces 2f-1 wide accumulators (a product before reduction mod the
  /// defining polynomial) into f coefficients.
  void reduce_wide(const u128* acc, u64* out) const;

  std::string to_string() const;

 private:
  RingDescriptor() = default;

  u64 p_ = 0;
  int f_ = 0;
  int N_ = 0;
  u64 pN_ = 0;
  u64 q_ = 0;
  std::vector<u64> ppow_;
  std::vector<u64> modulus_;
  std::vector<u64> frob_theta_;
};

class ResidueElem;

/// Element of W(F_{p^f}) / p^N.
class UnramifiedRingElem {
 public:
  UnramifiedRingElem() = default;
  explicit UnramifiedRingElem(RingPtr ring);
  UnramifiedRingElem(RingPtr ring, i64 value);
  UnramifiedRingElem(RingPtr ring, std::span<const u64> coeffs);
  UnramifiedRingElem(RingPtr ring, std::vector<i64> coeffs);

  const RingPtr& ring() const { return ring_; }
  std::span<const u64> coeffs() const { return c_; }
  u64 coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }

  bool is_zero() const;
  bool is_unit() const;
  bool is_one() const;

  UnramifiedRingElem operator-() const;
  UnramifiedRingElem& operator+=(const UnramifiedRingElem& o);
  UnramifiedRingElem& operator-=(const UnramifiedRingElem& o);
  UnramifiedRingElem& operator*=(const UnramifiedRingElem& o);
  friend UnramifiedRingElem operator+(UnramifiedRingElem a, const UnramifiedRingElem& b) { return a += b; }
  friend UnramifiedRingElem operator-(UnramifiedRingElem a, const UnramifiedRingElem& b) { return a -= b; }
  friend UnramifiedRingElem operator*(const UnramifiedRingElem& a, const UnramifiedRingElem& b);
  bool operator==(const UnramifiedRingElem& o) const;
  bool operator!=(const UnramifiedRingElem& o) const { return !(*this == o); }

  UnramifiedRingElem pow(u64 e) const;
  UnramifiedRingElem frobenius() const;
  ResidueElem residue() const;

  /// Reinterprets the element at another precision of the same field
  /// (truncating, or padding with zero digits when lifting).
  UnramifiedRingElem at_precision(const RingPtr& other) const;
  /// Exact division by p^k.  The result lives at precision N - k (reported
  /// on the original descriptor with zero top digits).  Throws if not divisible.
  UnramifiedRingElem divided_by_p(int k) const;
  UnramifiedRingElem times_p(int k) const;

  std::string to_string() const;

 private:
  void check_same(const UnramifiedRingElem& o) const;

  RingPtr ring_;
  std::vector<u64> c_;
};

/// Multiplicative inverse; the residue must be nonzero.
UnramifiedRingElem invert(const UnramifiedRingElem& a);
/// Largest v <= N with p^v | a, or kInfiniteValuation when a == 0 mod p^N.
int valuation(const UnramifiedRingElem& a);
/// v_p of a single coefficient in [0, p^N).
int coeff_valuation(const RingDescriptor& ring, u64 c);

/// Element of F_{p^f}.
class ResidueElem {
 public:
  ResidueElem() = default;
  explicit ResidueElem(RingPtr ring);
  ResidueElem(RingPtr ring, std::vector<u64> coeffs);
  /// Decodes c_0 + c_1 p + ... into coefficients.
  static ResidueElem from_code(RingPtr ring, u64 code);

  const RingPtr& ring() const { return ring_; }
  std::span<const u64> coeffs() const { return c_; }
  u64 code() const;

  bool is_zero() const;
  ResidueElem operator-() const;
  friend ResidueElem operator+(const ResidueElem& a, const ResidueElem& b);
  friend ResidueElem operator-(const ResidueElem& a, const ResidueElem& b);
  friend ResidueElem operator*(const ResidueElem& a, const ResidueElem& b);
  bool operator==(const ResidueElem& o) const { return c_ == o.c_; }
  bool operator!=(const ResidueElem& o) const { return c_ != o.c_; }

  ResidueElem pow(u64 e) const;
  ResidueElem inverse() const;
  std::string to_string() const;

 private:
  RingPtr ring_;
  std::vector<u64> c_;
};

/// Smallest-code generator of F_{p^f}^*.
ResidueElem primitive_residue(const RingPtr& ring);
/// Generator of the subfield F_{p^d}^* inside F_{p^f}^* (d | f), derived from
/// the primitive element so the choice is deterministic.
ResidueElem subfield_generator(const RingPtr& ring, int d);

/// The root of unity (or zero) in W(F_{p^f}) reducing to r.
UnramifiedRingElem teichmuller_lift(const ResidueElem& r);
/// True iff r is a d-th power in F_{p^f}^*.  Requires r != 0 and d | p^f - 1.
bool residue_power_test(const ResidueElem& r, u64 d);

/// Element p^exponent * unit of K = Frac W(F_{p^f}), with the unit known to
/// `rel_prec` p-adic digits.  A zero value records only its absolute
/// precision: it stands for O(p^exponent).
class ScaledFieldElem {
 public:
  ScaledFieldElem() = default;
  /// Normalizes an integral element; relative precision is N - v.
  explicit ScaledFieldElem(const UnramifiedRingElem& a);
  static ScaledFieldElem zero(const RingPtr& ring, int abs_prec);
  /// p^exponent * unit; unit must be a unit.
  static ScaledFieldElem from_parts(const UnramifiedRingElem& unit, int exponent, int rel_prec);

  const RingPtr& ring() const { return unit_.ring(); }
  bool is_zero() const { return zero_; }
  /// Valuation for nonzero values; absolute precision for zero.
  int exponent() const { return exponent_; }
  const UnramifiedRingElem& unit() const { return unit_; }
  int rel_prec() const { return rel_prec_; }
  /// Digits are known modulo p^abs_prec().
  int abs_prec() const { return zero_ ? exponent_ : exponent_ + rel_prec_; }
  int valuation() const { return zero_ ? kInfiniteValuation : exponent_; }

  ScaledFieldElem operator-() const;
  friend ScaledFieldElem operator+(const ScaledFieldElem& a, const ScaledFieldElem& b);
  friend ScaledFieldElem operator-(const ScaledFieldElem& a, const ScaledFieldElem& b) { return a + (-b); }
  friend ScaledFieldElem operator*(const ScaledFieldElem& a, const ScaledFieldElem& b);
  ScaledFieldElem inverse() const;
  friend ScaledFieldElem operator/(const ScaledFieldElem& a, const ScaledFieldElem& b) { return a * b.inverse(); }

  /// True if the value is integral at its known precision.
  bool is_integral() const { return zero_ || exponent_ >= 0; }
  /// Integral value reduced mod p^min(N, abs_prec).  Throws if exponent < 0.
  UnramifiedRingElem to_integral() const;

  std::string to_string() const;

 private:
  UnramifiedRingElem unit_;
  int exponent_ = 0;
  int rel_prec_ = 0;
  bool zero_ = true;
};

/// Canonical embedding W(F_{p^f}) -> W(F_{p^{f'}}) for f | f'.  theta maps to
/// the Hensel lift of the smallest-code root of the defining polynomial in
/// F_{p^{f'}}.
class RingEmbedding {
 public:
  RingEmbedding(RingPtr from, RingPtr to);
  const RingPtr& source() const { return from_; }
  const RingPtr& target() const { return to_; }
  UnramifiedRingElem operator()(const UnramifiedRingElem& a) const;
  const UnramifiedRingElem& theta_image() const { return theta_image_; }

 private:
  RingPtr from_;
  RingPtr to_;
  UnramifiedRingElem theta_image_;
  std::vector<UnramifiedRingElem> powers_;
};

/// An element of W(F_{p^f}) described exactly, so it can be rebuilt at any
/// precision: integer + sum_i p^i * teichmuller(digit_i).
struct ExactScalar {
  i64 integer = 0;
  /// Residue codes (see ResidueElem::code) of the Teichmuller digits.
  std::vector<u64> teichmuller_digits;

  static ExactScalar from_int(i64 n) { return ExactScalar{n, {}}; }
  static ExactScalar teichmuller(const ResidueElem& r) { return ExactScalar{0, {r.code()}}; }
  UnramifiedRingElem at(const RingPtr& ring) const;
  /// True when every Teichmuller digit lies in F_{p^d}.
  bool in_subfield(const RingPtr& ring, int d) const;
  bool is_integer(i64 n) const { return integer == n && teichmuller_digits.empty(); }
  std::string to_string() const;
};

/// Small-number helpers shared across modules.
u64 ipow(u64 base, unsigned exp);
bool is_prime(u64 n);
std::vector<u64> prime_factors(u64 n);
/// floor(log_b(x)) for x >= 1.
int floor_log(u64 b, u64 x);

}  // namespace fglab
