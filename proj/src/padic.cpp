#include "fglab/padic.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fglab/errors.hpp"

namespace fglab {

// ---------------------------------------------------------------------------
// small number theory
// ---------------------------------------------------------------------------

u64 ipow(u64 base, unsigned exp) {
  u64 r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

int floor_log(u64 b, u64 x) {
  int k = 0;
  u64 acc = 1;
  while (acc <= x / b) {
    acc *= b;
    ++k;
  }
  return k;
}

namespace {

// Polynomials over F_p, ascending coefficients, no trailing zeros.
using Fpoly = std::vector<u64>;

u64 mulp(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<u128>(a) * b) % p); }

u64 invp(u64 a, u64 p) {
  // Fermat
  u64 r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = mulp(r, b, p);
    b = mulp(b, b, p);
    e >>= 1;
  }
  return r;
}

void trim(Fpoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Fpoly fp_mod(Fpoly a, const Fpoly& m, u64 p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const u64 lead_inv = invp(m.back(), p);
  while (a.size() > dm && !a.empty()) {
    u64 c = mulp(a.back(), lead_inv, p);
    std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = (a[shift + i] + p - mulp(c, m[i], p)) % p;
    trim(a);
  }
  return a;
}

Fpoly fp_mulmod(const Fpoly& a, const Fpoly& b, const Fpoly& m, u64 p) {
  if (a.empty() || b.empty()) return {};
  Fpoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulp(a[i], b[j], p)) % p;
  return fp_mod(std::move(r), m, p);
}

Fpoly fp_gcd(Fpoly a, Fpoly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Fpoly r = fp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// RingDescriptor
// ---------------------------------------------------------------------------

bool RingDescriptor::is_irreducible_mod_p(u64 p, const std::vector<u64>& low) {
  const int f = static_cast<int>(low.size());
  if (f == 1) return true;
  Fpoly g(low.begin(), low.end());
  for (auto& c : g) c %= p;
  g.push_back(1);
  // Ben-Or: g is irreducible iff gcd(x^{p^i} - x, g) = 1 for 1 <= i <= f/2.
  Fpoly xp = {0, 1};
  for (int i = 1; i <= f / 2; ++i) {
    // xp <- xp^p mod g
    Fpoly base = xp, acc = {1};
    u64 e = p;
    while (e) {
      if (e & 1) acc = fp_mulmod(acc, base, g, p);
      base = fp_mulmod(base, base, g, p);
      e >>= 1;
    }
    xp = acc;
    Fpoly h = xp;
    if (h.size() < 2) h.resize(2, 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    Fpoly d = fp_gcd(g, h, p);
    if (d.size() != 1) return false;
  }
  return true;
}

std::vector<u64> RingDescriptor::default_modulus(u64 p, int f) {
  if (f == 1) return {0};
  const u64 count = ipow(p, static_cast<unsigned>(f));
  for (u64 code = 0; code < count; ++code) {
    std::vector<u64> low(static_cast<std::size_t>(f));
    u64 c = code;
    for (int i = 0; i < f; ++i) {
      low[static_cast<std::size_t>(i)] = c % p;
      c /= p;
    }
    if (low[0] == 0) continue;  // divisible by X
    if (is_irreducible_mod_p(p, low)) return low;
  }
  throw std::logic_error("no irreducible polynomial found");
}

RingPtr RingDescriptor::make(u64 p, int f, int N) {
  if (!is_prime(p) || p == 2) throw std::invalid_argument("p must be an odd prime");
  if (f < 1) throw std::invalid_argument("residue degree f must be >= 1");
  return make(p, f, N, default_modulus(p, f));
}

RingPtr RingDescriptor::make(u64 p, int f, int N, std::vector<u64> modulus) {
  if (!is_prime(p) || p == 2) throw std::invalid_argument("p must be an odd prime");
  if (f < 1 || f > 12) throw std::invalid_argument("residue degree f must be in [1, 12]");
  if (N < 1) throw std::invalid_argument("precision N must be >= 1");
  if (static_cast<int>(modulus.size()) != f)
    throw std::invalid_argument("modulus must have exactly f low coefficients");
  for (u64 c : modulus)
    if (c >= p) throw std::invalid_argument("modulus coefficients must lie in [0, p)");
  if (!is_irreducible_mod_p(p, modulus))
    throw std::invalid_argument("modulus is not irreducible mod p");

  std::shared_ptr<RingDescriptor> d(new RingDescriptor());
  d->p_ = p;
  d->f_ = f;
  d->N_ = N;
  d->modulus_ = std::move(modulus);
  d->ppow_.push_back(1);
  for (int k = 1; k <= N; ++k) {
    u64 prev = d->ppow_.back();
    if (prev > (u64{1} << 62) / p) throw std::invalid_argument("p^N must be below 2^62");
    d->ppow_.push_back(prev * p);
  }
  d->pN_ = d->ppow_.back();
  u64 q = 1;
  for (int i = 0; i < f; ++i) {
    if (q > (u64{1} << 62) / p) throw std::invalid_argument("p^f too large");
    q *= p;
  }
  d->q_ = q;

  d->frob_theta_.assign(static_cast<std::size_t>(f), 0);
  if (f == 1) {
    d->frob_theta_[0] = 1;
  } else {
    // sigma(theta) is the root of the modulus congruent to theta^p.
    RingPtr rp = d;
    std::vector<u64> th(static_cast<std::size_t>(f), 0);
    th[1] = 1;
    UnramifiedRingElem theta(rp, std::span<const u64>(th));
    UnramifiedRingElem r = theta.pow(p);
    auto eval = [&](const UnramifiedRingElem& x, bool derivative) {
      UnramifiedRingElem acc(rp);
      UnramifiedRingElem xp(rp, 1);
      // m(x) = x^f + sum c_i x^i ; m'(x) = f x^{f-1} + sum i c_i x^{i-1}
      for (int i = 0; i <= f; ++i) {
        const i64 c = i == f ? 1 : static_cast<i64>(d->modulus_[static_cast<std::size_t>(i)]);
        if (!derivative) {
          acc += UnramifiedRingElem(rp, c) * xp;
        } else if (i > 0) {
          acc += UnramifiedRingElem(rp, c * i) * xp;
        }
        if (!derivative || i > 0) xp = xp * x;
      }
      return acc;
    };
    for (int it = 0; it < 2 * N + 2; ++it) {
      UnramifiedRingElem next = r - eval(r, false) * invert(eval(r, true));
      if (next == r) break;
      r = next;
    }
    for (int i = 0; i < f; ++i) d->frob_theta_[static_cast<std::size_t>(i)] = r.coeff(i);
  }
  return d;
}

RingPtr RingDescriptor::with_precision(int N) const { return make(p_, f_, N, modulus_); }

bool RingDescriptor::same_field(const RingDescriptor& o) const {
  return p_ == o.p_ && f_ == o.f_ && modulus_ == o.modulus_;
}

u64 RingDescriptor::reduce_signed(i64 v) const {
  const i64 m = static_cast<i64>(pN_);
  i64 r = v % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

void RingDescriptor::mul_elem(const u64* a, const u64* b, u64* out) const {
  if (f_ == 1) {
    out[0] = mul(a[0], b[0]);
    return;
  }
  u128 acc[23] = {};
  for (int i = 0; i < f_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < f_; ++j) acc[i + j] += static_cast<u128>(a[i]) * b[j];
  }
  reduce_wide(acc, out);
}

void RingDescriptor::reduce_wide(const u128* acc, u64* out) const {
  if (f_ == 1) {
    out[0] = static_cast<u64>(acc[0] % pN_);
    return;
  }
  u64 t[23];
  const int w = 2 * f_ - 1;
  for (int k = 0; k < w; ++k) t[k] = static_cast<u64>(acc[k] % pN_);
  for (int k = w - 1; k >= f_; --k) {
    const u64 c = t[k];
    if (c == 0) continue;
    for (int i = 0; i < f_; ++i) t[k - f_ + i] = sub(t[k - f_ + i], mul(c, modulus_[static_cast<std::size_t>(i)]));
  }
  for (int i = 0; i < f_; ++i) out[i] = t[i];
}

std::string RingDescriptor::to_string() const {
  std::ostringstream os;
  os << "W(F_" << p_ << "^" << f_ << ")/" << p_ << "^" << N_ << " [modulus X^" << f_;
  for (int i = f_ - 1; i >= 0; --i) {
    u64 c = modulus_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    os << " + " << c;
    if (i > 0) os << "X^" << i;
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// UnramifiedRingElem
// ---------------------------------------------------------------------------

UnramifiedRingElem::UnramifiedRingElem(RingPtr ring)
    : ring_(std::move(ring)), c_(static_cast<std::size_t>(ring_->f()), 0) {}

UnramifiedRingElem::UnramifiedRingElem(RingPtr ring, i64 value) : UnramifiedRingElem(std::move(ring)) {
  c_[0] = ring_->reduce_signed(value);
}

UnramifiedRingElem::UnramifiedRingElem(RingPtr ring, std::span<const u64> coeffs)
    : UnramifiedRingElem(std::move(ring)) {
  if (static_cast<int>(coeffs.size()) != ring_->f())
    throw std::invalid_argument("coefficient count must equal f");
  for (std::size_t i = 0; i < coeffs.size(); ++i) c_[i] = coeffs[i] % ring_->pN();
}

UnramifiedRingElem::UnramifiedRingElem(RingPtr ring, std::vector<i64> coeffs)
    : UnramifiedRingElem(std::move(ring)) {
  if (static_cast<int>(coeffs.size()) > ring_->f())
    throw std::invalid_argument("too many coefficients for residue degree");
  for (std::size_t i = 0; i < coeffs.size(); ++i) c_[i] = ring_->reduce_signed(coeffs[i]);
}

void UnramifiedRingElem::check_same(const UnramifiedRingElem& o) const {
  if (ring_ != o.ring_ && !(*ring_ == *o.ring_))
    throw std::invalid_argument("descriptor mismatch: " + ring_->to_string() + " vs " + o.ring_->to_string());
}

bool UnramifiedRingElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](u64 c) { return c == 0; });
}

bool UnramifiedRingElem::is_unit() const {
  const u64 p = ring_->p();
  return std::any_of(c_.begin(), c_.end(), [p](u64 c) { return c % p != 0; });
}

bool UnramifiedRingElem::is_one() const {
  if (c_[0] != 1 % ring_->pN()) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](u64 c) { return c == 0; });
}

UnramifiedRingElem UnramifiedRingElem::operator-() const {
  UnramifiedRingElem r(*this);
  for (auto& c : r.c_) c = ring_->neg(c);
  return r;
}

UnramifiedRingElem& UnramifiedRingElem::operator+=(const UnramifiedRingElem& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = ring_->add(c_[i], o.c_[i]);
  return *this;
}

UnramifiedRingElem& UnramifiedRingElem::operator-=(const UnramifiedRingElem& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = ring_->sub(c_[i], o.c_[i]);
  return *this;
}

UnramifiedRingElem operator*(const UnramifiedRingElem& a, const UnramifiedRingElem& b) {
  a.check_same(b);
  UnramifiedRingElem r(a.ring_);
  a.ring_->mul_elem(a.c_.data(), b.c_.data(), r.c_.data());
  return r;
}

UnramifiedRingElem& UnramifiedRingElem::operator*=(const UnramifiedRingElem& o) {
  *this = *this * o;
  return *this;
}

bool UnramifiedRingElem::operator==(const UnramifiedRingElem& o) const {
  check_same(o);
  return c_ == o.c_;
}

UnramifiedRingElem UnramifiedRingElem::pow(u64 e) const {
  UnramifiedRingElem r(ring_, 1), b(*this);
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

UnramifiedRingElem UnramifiedRingElem::frobenius() const {
  if (ring_->f() == 1) return *this;
  UnramifiedRingElem sigma_theta(ring_, ring_->frobenius_theta());
  UnramifiedRingElem acc(ring_), pw(ring_, 1);
  for (int i = 0; i < ring_->f(); ++i) {
    acc += UnramifiedRingElem(ring_, static_cast<i64>(c_[static_cast<std::size_t>(i)])) * pw;
    pw = pw * sigma_theta;
  }
  return acc;
}

ResidueElem UnramifiedRingElem::residue() const {
  std::vector<u64> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] % ring_->p();
  return ResidueElem(ring_, std::move(r));
}

UnramifiedRingElem UnramifiedRingElem::at_precision(const RingPtr& other) const {
  if (!ring_->same_field(*other)) throw std::invalid_argument("descriptor mismatch: different residue fields");
  UnramifiedRingElem r(other);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] % other->pN();
  return r;
}

UnramifiedRingElem UnramifiedRingElem::divided_by_p(int k) const {
  if (k == 0) return *this;
  if (k > ring_->N()) throw PrecisionError("division by p^k with k > N");
  const u64 pk = ring_->ppow(k);
  UnramifiedRingElem r(ring_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] % pk != 0) throw std::domain_error("element not divisible by p^" + std::to_string(k));
    r.c_[i] = c_[i] / pk;
  }
  return r;
}

UnramifiedRingElem UnramifiedRingElem::times_p(int k) const {
  if (k >= ring_->N()) return UnramifiedRingElem(ring_);
  const u64 pk = ring_->ppow(k);
  UnramifiedRingElem r(ring_);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = ring_->mul(c_[i], pk);
  return r;
}

std::string UnramifiedRingElem::to_string() const {
  std::ostringstream os;
  if (c_.size() == 1) {
    os << c_[0];
  } else {
    os << "[";
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i];
    os << "]";
  }
  return os.str();
}

int coeff_valuation(const RingDescriptor& ring, u64 c) {
  if (c == 0) return kInfiniteValuation;
  int v = 0;
  while (c % ring.p() == 0) {
    c /= ring.p();
    ++v;
  }
  return v;
}

int valuation(const UnramifiedRingElem& a) {
  int v = kInfiniteValuation;
  for (u64 c : a.coeffs()) v = std::min(v, coeff_valuation(*a.ring(), c));
  return v;
}

UnramifiedRingElem invert(const UnramifiedRingElem& a) {
  if (!a.is_unit()) throw std::domain_error("invert: element is not a unit");
  const RingPtr& ring = a.ring();
  ResidueElem r = a.residue().inverse();
  UnramifiedRingElem x(ring, r.coeffs());
  const UnramifiedRingElem two(ring, 2);
  // Newton: each step doubles the number of correct digits.
  for (int it = 0; it < 64; ++it) {
    UnramifiedRingElem next = x * (two - a * x);
    if (next == x) break;
    x = next;
  }
  return x;
}

// ---------------------------------------------------------------------------
// ResidueElem
// ---------------------------------------------------------------------------

ResidueElem::ResidueElem(RingPtr ring) : ring_(std::move(ring)), c_(static_cast<std::size_t>(ring_->f()), 0) {}

ResidueElem::ResidueElem(RingPtr ring, std::vector<u64> coeffs) : ring_(std::move(ring)), c_(std::move(coeffs)) {
  if (static_cast<int>(c_.size()) != ring_->f()) throw std::invalid_argument("residue element needs f coefficients");
  for (auto& c : c_) c %= ring_->p();
}

ResidueElem ResidueElem::from_code(RingPtr ring, u64 code) {
  std::vector<u64> c(static_cast<std::size_t>(ring->f()));
  for (auto& x : c) {
    x = code % ring->p();
    code /= ring->p();
  }
  return ResidueElem(std::move(ring), std::move(c));
}

u64 ResidueElem::code() const {
  u64 code = 0;
  for (std::size_t i = c_.size(); i-- > 0;) code = code * ring_->p() + c_[i];
  return code;
}

bool ResidueElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](u64 c) { return c == 0; });
}

ResidueElem ResidueElem::operator-() const {
  ResidueElem r(*this);
  for (auto& c : r.c_) c = c == 0 ? 0 : ring_->p() - c;
  return r;
}

ResidueElem operator+(const ResidueElem& a, const ResidueElem& b) {
  ResidueElem r(a);
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = (a.c_[i] + b.c_[i]) % a.ring_->p();
  return r;
}

ResidueElem operator-(const ResidueElem& a, const ResidueElem& b) { return a + (-b); }

ResidueElem operator*(const ResidueElem& a, const ResidueElem& b) {
  const u64 p = a.ring_->p();
  const int f = a.ring_->f();
  std::vector<u64> t(static_cast<std::size_t>(2 * f - 1), 0);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j)
      t[static_cast<std::size_t>(i + j)] =
          (t[static_cast<std::size_t>(i + j)] + mulp(a.c_[static_cast<std::size_t>(i)], b.c_[static_cast<std::size_t>(j)], p)) % p;
  const auto& m = a.ring_->modulus();
  for (int k = 2 * f - 2; k >= f; --k) {
    const u64 c = t[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    for (int i = 0; i < f; ++i) {
      auto& slot = t[static_cast<std::size_t>(k - f + i)];
      slot = (slot + p - mulp(c, m[static_cast<std::size_t>(i)], p)) % p;
    }
  }
  t.resize(static_cast<std::size_t>(f));
  return ResidueElem(a.ring_, std::move(t));
}

ResidueElem ResidueElem::pow(u64 e) const {
  std::vector<u64> one(c_.size(), 0);
  one[0] = 1;
  ResidueElem r(ring_, one), b(*this);
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

ResidueElem ResidueElem::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero residue");
  return pow(ring_->residue_size() - 2);
}

std::string ResidueElem::to_string() const {
  std::ostringstream os;
  if (c_.size() == 1) return std::to_string(c_[0]);
  os << "[";
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i];
  os << "]";
  return os.str();
}

ResidueElem primitive_residue(const RingPtr& ring) {
  const u64 order = ring->residue_size() - 1;
  const auto primes = prime_factors(order);
  for (u64 code = 1; code <= order; ++code) {
    ResidueElem r = ResidueElem::from_code(ring, code);
    bool ok = true;
    for (u64 l : primes) {
      ResidueElem t = r.pow(order / l);
      if (t.code() == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return r;
  }
  throw std::logic_error("no primitive element");
}

ResidueElem subfield_generator(const RingPtr& ring, int d) {
  if (d < 1 || ring->f() % d != 0) throw std::invalid_argument("subfield degree must divide f");
  const u64 q = ring->residue_size();
  const u64 qd = ipow(ring->p(), static_cast<unsigned>(d));
  return primitive_residue(ring).pow((q - 1) / (qd - 1));
}

UnramifiedRingElem teichmuller_lift(const ResidueElem& r) {
  const RingPtr& ring = r.ring();
  UnramifiedRingElem x(ring, r.coeffs());
  if (r.is_zero()) return x;
  const u64 q = ring->residue_size();
  // x -> x^q contracts: each step fixes at least one more p-adic digit.
  for (int it = 0; it <= ring->N() + 1; ++it) {
    UnramifiedRingElem next = x.pow(q);
    if (next == x) break;
    x = next;
  }
  return x;
}

bool residue_power_test(const ResidueElem& r, u64 d) {
  if (r.is_zero()) throw std::domain_error("residue_power_test: r must be nonzero");
  const u64 order = r.ring()->residue_size() - 1;
  if (d == 0 || order % d != 0) throw std::invalid_argument("residue_power_test: d must divide p^f - 1");
  return r.pow(order / d).code() == 1;
}

// ---------------------------------------------------------------------------
// ScaledFieldElem
// ---------------------------------------------------------------------------

namespace {
UnramifiedRingElem reduce_mod_pk(const UnramifiedRingElem& a, int k) {
  const RingPtr& ring = a.ring();
  if (k >= ring->N()) return a;
  if (k <= 0) return UnramifiedRingElem(ring);
  std::vector<u64> c(a.coeffs().begin(), a.coeffs().end());
  for (auto& x : c) x %= ring->ppow(k);
  return UnramifiedRingElem(ring, std::span<const u64>(c));
}
}  // namespace

ScaledFieldElem::ScaledFieldElem(const UnramifiedRingElem& a) {
  const int v = fglab::valuation(a);
  if (v == kInfiniteValuation) {
    *this = zero(a.ring(), a.ring()->N());
    return;
  }
  unit_ = a.divided_by_p(v);
  exponent_ = v;
  rel_prec_ = a.ring()->N() - v;
  zero_ = false;
}

ScaledFieldElem ScaledFieldElem::zero(const RingPtr& ring, int abs_prec) {
  ScaledFieldElem z;
  z.unit_ = UnramifiedRingElem(ring);
  z.exponent_ = abs_prec;
  z.rel_prec_ = 0;
  z.zero_ = true;
  return z;
}

ScaledFieldElem ScaledFieldElem::from_parts(const UnramifiedRingElem& unit, int exponent, int rel_prec) {
  if (rel_prec <= 0) return zero(unit.ring(), exponent);
  if (!unit.is_unit()) throw std::invalid_argument("ScaledFieldElem: unit part must be a unit");
  ScaledFieldElem s;
  s.rel_prec_ = std::min(rel_prec, unit.ring()->N());
  s.unit_ = reduce_mod_pk(unit, s.rel_prec_);
  s.exponent_ = exponent;
  s.zero_ = false;
  return s;
}

ScaledFieldElem ScaledFieldElem::operator-() const {
  ScaledFieldElem r(*this);
  if (!zero_) r.unit_ = reduce_mod_pk(-unit_, rel_prec_);
  return r;
}

ScaledFieldElem operator+(const ScaledFieldElem& a, const ScaledFieldElem& b) {
  const int abs = std::min(a.abs_prec(), b.abs_prec());
  if (a.zero_ && b.zero_) return ScaledFieldElem::zero(a.ring(), abs);
  if (a.zero_ || b.zero_) {
    const ScaledFieldElem& nz = a.zero_ ? b : a;
    if (nz.exponent_ >= abs) return ScaledFieldElem::zero(a.ring(), abs);
    return ScaledFieldElem::from_parts(nz.unit_, nz.exponent_, abs - nz.exponent_);
  }
  const ScaledFieldElem& lo = a.exponent_ <= b.exponent_ ? a : b;
  const ScaledFieldElem& hi = a.exponent_ <= b.exponent_ ? b : a;
  const int window = abs - lo.exponent_;  // digits of lo's scale that are known
  if (window <= 0) return ScaledFieldElem::zero(a.ring(), abs);
  UnramifiedRingElem s = lo.unit_ + hi.unit_.times_p(hi.exponent_ - lo.exponent_);
  s = reduce_mod_pk(s, window);
  const int w = valuation(s);
  if (w == kInfiniteValuation || w >= window) return ScaledFieldElem::zero(a.ring(), abs);
  return ScaledFieldElem::from_parts(s.divided_by_p(w), lo.exponent_ + w, window - w);
}

ScaledFieldElem operator*(const ScaledFieldElem& a, const ScaledFieldElem& b) {
  if (a.zero_ || b.zero_) {
    const int va = a.zero_ ? a.exponent_ : a.exponent_;
    const int vb = b.zero_ ? b.exponent_ : b.exponent_;
    return ScaledFieldElem::zero(a.ring(), va + vb);
  }
  return ScaledFieldElem::from_parts(a.unit_ * b.unit_, a.exponent_ + b.exponent_, std::min(a.rel_prec_, b.rel_prec_));
}

ScaledFieldElem ScaledFieldElem::inverse() const {
  if (zero_) throw std::domain_error("inverse of zero (or of a value below precision)");
  return from_parts(invert(unit_), -exponent_, rel_prec_);
}

UnramifiedRingElem ScaledFieldElem::to_integral() const {
  if (zero_) return UnramifiedRingElem(unit_.ring());
  if (exponent_ < 0) throw std::domain_error("value is not integral");
  return unit_.times_p(exponent_);
}

std::string ScaledFieldElem::to_string() const {
  std::ostringstream os;
  if (zero_) {
    os << "O(p^" << exponent_ << ")";
  } else {
    os << "p^" << exponent_ << "*" << unit_.to_string() << " + O(p^" << abs_prec() << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// RingEmbedding
// ---------------------------------------------------------------------------

RingEmbedding::RingEmbedding(RingPtr from, RingPtr to) : from_(std::move(from)), to_(std::move(to)) {
  if (from_->p() != to_->p()) throw std::invalid_argument("embedding: different primes");
  if (to_->f() % from_->f() != 0) throw std::invalid_argument("embedding: f must divide f'");
  if (to_->N() != from_->N()) throw std::invalid_argument("embedding: precisions must agree");
  const int f = from_->f();
  const auto& m = from_->modulus();
  auto eval_res = [&](const ResidueElem& x) {
    ResidueElem acc(to_), pw = ResidueElem::from_code(to_, 1);
    for (int i = 0; i <= f; ++i) {
      const u64 c = i == f ? 1 : m[static_cast<std::size_t>(i)];
      acc = acc + ResidueElem::from_code(to_, c) * pw;
      pw = pw * x;
    }
    return acc;
  };
  if (f == 1) {
    // theta = -c_0 is already in the prime field.
    theta_image_ = UnramifiedRingElem(to_, -static_cast<i64>(m[0]));
  } else {
    std::optional<ResidueElem> root;
    for (u64 code = 0; code < to_->residue_size(); ++code) {
      ResidueElem x = ResidueElem::from_code(to_, code);
      if (eval_res(x).is_zero()) {
        root = x;
        break;
      }
    }
    if (!root) throw std::logic_error("embedding: defining polynomial has no root in target field");
    UnramifiedRingElem r(to_, root->coeffs());
    auto eval = [&](const UnramifiedRingElem& x, bool derivative) {
      UnramifiedRingElem acc(to_), pw(to_, 1);
      for (int i = 0; i <= f; ++i) {
        const i64 c = i == f ? 1 : static_cast<i64>(m[static_cast<std::size_t>(i)]);
        if (!derivative) {
          acc += UnramifiedRingElem(to_, c) * pw;
          pw = pw * x;
        } else if (i > 0) {
          acc += UnramifiedRingElem(to_, c * i) * pw;
          pw = pw * x;
        }
      }
      return acc;
    };
    for (int it = 0; it < 2 * to_->N() + 2; ++it) {
      UnramifiedRingElem next = r - eval(r, false) * invert(eval(r, true));
      if (next == r) break;
      r = next;
    }
    theta_image_ = r;
  }
  powers_.emplace_back(to_, 1);
  for (int i = 1; i < f; ++i) powers_.push_back(powers_.back() * theta_image_);
}

UnramifiedRingElem RingEmbedding::operator()(const UnramifiedRingElem& a) const {
  if (!a.ring()->same_field(*from_)) throw std::invalid_argument("embedding: element from another ring");
  UnramifiedRingElem acc(to_);
  for (int i = 0; i < from_->f(); ++i)
    acc += UnramifiedRingElem(to_, static_cast<i64>(a.coeff(i) % to_->pN())) * powers_[static_cast<std::size_t>(i)];
  return acc;
}

// ---------------------------------------------------------------------------
// ExactScalar
// ---------------------------------------------------------------------------

UnramifiedRingElem ExactScalar::at(const RingPtr& ring) const {
  UnramifiedRingElem acc(ring, integer);
  for (std::size_t i = 0; i < teichmuller_digits.size(); ++i) {
    if (static_cast<int>(i) >= ring->N()) break;
    acc += teichmuller_lift(ResidueElem::from_code(ring, teichmuller_digits[i])).times_p(static_cast<int>(i));
  }
  return acc;
}

bool ExactScalar::in_subfield(const RingPtr& ring, int d) const {
  const u64 qd = ipow(ring->p(), static_cast<unsigned>(d));
  for (u64 code : teichmuller_digits) {
    const ResidueElem r = ResidueElem::from_code(ring, code);
    if (r.pow(qd) != r) return false;
  }
  return true;
}

std::string ExactScalar::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (integer != 0) {
    os << integer;
    first = false;
  }
  for (std::size_t i = 0; i < teichmuller_digits.size(); ++i) {
    if (teichmuller_digits[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i > 0) os << "p^" << i << "*";
    os << "T(" << teichmuller_digits[i] << ")";
  }
  if (first) os << 0;
  return os.str();
}

}  // namespace fglab
