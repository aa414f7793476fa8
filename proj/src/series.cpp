#include "fglab/series.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fglab/errors.hpp"

namespace fglab {

namespace {

// Number of products (each < pN^2) that may be summed into a u128 slot
// already holding a value < pN before it has to be reduced.
u64 product_budget(const RingDescriptor& R) {
  const u128 m = R.pN() - 1;
  const u128 room = ~u128{0} - R.pN();
  const u128 b = m == 0 ? u128{1} << 40 : room / (m * m);
  return static_cast<u64>(std::min<u128>(b, u128{1} << 40));
}

bool elem_zero(const u64* a, int f) {
  for (int s = 0; s < f; ++s)
    if (a[s]) return false;
  return true;
}

// Accumulates sums of W(F_{p^f}) products with lazy reduction.
class WideAccumulator {
 public:
  WideAccumulator(const RingDescriptor& R, std::size_t slots)
      : R_(R), f_(R.f()), w_(2 * R.f() - 1), acc_(slots * static_cast<std::size_t>(2 * R.f() - 1), 0),
        budget_(product_budget(R)) {}

  // Announces that every slot is about to receive at most f more products.
  void reserve_round() {
    if (used_ + static_cast<u64>(f_) > budget_) flush();
    used_ += static_cast<u64>(f_);
  }

  void add(std::size_t slot, const u64* a, const u64* b) {
    u128* t = acc_.data() + slot * static_cast<std::size_t>(w_);
    if (f_ == 1) {
      t[0] += static_cast<u128>(a[0]) * b[0];
      return;
    }
    for (int s = 0; s < f_; ++s) {
      if (!a[s]) continue;
      const u128 as = a[s];
      for (int r = 0; r < f_; ++r) t[s + r] += as * b[r];
    }
  }

  void flush() {
    for (auto& x : acc_) x %= R_.pN();
    used_ = 0;
  }

  void store(std::size_t slot, u64* out) const {
    R_.reduce_wide(acc_.data() + slot * static_cast<std::size_t>(w_), out);
  }

 private:
  const RingDescriptor& R_;
  int f_;
  int w_;
  std::vector<u128> acc_;
  u64 budget_;
  u64 used_ = 0;
};

std::vector<int> nonzero_indices(const TruncSeries1& a) {
  std::vector<int> out;
  const int f = a.ring()->f();
  for (int k = 0; k < a.D(); ++k)
    if (!elem_zero(a.raw(k), f)) out.push_back(k);
  return out;
}

ScaledFieldElem scaled_integer(const RingPtr& ring, i64 n) {
  if (n == 0) return ScaledFieldElem::zero(ring, ring->N());
  int v = 0;
  const i64 p = static_cast<i64>(ring->p());
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return ScaledFieldElem::from_parts(UnramifiedRingElem(ring, n), v, ring->N());
}

}  // namespace

// ---------------------------------------------------------------------------
// TruncSeries1
// ---------------------------------------------------------------------------

TruncSeries1::TruncSeries1(RingPtr ring, int D) : ring_(std::move(ring)), D_(D) {
  if (D < 1) throw std::invalid_argument("truncation degree must be >= 1");
  c_.assign(static_cast<std::size_t>(D) * stride(), 0);
}

TruncSeries1 TruncSeries1::from_ints(RingPtr ring, int D, const std::vector<i64>& coeffs) {
  TruncSeries1 s(std::move(ring), D);
  for (std::size_t k = 0; k < coeffs.size() && static_cast<int>(k) < D; ++k)
    s.raw(static_cast<int>(k))[0] = s.ring_->reduce_signed(coeffs[k]);
  return s;
}

TruncSeries1 TruncSeries1::monomial(RingPtr ring, int D, int k, const UnramifiedRingElem& c) {
  TruncSeries1 s(std::move(ring), D);
  if (k < D) s.set_coeff(k, c);
  return s;
}

TruncSeries1 TruncSeries1::identity(RingPtr ring, int D) {
  TruncSeries1 s(std::move(ring), D);
  if (D > 1) s.raw(1)[0] = 1 % s.ring_->pN();
  return s;
}

void TruncSeries1::check_same(const TruncSeries1& o) const {
  if (D_ != o.D_) throw std::invalid_argument("series truncation mismatch");
  if (ring_ != o.ring_ && !(*ring_ == *o.ring_)) throw std::invalid_argument("series descriptor mismatch");
}

UnramifiedRingElem TruncSeries1::coeff(int k) const {
  return UnramifiedRingElem(ring_, std::span<const u64>(raw(k), stride()));
}

void TruncSeries1::set_coeff(int k, const UnramifiedRingElem& c) {
  if (c.ring() != ring_ && !(*c.ring() == *ring_)) throw std::invalid_argument("coefficient descriptor mismatch");
  std::copy(c.coeffs().begin(), c.coeffs().end(), raw(k));
}

bool TruncSeries1::coeff_is_zero(int k) const { return elem_zero(raw(k), ring_->f()); }

int TruncSeries1::coeff_valuation(int k) const {
  int v = kInfiniteValuation;
  for (int s = 0; s < ring_->f(); ++s) v = std::min(v, fglab::coeff_valuation(*ring_, raw(k)[s]));
  return v;
}

bool TruncSeries1::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](u64 c) { return c == 0; });
}

int TruncSeries1::order() const {
  for (int k = 0; k < D_; ++k)
    if (!coeff_is_zero(k)) return k;
  return D_;
}

int TruncSeries1::first_unit_index() const {
  for (int k = 0; k < D_; ++k)
    if (coeff_valuation(k) == 0) return k;
  return -1;
}

TruncSeries1 TruncSeries1::operator-() const {
  TruncSeries1 r(*this);
  for (auto& c : r.c_) c = ring_->neg(c);
  return r;
}

TruncSeries1& TruncSeries1::operator+=(const TruncSeries1& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = ring_->add(c_[i], o.c_[i]);
  return *this;
}

TruncSeries1& TruncSeries1::operator-=(const TruncSeries1& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = ring_->sub(c_[i], o.c_[i]);
  return *this;
}

TruncSeries1 operator*(const TruncSeries1& a, const TruncSeries1& b) {
  a.check_same(b);
  const int D = a.D_;
  std::vector<int> na = nonzero_indices(a), nb = nonzero_indices(b);
  const TruncSeries1* A = &a;
  const TruncSeries1* B = &b;
  if (na.size() > nb.size()) {
    std::swap(na, nb);
    std::swap(A, B);
  }
  TruncSeries1 r(a.ring_, D);
  if (na.empty() || nb.empty()) return r;
  WideAccumulator acc(*a.ring_, static_cast<std::size_t>(D));
  for (int i : na) {
    acc.reserve_round();
    const u64* ai = A->raw(i);
    for (int j : nb) {
      if (i + j >= D) break;
      acc.add(static_cast<std::size_t>(i + j), ai, B->raw(j));
    }
  }
  for (int k = 0; k < D; ++k) acc.store(static_cast<std::size_t>(k), r.raw(k));
  return r;
}

TruncSeries1 TruncSeries1::scaled(const UnramifiedRingElem& c) const {
  TruncSeries1 r(ring_, D_);
  for (int k = 0; k < D_; ++k)
    if (!coeff_is_zero(k)) ring_->mul_elem(raw(k), c.coeffs().data(), r.raw(k));
  return r;
}

bool TruncSeries1::operator==(const TruncSeries1& o) const {
  check_same(o);
  return c_ == o.c_;
}

TruncSeries1 TruncSeries1::pow(u64 e) const {
  TruncSeries1 r = from_ints(ring_, D_, {1});
  TruncSeries1 b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

TruncSeries1 TruncSeries1::derivative() const {
  TruncSeries1 r(ring_, D_);
  for (int k = 1; k < D_; ++k) {
    const u64 kk = static_cast<u64>(k) % ring_->pN();
    for (int s = 0; s < ring_->f(); ++s) r.raw(k - 1)[s] = ring_->mul(raw(k)[s], kk);
  }
  return r;
}

TruncSeries1 TruncSeries1::resized(int D2) const {
  TruncSeries1 r(ring_, D2);
  const int m = std::min(D_, D2);
  std::copy(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(m) * stride()), r.c_.begin());
  return r;
}

TruncSeries1 TruncSeries1::at_precision(const RingPtr& ring) const {
  if (!ring_->same_field(*ring)) throw std::invalid_argument("at_precision: different residue field");
  TruncSeries1 r(ring, D_);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] % ring->pN();
  return r;
}

TruncSeries1 TruncSeries1::divided_by_x(int k) const {
  if (k > D_ - 1) throw PrecisionError("divided_by_x: shift exceeds truncation");
  for (int i = 0; i < k; ++i)
    if (!coeff_is_zero(i)) throw std::domain_error("divided_by_x: series not divisible by X^k");
  TruncSeries1 r(ring_, D_ - k);
  std::copy(c_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(k) * stride()), c_.end(), r.c_.begin());
  return r;
}

TruncSeries1 TruncSeries1::times_x(int k) const {
  TruncSeries1 r(ring_, D_);
  for (int i = 0; i + k < D_; ++i) std::copy(raw(i), raw(i) + stride(), r.raw(i + k));
  return r;
}

TruncSeries1 TruncSeries1::divided_by_p(int k) const {
  if (k == 0) return *this;
  const u64 pk = ring_->ppow(k);
  TruncSeries1 r(ring_, D_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] % pk) throw std::domain_error("series not divisible by p^" + std::to_string(k));
    r.c_[i] = c_[i] / pk;
  }
  return r;
}

TruncSeries1 TruncSeries1::frobenius() const {
  if (ring_->f() == 1) return *this;
  TruncSeries1 r(ring_, D_);
  for (int k = 0; k < D_; ++k)
    if (!coeff_is_zero(k)) r.set_coeff(k, coeff(k).frobenius());
  return r;
}

TruncSeries1 TruncSeries1::mapped(const RingEmbedding& emb) const {
  TruncSeries1 r(emb.target(), D_);
  for (int k = 0; k < D_; ++k)
    if (!coeff_is_zero(k)) r.set_coeff(k, emb(coeff(k)));
  return r;
}

std::string TruncSeries1::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int k = 0; k < D_; ++k) os << (k ? ", " : "") << coeff(k).to_string();
  os << "]";
  return os.str();
}

TruncSeries1 compose(const TruncSeries1& f, const TruncSeries1& g) {
  if (f.D() != g.D()) throw std::invalid_argument("compose: truncation mismatch");
  if (!g.coeff_is_zero(0)) throw std::invalid_argument("compose: inner series has nonzero constant term");
  const std::vector<int> nz = nonzero_indices(f);
  TruncSeries1 result(f.ring(), f.D());
  if (nz.empty()) return result;
  std::map<int, TruncSeries1> gpow;
  auto power = [&](int e) -> const TruncSeries1& {
    auto it = gpow.find(e);
    if (it != gpow.end()) return it->second;
    TruncSeries1 v = e == 1 ? g : g.pow(static_cast<u64>(e));
    return gpow.emplace(e, std::move(v)).first->second;
  };
  // Horner over the nonzero terms, highest first.
  int prev = nz.back();
  std::copy(f.raw(prev), f.raw(prev) + f.ring()->f(), result.raw(0));
  for (auto it = nz.rbegin() + 1; it != nz.rend(); ++it) {
    const int k = *it;
    result = result * power(prev - k);
    UnramifiedRingElem c = result.coeff(0) + f.coeff(k);
    result.set_coeff(0, c);
    prev = k;
  }
  if (prev > 0) result = result * power(prev);
  return result;
}

TruncSeries1 inverse_series(const TruncSeries1& h) {
  const RingPtr& ring = h.ring();
  UnramifiedRingElem h0 = h.coeff(0);
  if (!h0.is_unit()) throw std::domain_error("inverse_series: constant term is not a unit");
  TruncSeries1 b = TruncSeries1::monomial(ring, h.D(), 0, invert(h0));
  const TruncSeries1 two = TruncSeries1::from_ints(ring, h.D(), {2});
  for (int m = 1; m < h.D(); m *= 2) {
    const int m2 = std::min(2 * m, h.D());
    TruncSeries1 bb = b.resized(m2);
    bb = bb * (two.resized(m2) - h.resized(m2) * bb);
    b = bb.resized(h.D());
  }
  return b;
}

TruncSeries1 reversion(const TruncSeries1& f) {
  if (!f.coeff_is_zero(0)) throw std::invalid_argument("reversion: nonzero constant term");
  if (f.D() < 2) return TruncSeries1(f.ring(), f.D());
  UnramifiedRingElem u = f.coeff(1);
  if (!u.is_unit()) throw std::domain_error("reversion: linear coefficient is not a unit");
  const int D = f.D();
  TruncSeries1 r = TruncSeries1::monomial(f.ring(), D, 1, invert(u));
  const TruncSeries1 fprime = f.derivative();
  for (int m = 2; m < D; m *= 2) {
    const int m2 = std::min(2 * m, D);
    TruncSeries1 rr = r.resized(m2);
    TruncSeries1 err = compose(f.resized(m2), rr) - TruncSeries1::identity(f.ring(), m2);
    TruncSeries1 deriv = compose(fprime.resized(m2), rr);
    rr -= err * inverse_series(deriv);
    r = rr.resized(D);
  }
  return r;
}

// ---------------------------------------------------------------------------
// TruncSeries2
// ---------------------------------------------------------------------------

TruncSeries2::TruncSeries2(RingPtr ring, int D) : ring_(std::move(ring)), D_(D) {
  if (D < 1) throw std::invalid_argument("truncation degree must be >= 1");
  c_.assign(static_cast<std::size_t>(D) * static_cast<std::size_t>(D + 1) / 2 * stride(), 0);
}

TruncSeries2 TruncSeries2::x(RingPtr ring, int D) {
  TruncSeries2 s(std::move(ring), D);
  if (D > 1) s.raw(1, 0)[0] = 1 % s.ring_->pN();
  return s;
}

TruncSeries2 TruncSeries2::y(RingPtr ring, int D) {
  TruncSeries2 s(std::move(ring), D);
  if (D > 1) s.raw(0, 1)[0] = 1 % s.ring_->pN();
  return s;
}

TruncSeries2 TruncSeries2::from_x(const TruncSeries1& g) {
  TruncSeries2 s(g.ring(), g.D());
  for (int k = 0; k < g.D(); ++k) std::copy(g.raw(k), g.raw(k) + s.stride(), s.raw(k, 0));
  return s;
}

TruncSeries2 TruncSeries2::from_y(const TruncSeries1& g) {
  TruncSeries2 s(g.ring(), g.D());
  for (int k = 0; k < g.D(); ++k) std::copy(g.raw(k), g.raw(k) + s.stride(), s.raw(0, k));
  return s;
}

void TruncSeries2::check_same(const TruncSeries2& o) const {
  if (D_ != o.D_) throw std::invalid_argument("series truncation mismatch");
  if (ring_ != o.ring_ && !(*ring_ == *o.ring_)) throw std::invalid_argument("series descriptor mismatch");
}

UnramifiedRingElem TruncSeries2::coeff(int i, int j) const {
  return UnramifiedRingElem(ring_, std::span<const u64>(raw(i, j), stride()));
}

void TruncSeries2::set_coeff(int i, int j, const UnramifiedRingElem& c) {
  if (c.ring() != ring_ && !(*c.ring() == *ring_)) throw std::invalid_argument("coefficient descriptor mismatch");
  std::copy(c.coeffs().begin(), c.coeffs().end(), raw(i, j));
}

bool TruncSeries2::coeff_is_zero(int i, int j) const { return elem_zero(raw(i, j), ring_->f()); }

bool TruncSeries2::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](u64 c) { return c == 0; });
}

bool TruncSeries2::degree_is_zero(int s) const {
  for (int j = 0; j <= s; ++j)
    if (!coeff_is_zero(s - j, j)) return false;
  return true;
}

TruncSeries2 TruncSeries2::operator-() const {
  TruncSeries2 r(*this);
  for (auto& c : r.c_) c = ring_->neg(c);
  return r;
}

TruncSeries2& TruncSeries2::operator+=(const TruncSeries2& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = ring_->add(c_[i], o.c_[i]);
  return *this;
}

TruncSeries2& TruncSeries2::operator-=(const TruncSeries2& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = ring_->sub(c_[i], o.c_[i]);
  return *this;
}

TruncSeries2 operator*(const TruncSeries2& a, const TruncSeries2& b) {
  a.check_same(b);
  const int D = a.D_;
  struct Term {
    int i, j;
  };
  auto gather = [&](const TruncSeries2& s) {
    std::vector<Term> out;
    for (int t = 0; t < D; ++t)
      for (int j = 0; j <= t; ++j)
        if (!s.coeff_is_zero(t - j, j)) out.push_back({t - j, j});
    return out;
  };
  std::vector<Term> ta = gather(a), tb = gather(b);
  const TruncSeries2* A = &a;
  const TruncSeries2* B = &b;
  if (ta.size() > tb.size()) {
    std::swap(ta, tb);
    std::swap(A, B);
  }
  TruncSeries2 r(a.ring_, D);
  if (ta.empty() || tb.empty()) return r;
  const std::size_t slots = static_cast<std::size_t>(D) * static_cast<std::size_t>(D + 1) / 2;
  WideAccumulator acc(*a.ring_, slots);
  for (const Term& x : ta) {
    acc.reserve_round();
    const u64* ax = A->raw(x.i, x.j);
    const int room = D - x.i - x.j;
    for (const Term& y : tb) {
      if (y.i + y.j >= room) break;
      acc.add(TruncSeries2::index(x.i + y.i, x.j + y.j), ax, B->raw(y.i, y.j));
    }
  }
  for (std::size_t k = 0; k < slots; ++k) acc.store(k, r.c_.data() + k * r.stride());
  return r;
}

TruncSeries2 TruncSeries2::scaled(const UnramifiedRingElem& c) const {
  TruncSeries2 r(ring_, D_);
  const std::size_t slots = c_.size() / stride();
  for (std::size_t k = 0; k < slots; ++k)
    if (!elem_zero(c_.data() + k * stride(), ring_->f()))
      ring_->mul_elem(c_.data() + k * stride(), c.coeffs().data(), r.c_.data() + k * stride());
  return r;
}

bool TruncSeries2::operator==(const TruncSeries2& o) const {
  check_same(o);
  return c_ == o.c_;
}

TruncSeries2 TruncSeries2::pow(u64 e) const {
  TruncSeries2 r(ring_, D_);
  r.raw(0, 0)[0] = 1 % ring_->pN();
  TruncSeries2 b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

TruncSeries2 TruncSeries2::swapped() const {
  TruncSeries2 r(ring_, D_);
  for (int s = 0; s < D_; ++s)
    for (int j = 0; j <= s; ++j) std::copy(raw(s - j, j), raw(s - j, j) + stride(), r.raw(j, s - j));
  return r;
}

TruncSeries2 TruncSeries2::resized(int D2) const {
  TruncSeries2 r(ring_, D2);
  const int m = std::min(D_, D2);
  const std::size_t n = static_cast<std::size_t>(m) * static_cast<std::size_t>(m + 1) / 2 * stride();
  std::copy(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n), r.c_.begin());
  return r;
}

TruncSeries2 TruncSeries2::at_precision(const RingPtr& ring) const {
  if (!ring_->same_field(*ring)) throw std::invalid_argument("at_precision: different residue field");
  TruncSeries2 r(ring, D_);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] % ring->pN();
  return r;
}

TruncSeries2 TruncSeries2::divided_by_p(int k) const {
  if (k == 0) return *this;
  const u64 pk = ring_->ppow(k);
  TruncSeries2 r(ring_, D_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] % pk) throw std::domain_error("series not divisible by p^" + std::to_string(k));
    r.c_[i] = c_[i] / pk;
  }
  return r;
}

TruncSeries2 TruncSeries2::mapped(const RingEmbedding& emb) const {
  TruncSeries2 r(emb.target(), D_);
  for (int s = 0; s < D_; ++s)
    for (int j = 0; j <= s; ++j)
      if (!coeff_is_zero(s - j, j)) r.set_coeff(s - j, j, emb(coeff(s - j, j)));
  return r;
}

std::string TruncSeries2::to_string() const {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (int s = 0; s < D_; ++s)
    for (int j = 0; j <= s; ++j) {
      os << (first ? "" : ", ") << coeff(s - j, j).to_string();
      first = false;
    }
  os << "]";
  return os.str();
}

namespace {

std::vector<TruncSeries1> powers_upto(const TruncSeries1& g, int count) {
  std::vector<TruncSeries1> out;
  out.reserve(static_cast<std::size_t>(count));
  out.push_back(TruncSeries1::from_ints(g.ring(), g.D(), {1}));
  for (int k = 1; k < count; ++k) out.push_back(out.back() * g);
  return out;
}

// sum_k c_k * s_k with c_k raw coefficient pointers.
void axpy(TruncSeries1& acc, const u64* c, const TruncSeries1& s) {
  const RingDescriptor& R = *acc.ring();
  const int f = R.f();
  std::vector<u64> tmp(static_cast<std::size_t>(f));
  for (int k = 0; k < s.D(); ++k) {
    if (s.coeff_is_zero(k)) continue;
    R.mul_elem(c, s.raw(k), tmp.data());
    u64* a = acc.raw(k);
    for (int t = 0; t < f; ++t) a[t] = R.add(a[t], tmp[static_cast<std::size_t>(t)]);
  }
}

}  // namespace

TruncSeries1 substitute2(const TruncSeries2& F, const TruncSeries1& g, const TruncSeries1& h) {
  if (F.D() != g.D() || F.D() != h.D()) throw std::invalid_argument("substitute2: truncation mismatch");
  if (!g.coeff_is_zero(0) || !h.coeff_is_zero(0))
    throw std::invalid_argument("substitute2: substituted series must have zero constant term");
  const int D = F.D();
  const auto gp = powers_upto(g, D);
  const auto hp = powers_upto(h, D);
  TruncSeries1 result(F.ring(), D);
  for (int i = 0; i < D; ++i) {
    TruncSeries1 inner(F.ring(), D);
    bool any = false;
    for (int j = 0; i + j < D; ++j) {
      if (F.coeff_is_zero(i, j)) continue;
      axpy(inner, F.raw(i, j), hp[static_cast<std::size_t>(j)]);
      any = true;
    }
    if (any) result += inner * gp[static_cast<std::size_t>(i)];
  }
  return result;
}

TruncSeries2 substitute_separate(const TruncSeries2& F, const TruncSeries1& g, const TruncSeries1& h) {
  if (F.D() != g.D() || F.D() != h.D()) throw std::invalid_argument("substitute_separate: truncation mismatch");
  if (!g.coeff_is_zero(0) || !h.coeff_is_zero(0))
    throw std::invalid_argument("substitute_separate: substituted series must have zero constant term");
  const int D = F.D();
  const RingDescriptor& R = *F.ring();
  const int f = R.f();
  const auto gp = powers_upto(g, D);
  const auto hp = powers_upto(h, D);
  TruncSeries2 result(F.ring(), D);
  std::vector<u64> tmp(static_cast<std::size_t>(f));
  for (int j = 0; j < D; ++j) {
    // G_j(X) = sum_i F_ij g(X)^i
    TruncSeries1 Gj(F.ring(), D);
    bool any = false;
    for (int i = 0; i + j < D; ++i) {
      if (F.coeff_is_zero(i, j)) continue;
      axpy(Gj, F.raw(i, j), gp[static_cast<std::size_t>(i)]);
      any = true;
    }
    if (!any) continue;
    const TruncSeries1& H = hp[static_cast<std::size_t>(j)];
    for (int b = 0; b < D; ++b) {
      if (H.coeff_is_zero(b)) continue;
      for (int a = 0; a + b < D; ++a) {
        if (Gj.coeff_is_zero(a)) continue;
        R.mul_elem(Gj.raw(a), H.raw(b), tmp.data());
        u64* o = result.raw(a, b);
        for (int t = 0; t < f; ++t) o[t] = R.add(o[t], tmp[static_cast<std::size_t>(t)]);
      }
    }
  }
  return result;
}

TruncSeries2 compose_outer(const TruncSeries1& f, const TruncSeries2& G) {
  if (f.D() != G.D()) throw std::invalid_argument("compose_outer: truncation mismatch");
  if (!G.coeff_is_zero(0, 0)) throw std::invalid_argument("compose_outer: inner series has nonzero constant term");
  const std::vector<int> nz = nonzero_indices(f);
  TruncSeries2 result(f.ring(), f.D());
  if (nz.empty()) return result;
  std::map<int, TruncSeries2> gpow;
  auto power = [&](int e) -> const TruncSeries2& {
    auto it = gpow.find(e);
    if (it != gpow.end()) return it->second;
    return gpow.emplace(e, G.pow(static_cast<u64>(e))).first->second;
  };
  int prev = nz.back();
  result.set_coeff(0, 0, f.coeff(prev));
  for (auto it = nz.rbegin() + 1; it != nz.rend(); ++it) {
    const int k = *it;
    result = result * power(prev - k);
    result.set_coeff(0, 0, result.coeff(0, 0) + f.coeff(k));
    prev = k;
  }
  if (prev > 0) result = result * power(prev);
  return result;
}

// ---------------------------------------------------------------------------
// ScaledSeries1
// ---------------------------------------------------------------------------

ScaledSeries1::ScaledSeries1(RingPtr ring, int D) : ring_(std::move(ring)), D_(D) {
  if (D < 1) throw std::invalid_argument("truncation degree must be >= 1");
  c_.assign(static_cast<std::size_t>(D), ScaledFieldElem::zero(ring_, ring_->N()));
}

ScaledSeries1::ScaledSeries1(const TruncSeries1& s) : ring_(s.ring()), D_(s.D()) {
  c_.reserve(static_cast<std::size_t>(D_));
  for (int k = 0; k < D_; ++k) c_.emplace_back(s.coeff(k));
}

ScaledSeries1 ScaledSeries1::operator-() const {
  ScaledSeries1 r(*this);
  for (auto& c : r.c_) c = -c;
  return r;
}

ScaledSeries1 operator+(const ScaledSeries1& a, const ScaledSeries1& b) {
  if (a.D_ != b.D_) throw std::invalid_argument("series truncation mismatch");
  ScaledSeries1 r(a);
  for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
  return r;
}

ScaledSeries1 operator-(const ScaledSeries1& a, const ScaledSeries1& b) { return a + (-b); }

ScaledSeries1 operator*(const ScaledSeries1& a, const ScaledSeries1& b) {
  if (a.D_ != b.D_) throw std::invalid_argument("series truncation mismatch");
  ScaledSeries1 r(a.ring_, a.D_);
  for (int i = 0; i < a.D_; ++i) {
    const auto& ai = a.c_[static_cast<std::size_t>(i)];
    for (int j = 0; i + j < a.D_; ++j) {
      const auto& bj = b.c_[static_cast<std::size_t>(j)];
      if (ai.is_zero() && bj.is_zero()) continue;
      auto& slot = r.c_[static_cast<std::size_t>(i + j)];
      slot = slot + ai * bj;
    }
  }
  return r;
}

ScaledSeries1 ScaledSeries1::derivative() const {
  ScaledSeries1 r(ring_, D_);
  for (int k = 1; k < D_; ++k) r.c_[static_cast<std::size_t>(k - 1)] = c_[static_cast<std::size_t>(k)] * scaled_integer(ring_, k);
  return r;
}

ScaledSeries1 ScaledSeries1::integrate() const {
  ScaledSeries1 r(ring_, D_);
  for (int k = 0; k + 1 < D_; ++k)
    r.c_[static_cast<std::size_t>(k + 1)] = c_[static_cast<std::size_t>(k)] / scaled_integer(ring_, k + 1);
  return r;
}

int ScaledSeries1::min_exponent() const {
  int v = kInfiniteValuation;
  for (const auto& c : c_)
    if (!c.is_zero()) v = std::min(v, c.exponent());
  return v == kInfiniteValuation ? 0 : v;
}

int ScaledSeries1::min_abs_prec() const {
  int v = kInfiniteValuation;
  for (const auto& c : c_) v = std::min(v, c.abs_prec());
  return v;
}

bool ScaledSeries1::is_integral() const {
  return std::all_of(c_.begin(), c_.end(), [](const ScaledFieldElem& c) { return c.is_integral(); });
}

TruncSeries1 ScaledSeries1::to_integral() const {
  TruncSeries1 r(ring_, D_);
  for (int k = 0; k < D_; ++k) {
    const auto& c = c_[static_cast<std::size_t>(k)];
    if (!c.is_integral()) throw std::domain_error("series coefficient " + std::to_string(k) + " is not integral");
    if (!c.is_zero()) r.set_coeff(k, c.to_integral());
  }
  return r;
}

bool ScaledSeries1::agrees_with(const ScaledSeries1& o, int prec) const {
  if (D_ != o.D_) return false;
  for (int k = 0; k < D_; ++k) {
    ScaledFieldElem d = c_[static_cast<std::size_t>(k)] - o.c_[static_cast<std::size_t>(k)];
    if (!d.is_zero() && d.exponent() < prec) return false;
  }
  return true;
}

std::string ScaledSeries1::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int k = 0; k < D_; ++k) os << (k ? ", " : "") << c_[static_cast<std::size_t>(k)].to_string();
  os << "]";
  return os.str();
}

ScaledSeries1 compose(const ScaledSeries1& f, const ScaledSeries1& g) {
  if (f.D() != g.D()) throw std::invalid_argument("compose: truncation mismatch");
  if (!g.coeff(0).is_zero()) throw std::invalid_argument("compose: inner series has nonzero constant term");
  const int D = f.D();
  ScaledSeries1 result(f.ring(), D);
  result.set_coeff(0, f.coeff(D - 1));
  for (int k = D - 2; k >= 0; --k) {
    result = result * g;
    result.set_coeff(0, result.coeff(0) + f.coeff(k));
  }
  return result;
}

ScaledSeries1 reversion(const ScaledSeries1& f) {
  if (!f.coeff(0).is_zero()) throw std::invalid_argument("reversion: nonzero constant term");
  const int D = f.D();
  ScaledSeries1 r(f.ring(), D);
  if (D < 2) return r;
  const ScaledFieldElem& u = f.coeff(1);
  if (u.is_zero()) throw std::domain_error("reversion: linear coefficient vanishes");
  const ScaledFieldElem uinv = u.inverse();
  r.set_coeff(1, uinv);
  for (int k = 2; k < D; ++k) {
    ScaledSeries1 t = compose(f, r);
    r.set_coeff(k, r.coeff(k) - t.coeff(k) * uinv);
  }
  return r;
}

}  // namespace fglab
