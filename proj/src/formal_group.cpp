#include "fglab/formal_group.hpp"

#include <sstream>
#include <stdexcept>

#include "fglab/errors.hpp"

namespace fglab {

namespace {

RingPtr working_ring(const RingPtr& ring, int extra) {
  try {
    return ring->with_precision(ring->N() + extra);
  } catch (const std::invalid_argument&) {
    throw PrecisionError("working precision p^" + std::to_string(ring->N() + extra) + " exceeds 62 bits");
  }
}

bool fixed_by_frobenius_power(const UnramifiedRingElem& a, int d) {
  UnramifiedRingElem b = a;
  for (int i = 0; i < d; ++i) b = b.frobenius();
  return b == a;
}

// (p^k - p) / p = p^{k-1} - 1, a unit for k >= 2.
UnramifiedRingElem lt_denominator_inverse(const RingPtr& W, int k) {
  const UnramifiedRingElem pk1(W, k - 1 < W->N() ? static_cast<i64>(W->ppow(k - 1)) : 0);
  return invert(pk1 - UnramifiedRingElem(W, 1));
}

TruncSeries2 partial_y(const TruncSeries2& F) {
  TruncSeries2 r(F.ring(), F.D());
  for (int s = 1; s < F.D(); ++s)
    for (int j = 1; j <= s; ++j)
      if (!F.coeff_is_zero(s - j, j)) r.set_coeff(s - j, j - 1, F.coeff(s - j, j) * UnramifiedRingElem(F.ring(), j));
  return r;
}

bool associative_to(const TruncSeries2& Fin, int D) {
  const TruncSeries2 F = Fin.resized(D);
  const RingDescriptor& R = *F.ring();
  const int f = R.f();
  std::vector<TruncSeries2> P;
  P.reserve(static_cast<std::size_t>(D));
  TruncSeries2 one(F.ring(), D);
  one.set_coeff(0, 0, UnramifiedRingElem(F.ring(), 1));
  P.push_back(one);
  for (int a = 1; a < D; ++a) P.push_back(P.back() * F);
  const std::size_t DD = static_cast<std::size_t>(D);
  auto idx = [&](int i, int j, int k) {
    return ((static_cast<std::size_t>(i) * DD + static_cast<std::size_t>(j)) * DD + static_cast<std::size_t>(k)) *
           static_cast<std::size_t>(f);
  };
  std::vector<u64> left(DD * DD * DD * static_cast<std::size_t>(f), 0), right(left.size(), 0);
  std::vector<u64> tmp(static_cast<std::size_t>(f));
  auto accumulate = [&](std::vector<u64>& cube, std::size_t at, const u64* a, const u64* b) {
    R.mul_elem(a, b, tmp.data());
    for (int t = 0; t < f; ++t) cube[at + static_cast<std::size_t>(t)] = R.add(cube[at + static_cast<std::size_t>(t)], tmp[static_cast<std::size_t>(t)]);
  };
  for (int s = 1; s < D; ++s)
    for (int b = 0; b <= s; ++b) {
      const int a = s - b;
      if (F.coeff_is_zero(a, b)) continue;
      const u64* c = F.raw(a, b);
      // F(F(X,Y), Z): F_ab * F^a(X,Y) * Z^b
      const TruncSeries2& Pa = P[static_cast<std::size_t>(a)];
      for (int t = 0; t + b < D; ++t)
        for (int j = 0; j <= t; ++j)
          if (!Pa.coeff_is_zero(t - j, j)) accumulate(left, idx(t - j, j, b), c, Pa.raw(t - j, j));
      // F(X, F(Y,Z)): F_ab * X^a * F^b(Y,Z)
      const TruncSeries2& Pb = P[static_cast<std::size_t>(b)];
      for (int t = 0; t + a < D; ++t)
        for (int k = 0; k <= t; ++k)
          if (!Pb.coeff_is_zero(t - k, k)) accumulate(right, idx(a, t - k, k), c, Pb.raw(t - k, k));
    }
  return left == right;
}

}  // namespace

// ---------------------------------------------------------------------------
// FrobeniusSeries
// ---------------------------------------------------------------------------

FrobeniusSeries FrobeniusSeries::validated(TruncSeries1 f, int d) {
  const RingPtr& R = f.ring();
  if (d < 1 || R->f() % d != 0) throw std::invalid_argument("Frobenius series: d must divide the residue degree f");
  if (!f.coeff_is_zero(0)) throw std::invalid_argument("Frobenius series: nonzero constant term");
  const int qi = f.first_unit_index();
  if (qi < 0) throw std::invalid_argument("Frobenius series: no unit coefficient below the truncation");
  int h = 0;
  u64 q = 1;
  while (q < static_cast<u64>(qi)) {
    q *= R->p();
    ++h;
  }
  if (q != static_cast<u64>(qi) || h == 0 || h % d != 0)
    throw std::invalid_argument("Frobenius series: first unit coefficient must sit at X^{p^h} with d | h");
  if (f.coeff(1) != UnramifiedRingElem(R, static_cast<i64>(R->p())))
    throw std::invalid_argument("Frobenius series: linear coefficient must be p");
  int last = 0;
  for (int k = 0; k < f.D(); ++k) {
    if (f.coeff_is_zero(k)) continue;
    last = k;
    const UnramifiedRingElem c = f.coeff(k);
    const bool unit = c.is_unit();
    if (static_cast<u64>(k) == q) {
      if (!(c - UnramifiedRingElem(R, 1)).residue().is_zero())
        throw std::invalid_argument("Frobenius series: coefficient of X^q must be 1 mod p");
    } else if (unit) {
      throw std::invalid_argument("Frobenius series: coefficient of X^" + std::to_string(k) + " must be divisible by p");
    }
    if (!fixed_by_frobenius_power(c, d))
      throw std::invalid_argument("Frobenius series: coefficients must lie in the subring of residue degree d");
  }
  FrobeniusSeries out;
  out.f = f.resized(last + 1);
  out.d = d;
  out.h = h;
  return out;
}

FrobeniusSeries FrobeniusSeries::standard(const RingPtr& ring, int d, int h) {
  const u64 q = ipow(ring->p(), static_cast<unsigned>(h > 0 ? h : d));
  std::vector<i64> c(static_cast<std::size_t>(q + 1), 0);
  c[1] = static_cast<i64>(ring->p());
  c[static_cast<std::size_t>(q)] = 1;
  return validated(TruncSeries1::from_ints(ring, static_cast<int>(q + 1), c), d);
}

FrobeniusSeries FrobeniusSeries::multiplicative(const RingPtr& ring) {
  const int p = static_cast<int>(ring->p());
  std::vector<i64> c(static_cast<std::size_t>(p + 1), 0);
  i64 binom = 1;
  for (int k = 1; k <= p; ++k) {
    binom = binom * (p - k + 1) / k;
    c[static_cast<std::size_t>(k)] = binom;
  }
  return validated(TruncSeries1::from_ints(ring, p + 1, c), 1);
}

u64 FrobeniusSeries::residue_size() const { return ipow(f.ring()->p(), static_cast<unsigned>(d)); }
u64 FrobeniusSeries::reduction_degree() const { return ipow(f.ring()->p(), static_cast<unsigned>(h)); }

// ---------------------------------------------------------------------------
// group-law level
// ---------------------------------------------------------------------------

ScaledSeries1 logarithm(const TruncSeries2& F) {
  const int D = F.D();
  TruncSeries1 fy0(F.ring(), D);
  for (int i = 0; i + 1 < D; ++i) fy0.set_coeff(i, F.coeff(i, 1));
  return ScaledSeries1(inverse_series(fy0)).integrate();
}

ScaledSeries1 exponential(const TruncSeries2& F) { return reversion(logarithm(F)); }

TruncSeries1 formal_negation(const TruncSeries2& F) {
  const int D = F.D();
  const RingPtr& R = F.ring();
  const TruncSeries2 dFdY = partial_y(F);
  TruncSeries1 iota = -TruncSeries1::identity(R, D);
  for (int m = 2; m < D; m *= 2) {
    const int m2 = std::min(2 * m, D);
    TruncSeries1 im = iota.resized(m2);
    const TruncSeries1 X = TruncSeries1::identity(R, m2);
    TruncSeries1 val = substitute2(F.resized(m2), X, im);
    TruncSeries1 der = substitute2(dFdY.resized(m2), X, im);
    im -= val * inverse_series(der);
    iota = im.resized(D);
  }
  return iota;
}

AxiomReport check_group_axioms(const TruncSeries2& F, int assoc_degree) {
  AxiomReport rep;
  const int D = F.D();
  const RingPtr& R = F.ring();
  rep.unit = true;
  for (int k = 0; k < D; ++k) {
    const UnramifiedRingElem expect(R, k == 1 ? 1 : 0);
    if (F.coeff(k, 0) != expect || F.coeff(0, k) != expect) rep.unit = false;
  }
  rep.commutative = F.swapped() == F;
  rep.assoc_degree = std::min(D, assoc_degree);
  rep.associative = associative_to(F, rep.assoc_degree);
  return rep;
}

bool is_endomorphism_of(const TruncSeries1& g, const TruncSeries2& F) {
  const TruncSeries1 gD = g.resized(F.D());
  return compose_outer(gD, F) == substitute_separate(F, gD, gD);
}

std::optional<int> height_of(const TruncSeries1& p_series) {
  const int idx = p_series.first_unit_index();
  if (idx < 0) return std::nullopt;
  const u64 p = p_series.ring()->p();
  int h = 0;
  u64 pw = 1;
  while (pw < static_cast<u64>(idx)) {
    pw *= p;
    ++h;
  }
  if (pw != static_cast<u64>(idx) || h == 0)
    throw CertificationError("first unit coefficient of [p] at index " + std::to_string(idx) +
                             ", which is not a positive power of p");
  return h;
}

LogConjugateResult solve_log_conjugate(const TruncSeries1& Lambda, int shift, const TruncSeries1& dlog,
                                       const UnramifiedRingElem& a) {
  const RingPtr& W = Lambda.ring();
  const int D = Lambda.D();
  LogConjugateResult out;
  TruncSeries1 g = TruncSeries1::monomial(W, D, 1, a);
  for (int m = 2; m < D; m *= 2) {
    const int m2 = std::min(2 * m, D);
    const TruncSeries1 gm = g.resized(m2);
    const TruncSeries1 Lm = Lambda.resized(m2);
    const TruncSeries1 E = compose(Lm, gm) - Lm.scaled(a);
    TruncSeries1 Ediv(W, m2);
    for (int k = m; k < m2; ++k) {
      const UnramifiedRingElem c = E.coeff(k);
      if (valuation(c) < shift) {
        out.first_obstruction = k;
        return out;
      }
      Ediv.set_coeff(k, c.divided_by_p(shift));
    }
    const TruncSeries1 delta = Ediv * inverse_series(compose(dlog.resized(m2), gm));
    g = (gm - delta).resized(D);
  }
  out.series = g;
  return out;
}

UnramifiedRingElem signed_lift(const UnramifiedRingElem& a, const RingPtr& W) {
  const RingPtr& R = a.ring();
  const u64 pN = R->ppow(R->N());
  UnramifiedRingElem out(W);
  std::vector<i64> c(static_cast<std::size_t>(R->f()));
  for (int t = 0; t < R->f(); ++t) {
    const u64 x = a.coeff(t);
    c[static_cast<std::size_t>(t)] = x > pN / 2 ? -static_cast<i64>(pN - x) : static_cast<i64>(x);
  }
  return UnramifiedRingElem(W, std::move(c));
}

TruncSeries1 commuting_series(const TruncSeries1& f_in, const ExactScalar& a_in, int D) {
  const RingPtr& R = f_in.ring();
  const u64 p = R->p();
  const int guard = floor_log(p, static_cast<u64>(D)) + 2;
  const RingPtr W = working_ring(R, guard);
  const TruncSeries1 f = f_in.resized(D).at_precision(W);
  const UnramifiedRingElem a = a_in.at(W);
  TruncSeries1 g = TruncSeries1::monomial(W, D, 1, a);
  if (D <= 2) return g.at_precision(R);

  // f^j for 0 <= j < D; column k of row j is [f^j]_k.
  std::vector<TruncSeries1> fpow;
  fpow.reserve(static_cast<std::size_t>(D));
  fpow.push_back(TruncSeries1::from_ints(W, D, {1}));
  for (int j = 1; j < D; ++j) fpow.push_back(fpow.back() * f);
  const TruncSeries1 fprime = f.derivative();

  for (int m = 2; m < D; m *= 2) {
    const int m2 = std::min(2 * m, D);
    const TruncSeries1 gm = g.resized(m2);
    const TruncSeries1 fm = f.resized(m2);
    const TruncSeries1 E0 = compose(fm, gm) - compose(gm, fm);
    const TruncSeries1 A = compose(fprime.resized(m2), gm);
    std::vector<UnramifiedRingElem> dcoef;
    dcoef.reserve(static_cast<std::size_t>(m2 - m));
    for (int k = m; k < m2; ++k) {
      UnramifiedRingElem num = E0.coeff(k);
      for (int j = m; j < k; ++j) {
        const UnramifiedRingElem& dj = dcoef[static_cast<std::size_t>(j - m)];
        if (dj.is_zero()) continue;
        num += (A.coeff(k - j) - fpow[static_cast<std::size_t>(j)].coeff(k)) * dj;
      }
      if (valuation(num) < 1)
        throw CertificationError("no integral series commutes with f at linear coefficient " + a_in.to_string() +
                                 " (obstruction at degree " + std::to_string(k) + ")");
      dcoef.push_back(num.divided_by_p(1) * lt_denominator_inverse(W, k));
    }
    for (int k = m; k < m2; ++k) g.set_coeff(k, dcoef[static_cast<std::size_t>(k - m)]);
  }
  TruncSeries1 result = g.at_precision(R);
  const TruncSeries1 fD = f_in.resized(D);
  if (compose(fD, result) != compose(result, fD))
    throw CertificationError("commuting series failed post-verification at degree " + std::to_string(D));
  return result;
}

// ---------------------------------------------------------------------------
// Honda logarithm
// ---------------------------------------------------------------------------

HondaLog honda_logarithm(const RingPtr& ring, const std::vector<UnramifiedRingElem>& u, int D) {
  const u64 p = ring->p();
  const int L = D >= 2 ? floor_log(p, static_cast<u64>(D - 1)) : 0;
  const RingPtr W = working_ring(ring, L + 1);
  std::vector<UnramifiedRingElem> uw;
  for (const auto& x : u) uw.push_back(signed_lift(x, W));
  // B_k = p^L b_k where lambda = sum_k b_k X^{p^k},
  // b_k = (1/p) sum_i u_i sigma^i(b_{k-i}).
  std::vector<UnramifiedRingElem> B;
  B.emplace_back(W, static_cast<i64>(W->ppow(L)));
  for (int k = 1; k <= L; ++k) {
    UnramifiedRingElem acc(W);
    for (int i = 1; i <= std::min<int>(k, static_cast<int>(uw.size())); ++i) {
      UnramifiedRingElem t = B[static_cast<std::size_t>(k - i)];
      for (int s = 0; s < i; ++s) t = t.frobenius();
      acc += uw[static_cast<std::size_t>(i - 1)] * t;
    }
    B.push_back(acc.divided_by_p(1));
  }
  HondaLog out;
  out.shift = L;
  out.Lambda = TruncSeries1(W, D);
  out.dlog = TruncSeries1(W, D);
  u64 pk = 1;
  for (int k = 0; k <= L; ++k) {
    if (pk < static_cast<u64>(D)) {
      out.Lambda.set_coeff(static_cast<int>(pk), B[static_cast<std::size_t>(k)]);
      // lambda' has coefficient p^k b_k = B_k / p^{L-k} at X^{p^k - 1}
      out.dlog.set_coeff(static_cast<int>(pk - 1), B[static_cast<std::size_t>(k)].divided_by_p(L - k));
    }
    pk *= p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// FormalModule
// ---------------------------------------------------------------------------

FormalModule FormalModule::lubin_tate(const FrobeniusSeries& f, int law_degree) {
  FormalModule m;
  m.kind_ = GroupKind::LubinTate;
  m.ring_ = f.f.ring();
  m.frob_ = f;
  std::ostringstream os;
  os << "lubin_tate(d=" << f.d << ")";
  m.label_ = os.str();
  m.build_law(law_degree);
  return m;
}

FormalModule FormalModule::honda(const RingPtr& ring, std::vector<UnramifiedRingElem> u, int law_degree) {
  FormalModule m;
  m.kind_ = GroupKind::Honda;
  m.ring_ = ring;
  m.u_ = std::move(u);
  std::ostringstream os;
  os << "honda(u=(";
  for (std::size_t i = 0; i < m.u_.size(); ++i) os << (i ? "," : "") << m.u_[i].to_string();
  os << "))";
  m.label_ = os.str();
  m.build_law(law_degree);
  return m;
}

FormalModule FormalModule::multiplicative(const RingPtr& ring, int law_degree) {
  FormalModule m = lubin_tate(FrobeniusSeries::multiplicative(ring), law_degree);
  m.label_ = "multiplicative";
  return m;
}

TruncSeries2 FormalModule::law_at(int D) const {
  FormalModule copy = *this;
  copy.build_law(D);
  return copy.law_;
}

void FormalModule::build_law(int D) {
  const RingPtr& R = ring_;
  TruncSeries2 F;
  if (kind_ == GroupKind::LubinTate) {
    const RingPtr W = working_ring(R, floor_log(R->p(), static_cast<u64>(std::max(D, 2))) + 2);
    const TruncSeries1 f = frob_->f.at_precision(W);
    F = TruncSeries2::x(W, D) + TruncSeries2::y(W, D);
    for (int k = 2; k < D; ++k) {
      const TruncSeries2 Fk = F.resized(k + 1);
      const TruncSeries1 fk = f.resized(k + 1);
      const TruncSeries2 E = compose_outer(fk, Fk) - substitute_separate(Fk, fk, fk);
      const UnramifiedRingElem dinv = lt_denominator_inverse(W, k);
      for (int j = 0; j <= k; ++j) {
        const UnramifiedRingElem c = E.coeff(k - j, j);
        if (valuation(c) < 1)
          throw CertificationError("Lubin-Tate solve: degree-" + std::to_string(k) + " residual not divisible by p");
        F.set_coeff(k - j, j, c.divided_by_p(1) * dinv);
      }
    }
  } else {
    const HondaLog hl = honda_logarithm(R, u_, D);
    const RingPtr& W = hl.Lambda.ring();
    const TruncSeries2 target = TruncSeries2::from_x(hl.Lambda) + TruncSeries2::from_y(hl.Lambda);
    F = TruncSeries2::x(W, D) + TruncSeries2::y(W, D);
    for (int k = 2; k < D; ++k) {
      const TruncSeries2 LF = compose_outer(hl.Lambda.resized(k + 1), F.resized(k + 1));
      for (int j = 0; j <= k; ++j) {
        const UnramifiedRingElem c = target.coeff(k - j, j) - LF.coeff(k - j, j);
        if (valuation(c) < hl.shift)
          throw CertificationError("Honda group law is not integral at degree " + std::to_string(k));
        F.set_coeff(k - j, j, c.divided_by_p(hl.shift));
      }
    }
  }
  law_ = F.at_precision(R);
  const AxiomReport rep = check_group_axioms(law_);
  if (!rep.ok()) throw CertificationError("constructed group law fails the axioms for " + label_);
}

TruncSeries1 FormalModule::p_series(int D) const {
  if (kind_ == GroupKind::LubinTate) return frob_->at_degree(D);
  return endomorphism(ExactScalar::from_int(static_cast<i64>(ring_->p())), D);
}

TruncSeries1 FormalModule::endomorphism(const ExactScalar& a, int D) const {
  if (kind_ == GroupKind::LubinTate) {
    if (!a.in_subfield(ring_, frob_->d))
      throw PreconditionError("[a] requested for a outside the coefficient ring of the module structure");
    if (a.is_integer(static_cast<i64>(ring_->p()))) return frob_->at_degree(D);
    return commuting_series(frob_->at_degree(D), a, D);
  }
  const HondaLog hl = honda_logarithm(ring_, u_, D);
  const LogConjugateResult r = solve_log_conjugate(hl.Lambda, hl.shift, hl.dlog, a.at(hl.Lambda.ring()));
  if (!r.series)
    throw CertificationError("no integral endomorphism with linear coefficient " + a.to_string() +
                             " (first obstruction at degree " + std::to_string(r.first_obstruction) + ")");
  return r.series->at_precision(ring_);
}

ExactScalar FormalModule::structure_generator() const {
  return ExactScalar::teichmuller(subfield_generator(ring_, structure_degree()));
}

std::optional<int> FormalModule::height(int h_max) const {
  const int D = static_cast<int>(ipow(ring_->p(), static_cast<unsigned>(h_max))) + 1;
  return height_of(p_series(D));
}

FormalModule FormalModule::base_change(int f_target) const {
  if (f_target % ring_->f() != 0) throw std::invalid_argument("base change: f must divide the target residue degree");
  const RingPtr target = RingDescriptor::make(ring_->p(), f_target, ring_->N());
  const RingEmbedding emb(ring_, target);
  FormalModule out;
  if (kind_ == GroupKind::LubinTate) {
    out = lubin_tate(FrobeniusSeries::validated(frob_->f.mapped(emb), frob_->d), law_.D());
  } else {
    std::vector<UnramifiedRingElem> u;
    for (const auto& x : u_) u.push_back(emb(x));
    out = honda(target, std::move(u), law_.D());
  }
  out.label_ = label_ + "@f=" + std::to_string(f_target);
  return out;
}

FormalModule FormalModule::at_precision(int N) const {
  const RingPtr target = ring_->with_precision(N);
  FormalModule out;
  if (kind_ == GroupKind::LubinTate) {
    out = lubin_tate(FrobeniusSeries::validated(frob_->f.at_precision(target), frob_->d), law_.D());
  } else {
    std::vector<UnramifiedRingElem> u;
    for (const auto& x : u_) u.push_back(x.at_precision(target));
    out = honda(target, std::move(u), law_.D());
  }
  out.label_ = label_;
  return out;
}

}  // namespace fglab
