#include "fglab/torsion_lab.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fglab/errors.hpp"

namespace fglab {

namespace {

int require_height(const FormalModule& G) {
  const std::optional<int> h = G.height();
  if (!h) throw PrecisionError("height not detected below the search bound");
  return *h;
}

std::vector<u64> flat(const TruncSeries1& s) {
  std::vector<u64> out;
  const int f = s.ring()->f();
  for (int k = 0; k < s.D(); ++k) out.insert(out.end(), s.raw(k), s.raw(k) + f);
  return out;
}

// Codes of F_{p^d} inside F_{p^f}: zero and the powers of the subfield generator.
std::vector<u64> subfield_codes(const RingPtr& R, int d) {
  std::vector<u64> codes{0};
  const ResidueElem g = subfield_generator(R, d);
  const u64 order = ipow(R->p(), static_cast<unsigned>(d)) - 1;
  ResidueElem x = g;
  for (u64 i = 0; i < order; ++i) {
    codes.push_back(x.code());
    x = x * g;
  }
  std::sort(codes.begin(), codes.end());
  return codes;
}

}  // namespace

// ---------------------------------------------------------------------------
// Newton polygons
// ---------------------------------------------------------------------------

int NewtonPolygon::degree() const {
  int d = 0;
  for (const auto& s : segments) d += s.length;
  return d;
}

std::string NewtonPolygon::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < segments.size(); ++i)
    os << (i ? ", " : "") << segments[i].slope.numerator() << "/" << segments[i].slope.denominator() << " x "
       << segments[i].length;
  return os.str();
}

NewtonPolygon newton_polygon(const std::vector<int>& vals, int N) {
  if (vals.empty()) throw std::invalid_argument("newton_polygon: empty polynomial");
  const int deg = static_cast<int>(vals.size()) - 1;
  if (vals.back() == kInfiniteValuation) throw std::invalid_argument("newton_polygon: leading coefficient vanishes");
  if (vals.front() == kInfiniteValuation)
    throw PrecisionError("newton_polygon: constant coefficient indistinguishable from zero at precision " +
                         std::to_string(N));
  NewtonPolygon out;
  auto& hull = out.vertices;
  for (int i = 0; i <= deg; ++i) {
    if (vals[static_cast<std::size_t>(i)] == kInfiniteValuation) continue;
    const std::pair<int, int> c{i, vals[static_cast<std::size_t>(i)]};
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const i64 cross = static_cast<i64>(b.first - a.first) * (c.second - a.second) -
                        static_cast<i64>(b.second - a.second) * (c.first - a.first);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(c);
  }
  // A coefficient known only to be divisible by p^N must sit on or above the hull.
  for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
    const auto [i1, v1] = hull[s];
    const auto [i2, v2] = hull[s + 1];
    for (int i = i1 + 1; i < i2; ++i) {
      if (vals[static_cast<std::size_t>(i)] != kInfiniteValuation) continue;
      const Rational at = Rational(v1) + Rational(v2 - v1, i2 - i1) * (i - i1);
      if (Rational(N) < at)
        throw PrecisionError("newton_polygon: coefficient " + std::to_string(i) +
                             " vanishes mod p^N but could lie below the hull (precision insufficient)");
    }
  }
  for (std::size_t s = hull.size() - 1; s > 0; --s) {
    const auto [i1, v1] = hull[s - 1];
    const auto [i2, v2] = hull[s];
    out.segments.push_back(NewtonSegment{Rational(v1 - v2, i2 - i1), i2 - i1});
  }
  return out;
}

NewtonPolygon newton_polygon(const TruncSeries1& P) {
  std::vector<int> vals;
  for (int i = 0; i < P.D(); ++i) vals.push_back(P.coeff_valuation(i));
  while (vals.size() > 1 && vals.back() == kInfiniteValuation) vals.pop_back();
  return newton_polygon(vals, P.ring()->N());
}

TorsionDegreeCertificate certify_torsion_degree(const FormalModule& G, int n) {
  const int h = require_height(G);
  const u64 q = ipow(G.ring()->p(), static_cast<unsigned>(h));
  TorsionDegreeCertificate c;
  c.n = n;
  c.N = G.ring()->N();
  c.expected_degree = static_cast<int>(ipow(q, static_cast<unsigned>(n - 1)) * (q - 1));
  const DivisionPolynomial dp = division_polynomial(G, n);
  c.D = dp.D;
  c.degree = dp.e;
  c.polygon = newton_polygon(dp.P);
  c.ok = c.degree == c.expected_degree && c.polygon.is_pure() &&
         c.polygon.segments[0].slope == Rational(1, c.expected_degree);
  return c;
}

TorsionCountCertificate torsion_count(const FormalModule& G, int n) {
  TorsionCountCertificate c;
  c.n = n;
  if (n == 0) {
    c.weierstrass_degree = 1;
    c.expected = 1;
    c.ok = true;
    return c;
  }
  const int h = require_height(G);
  c.expected = ipow(G.ring()->p(), static_cast<unsigned>(n * h));
  const int D = static_cast<int>(c.expected) + 1;
  c.weierstrass_degree = p_power_series(G, n, D).first_unit_index();
  if (c.weierstrass_degree < 0) throw PrecisionError("torsion_count: [p^n] has no unit coefficient below " + std::to_string(D));
  c.ok = static_cast<u64>(c.weierstrass_degree) == c.expected;
  return c;
}

// ---------------------------------------------------------------------------
// TorsionFieldModel
// ---------------------------------------------------------------------------

TorsionFieldModel TorsionFieldModel::build(const FormalModule& G, int n) {
  return TorsionFieldModel(division_polynomial(G, n).P, n);
}

TorsionFieldModel::TorsionFieldModel(TruncSeries1 P, int level) : P_(std::move(P)), e_(P_.D() - 1), level_(level) {
  if (e_ < 1 || !P_.coeff(e_).is_one()) throw std::invalid_argument("torsion model: P must be monic of positive degree");
  if (P_.coeff(0).is_unit()) throw std::invalid_argument("torsion model: P must be distinguished");
  TruncSeries1 x(ring(), e_);
  for (int i = 0; i < e_; ++i) x.set_coeff(i, -P_.coeff(i));
  for (int j = 0; j + 1 < e_; ++j) {
    overflow_.push_back(x);
    x = times_z(x);
  }
}

TorsionFieldModel::Elem TorsionFieldModel::z() const {
  if (e_ == 1) return scalar(-P_.coeff(0));
  return TruncSeries1::monomial(ring(), e_, 1, UnramifiedRingElem(ring(), 1));
}

TorsionFieldModel::Elem TorsionFieldModel::scalar(const UnramifiedRingElem& c) const {
  return TruncSeries1::monomial(ring(), e_, 0, c);
}

TorsionFieldModel::Elem TorsionFieldModel::times_z(const Elem& a) const {
  const RingDescriptor& R = *ring();
  const int f = R.f();
  Elem out(ring(), e_);
  std::vector<u64> t(static_cast<std::size_t>(f));
  const u64* top = a.raw(e_ - 1);
  const bool top_zero = a.coeff_is_zero(e_ - 1);
  for (int k = 0; k < e_; ++k) {
    u64* o = out.raw(k);
    if (k > 0) std::copy(a.raw(k - 1), a.raw(k - 1) + f, o);
    if (top_zero) continue;
    R.mul_elem(top, P_.raw(k), t.data());
    for (int s = 0; s < f; ++s) o[s] = R.sub(o[s], t[static_cast<std::size_t>(s)]);
  }
  return out;
}

void TorsionFieldModel::reduce_into(const TruncSeries1& wide, Elem& out) const {
  const RingDescriptor& R = *ring();
  const int f = R.f();
  out = wide.resized(e_);
  std::vector<u64> t(static_cast<std::size_t>(f));
  for (int j = 0; j + e_ < wide.D(); ++j) {
    if (wide.coeff_is_zero(e_ + j)) continue;
    const u64* c = wide.raw(e_ + j);
    const TruncSeries1& row = overflow_[static_cast<std::size_t>(j)];
    for (int k = 0; k < e_; ++k) {
      if (row.coeff_is_zero(k)) continue;
      R.mul_elem(c, row.raw(k), t.data());
      u64* o = out.raw(k);
      for (int s = 0; s < f; ++s) o[s] = R.add(o[s], t[static_cast<std::size_t>(s)]);
    }
  }
}

TorsionFieldModel::Elem TorsionFieldModel::mul(const Elem& a, const Elem& b) const {
  const int W = 2 * e_ - 1;
  Elem out;
  reduce_into(a.resized(W) * b.resized(W), out);
  return out;
}

TorsionFieldModel::Elem TorsionFieldModel::pow(const Elem& a, u64 k) const {
  Elem r = one(), b = a;
  while (k) {
    if (k & 1) r = mul(r, b);
    k >>= 1;
    if (k) b = mul(b, b);
  }
  return r;
}

TorsionFieldModel::Elem TorsionFieldModel::inverse_unit(const Elem& a) const {
  if (!a.coeff(0).is_unit()) throw PreconditionError("torsion model: element is not a unit");
  Elem x = scalar(invert(a.coeff(0)));
  const Elem two = scalar(UnramifiedRingElem(ring(), 2));
  for (int it = 0; it < 64; ++it) {
    Elem next = mul(x, two - mul(a, x));
    if (next == x) return x;
    x = std::move(next);
  }
  throw CertificationError("torsion model: unit inversion did not converge");
}

std::optional<int> TorsionFieldModel::valuation(const Elem& a) const {
  std::optional<int> best;
  for (int j = 0; j < e_; ++j) {
    if (a.coeff_is_zero(j)) continue;
    const int v = e_ * a.coeff_valuation(j) + j;
    if (!best || v < *best) best = v;
  }
  return best;
}

TorsionFieldModel::Elem TorsionFieldModel::evaluate(const TruncSeries1& s, bool exact_polynomial) const {
  if (!exact_polynomial && s.D() < required_truncation())
    throw PrecisionError("insufficient truncation for this level: need D >= N*e = " +
                         std::to_string(required_truncation()) + ", have " + std::to_string(s.D()));
  Elem acc = zero();
  int top = s.D() - 1;
  while (top >= 0 && s.coeff_is_zero(top)) --top;
  const RingDescriptor& R = *ring();
  for (int k = top; k >= 0; --k) {
    acc = times_z(acc);
    if (s.coeff_is_zero(k)) continue;
    u64* o = acc.raw(0);
    for (int t = 0; t < R.f(); ++t) o[t] = R.add(o[t], s.raw(k)[t]);
  }
  return acc;
}

TorsionFieldModel::Elem TorsionFieldModel::apply(const TruncSeries1& s, const Elem& x, bool exact_polynomial) const {
  if (!exact_polynomial && s.D() < required_truncation())
    throw PrecisionError("insufficient truncation for this level: need D >= N*e = " +
                         std::to_string(required_truncation()) + ", have " + std::to_string(s.D()));
  if (x.coeff(0).is_unit()) throw PreconditionError("torsion model: series evaluated at a unit");
  std::vector<int> nz;
  for (int k = s.D() - 1; k >= 0; --k)
    if (!s.coeff_is_zero(k)) nz.push_back(k);
  if (nz.empty()) return zero();
  std::map<int, Elem> gap_pow;
  auto xpow = [&](int g) -> const Elem& {
    auto it = gap_pow.find(g);
    if (it == gap_pow.end()) it = gap_pow.emplace(g, pow(x, static_cast<u64>(g))).first;
    return it->second;
  };
  Elem acc = scalar(s.coeff(nz[0]));
  for (std::size_t i = 1; i < nz.size(); ++i) {
    acc = mul(acc, xpow(nz[i - 1] - nz[i]));
    acc += scalar(s.coeff(nz[i]));
  }
  if (nz.back() > 0) acc = mul(acc, xpow(nz.back()));
  return acc;
}

TorsionFieldModel::Elem TorsionFieldModel::apply2(const TruncSeries2& F, const Elem& x, const Elem& y) const {
  const int T = F.D();
  std::vector<Elem> xp{one()}, yp{one()};
  for (int i = 1; i < T; ++i) {
    xp.push_back(mul(xp.back(), x));
    yp.push_back(mul(yp.back(), y));
  }
  Elem acc = zero();
  for (int s = 0; s < T; ++s)
    for (int j = 0; j <= s; ++j)
      if (!F.coeff_is_zero(s - j, j))
        acc += mul(xp[static_cast<std::size_t>(s - j)], yp[static_cast<std::size_t>(j)]).scaled(F.coeff(s - j, j));
  return acc;
}

std::optional<int> element_valuation(const TorsionFieldModel& model, const TorsionFieldModel::Elem& y) {
  return model.valuation(y);
}

TorsionFieldModel::Elem evaluate_series_at_z(const TruncSeries1& s, const TorsionFieldModel& model) {
  return model.evaluate(s);
}

// ---------------------------------------------------------------------------
// assumption_check
// ---------------------------------------------------------------------------

namespace {

// Residue degree of the O_F-structure available on G: the Lubin-Tate
// coefficient ring, or h for a Honda group whose Teichmuller endomorphism of
// F_{p^h} integrates to degree D.
int available_structure(const FormalModule& G, int h, int D) {
  if (G.kind() == GroupKind::LubinTate) return G.structure_degree();
  if (G.ring()->f() % h != 0) return 1;
  try {
    G.endomorphism(ExactScalar::teichmuller(subfield_generator(G.ring(), h)), D);
    return h;
  } catch (const CertificationError&) {
    return 1;
  }
}

void enumerate_structure(const FormalModule& G, const TorsionFieldModel& model, int n, int h, AssumptionCertificate& c) {
  const RingPtr& R = G.ring();
  const std::vector<u64> codes = subfield_codes(R, h);
  const int D = c.D;
  const bool poly = G.p_series_is_polynomial();
  const TruncSeries1 ps = G.p_series(D);
  std::set<std::vector<u64>> seen;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  u64 total = 0;
  while (true) {
    ExactScalar a;
    for (int i = 0; i < n; ++i) a.teichmuller_digits.push_back(codes[idx[static_cast<std::size_t>(i)]]);
    const TorsionFieldModel::Elem x = model.evaluate(G.endomorphism(a, D));
    TorsionFieldModel::Elem y = x;
    for (int i = 0; i < n; ++i) y = model.apply(ps, y, poly);
    if (!y.is_zero()) c.annihilated = false;
    seen.insert(flat(x));
    ++total;
    int pos = 0;
    while (pos < n && ++idx[static_cast<std::size_t>(pos)] == codes.size()) idx[static_cast<std::size_t>(pos++)] = 0;
    if (pos == n) break;
  }
  c.expected = ipow(static_cast<u64>(codes.size()), static_cast<unsigned>(n));
  c.found = seen.size();
  c.distinct = seen.size() == total;
  c.holds = c.annihilated && c.distinct && total == c.expected;
}

// Counts roots of P in the model's field with v_L = 1.  A prefix y = sum_{j<=k}
// c_j z^j can approach a root only if v(P(y)) >= e + k; a prefix with
// v(P(y)) > 2 v(P'(y)) and v(P(y)) - v(P'(y)) > k isolates a unique root.
void count_roots(const TorsionFieldModel& model, AssumptionCertificate& c) {
  const RingPtr& R = model.ring();
  const int e = model.e();
  const int cap = model.required_truncation();
  const TruncSeries1& P = model.P();
  const TruncSeries1 dP = P.derivative();
  std::vector<TorsionFieldModel::Elem> digits;
  for (u64 code = 0; code < R->residue_size(); ++code)
    digits.push_back(model.scalar(teichmuller_lift(ResidueElem::from_code(R, code))));
  std::vector<TorsionFieldModel::Elem> zpow{model.one()};
  auto zp = [&](int k) -> const TorsionFieldModel::Elem& {
    while (static_cast<int>(zpow.size()) <= k) zpow.push_back(model.times_z(zpow.back()));
    return zpow[static_cast<std::size_t>(k)];
  };
  auto horner = [&](const TruncSeries1& Q, const TorsionFieldModel::Elem& y) {
    TorsionFieldModel::Elem acc = model.zero();
    for (int i = Q.D() - 1; i >= 0; --i) {
      acc = model.mul(acc, y);
      if (!Q.coeff_is_zero(i)) acc += model.scalar(Q.coeff(i));
    }
    return acc;
  };
  std::vector<std::pair<TorsionFieldModel::Elem, int>> stack;
  for (std::size_t i = 1; i < digits.size(); ++i) stack.emplace_back(model.mul(digits[i], zp(1)), 1);
  u64 found = 0;
  while (!stack.empty()) {
    auto [y, k] = std::move(stack.back());
    stack.pop_back();
    const int a = model.valuation(horner(P, y)).value_or(cap);
    if (a < e + k) continue;
    const std::optional<int> b = model.valuation(horner(dP, y));
    if (!b) throw PrecisionError("root count: derivative vanishes at precision N");
    if (a > 2 * *b && a - *b > k) {
      ++found;
      continue;
    }
    if (k + 1 >= cap) throw PrecisionError("root count: digit search exceeded N*e; raise N");
    for (const auto& d : digits) stack.emplace_back(y + model.mul(d, zp(k + 1)), k + 1);
  }
  c.expected = static_cast<u64>(e);
  c.found = found;
  c.holds = found == static_cast<u64>(e);
}

}  // namespace

AssumptionCertificate assumption_check(const FormalModule& G, int n) {
  if (n < 1) throw std::invalid_argument("assumption_check: n must be at least 1");
  const int h = require_height(G);
  const TorsionFieldModel model = TorsionFieldModel::build(G, n);
  AssumptionCertificate c;
  c.n = n;
  c.N = G.ring()->N();
  c.D = model.required_truncation();
  c.structure_degree = available_structure(G, h, c.D);
  if (c.structure_degree == h) {
    c.method = "enumeration";
    enumerate_structure(G, model, n, h, c);
  } else {
    c.method = "root_count";
    count_roots(model, c);
  }
  return c;
}

// ---------------------------------------------------------------------------
// ramification breaks
// ---------------------------------------------------------------------------

bool BreakTable::ok() const {
  return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const BreakEntry& b) { return b.ok; });
}

BreakTable ramification_breaks(const FormalModule& G, int n) {
  const int h = require_height(G);
  const RingPtr& R = G.ring();
  const u64 p = R->p();
  if (R->f() % h != 0) throw PreconditionError("ramification_breaks: residue degree not divisible by the height");
  const TorsionFieldModel model = TorsionFieldModel::build(G, n);
  BreakTable t;
  t.n = n;
  t.q = static_cast<int>(ipow(p, static_cast<unsigned>(h)));
  t.N = R->N();
  t.D = model.required_truncation();
  t.resolution = static_cast<int>(ipow(static_cast<u64>(t.q), static_cast<unsigned>(n - 1))) + 3;

  auto endo = [&](const ExactScalar& a) {
    try {
      return G.endomorphism(a, t.D);
    } catch (const CertificationError& e) {
      throw PreconditionError(std::string("ramification_breaks: module is not of full height: ") + e.what());
    } catch (const PreconditionError& e) {
      throw PreconditionError(std::string("ramification_breaks: module is not of full height: ") + e.what());
    }
  };
  const ResidueElem g = subfield_generator(R, h);
  // Check the structure before spending time on the table.
  endo(ExactScalar::teichmuller(g));

  const TruncSeries2 F = G.law_at(t.resolution);
  const TorsionFieldModel::Elem zz = model.z();
  const TorsionFieldModel::Elem iz = model.evaluate(endo(ExactScalar::from_int(-1)));

  std::vector<std::pair<int, ExactScalar>> reps;
  reps.emplace_back(-1, ExactScalar::from_int(1));
  for (const ResidueElem& w : {g, g * g})
    if (!(w - ResidueElem::from_code(R, 1)).is_zero()) reps.emplace_back(0, ExactScalar::teichmuller(w));
  for (int k = 1; k < n; ++k)
    for (const ResidueElem& w : {ResidueElem::from_code(R, 1), g}) {
      ExactScalar u = ExactScalar::from_int(1);
      u.teichmuller_digits.assign(static_cast<std::size_t>(k), 0);
      u.teichmuller_digits.push_back(w.code());
      reps.emplace_back(k, u);
    }

  for (const auto& [k, u] : reps) {
    BreakEntry b;
    b.k = k;
    b.u = u.to_string();
    const TorsionFieldModel::Elem x = model.evaluate(endo(u));
    const std::optional<int> vs = model.valuation(model.apply2(F, x, iz));
    if (vs && *vs < t.resolution) b.i_sigma = vs;
    b.i_diff = model.valuation(x - zz);
    if (k >= 0) b.expected = static_cast<int>(ipow(static_cast<u64>(t.q), static_cast<unsigned>(k)));
    b.ok = b.i_sigma == b.expected && b.i_diff == b.expected;
    t.entries.push_back(std::move(b));
  }
  return t;
}

// ---------------------------------------------------------------------------
// mu_p
// ---------------------------------------------------------------------------

MuPResult mu_p_membership(const FormalModule& G, int d_max) {
  MuPResult out;
  const u64 p = G.ring()->p();
  for (int d = 1; d <= d_max; ++d) {
    const FormalModule Gd = d == 1 ? G : G.base_change(G.ring()->f() * d);
    const TorsionFieldModel model = TorsionFieldModel::build(Gd, 1);
    const RingPtr& R = model.ring();
    const int e = model.e();
    if (e % static_cast<int>(p - 1) != 0) throw CertificationError("mu_p: p - 1 does not divide the level-1 degree");
    const int m = e / static_cast<int>(p - 1);
    // z^e = p V with V a unit; y = z^m s and y^{p-1} = -p needs s^{p-1} = -1/V.
    TorsionFieldModel::Elem V = model.zero();
    for (int i = 0; i < e; ++i) V.set_coeff(i, -model.P().coeff(i).divided_by_p(1));
    const TorsionFieldModel::Elem w = -model.inverse_unit(V);
    const ResidueElem res = w.coeff(0).residue();
    if (!residue_power_test(res, p - 1)) {
      out.note += "d=" + std::to_string(d) + ": residue of -1/V is not a (p-1)-th power; ";
      continue;
    }
    ResidueElem r;
    for (u64 code = 1; code < R->residue_size(); ++code) {
      const ResidueElem cand = ResidueElem::from_code(R, code);
      if (cand.pow(p - 1) == res) {
        r = cand;
        break;
      }
    }
    TorsionFieldModel::Elem s = model.scalar(teichmuller_lift(r));
    const TorsionFieldModel::Elem pm1 = model.scalar(UnramifiedRingElem(R, static_cast<i64>(p - 1)));
    for (int it = 0; it < 64; ++it) {
      const TorsionFieldModel::Elem g = model.pow(s, p - 1) - w;
      if (g.is_zero()) break;
      s -= model.mul(g, model.inverse_unit(model.mul(pm1, model.pow(s, p - 2))));
    }
    out.witness = model.mul(model.pow(model.z(), static_cast<u64>(m)), s);
    const TorsionFieldModel::Elem check = model.pow(out.witness, p - 1) + model.scalar(UnramifiedRingElem(R, static_cast<i64>(p)));
    int vp = R->N();
    for (int j = 0; j < e; ++j)
      if (!check.coeff_is_zero(j)) vp = std::min(vp, check.coeff_valuation(j));
    out.verified_precision = vp;
    out.member = true;
    out.d_used = d;
    return out;
  }
  return out;
}

}  // namespace fglab
