#include "fglab/weierstrass.hpp"

#include <algorithm>
#include <stdexcept>

#include "fglab/errors.hpp"

namespace fglab {

WeierstrassData weierstrass_prep(const TruncSeries1& fin, const PrepOptions& opt) {
  const RingPtr& R = fin.ring();
  const int N = R->N();
  const int d = fin.first_unit_index();
  if (d < 0) throw PrecisionError("Weierstrass degree exceeds truncation " + std::to_string(fin.D()));
  WeierstrassData out;
  out.d = d;
  out.P = TruncSeries1::from_ints(R, d + 1, {});
  out.P.set_coeff(d, UnramifiedRingElem(R, 1));
  if (d == 0) {
    out.U = fin;
    out.window = fin.D();
    return out;
  }
  out.window = opt.exact_polynomial ? fin.D() : fin.D() - N * d;
  if (out.window <= d)
    throw PrecisionError("truncation " + std::to_string(fin.D()) + " too small to prepare a series of Weierstrass degree " +
                         std::to_string(d) + " at precision " + std::to_string(N));

  // f = A + X^d B with deg A < d; 1/U = V solves V = B^{-1} (1 - (A V)_{>=d} / X^d).
  const int Dw = opt.exact_polynomial ? fin.D() + N * d : fin.D();
  const int T = Dw - d;
  TruncSeries1 A(R, Dw), B(R, T);
  for (int k = 0; k < d; ++k) A.set_coeff(k, fin.coeff(k));
  for (int k = 0; k < T && k + d < fin.D(); ++k) B.set_coeff(k, fin.coeff(k + d));
  const TruncSeries1 Binv = inverse_series(B);
  const TruncSeries1 one = TruncSeries1::from_ints(R, T, {1});
  TruncSeries1 V = opt.start ? opt.start->resized(T) : Binv;
  bool converged = false;
  for (int it = 0; it < N + 2; ++it) {
    const TruncSeries1 AV = A * V.resized(Dw);
    TruncSeries1 tau(R, T);
    for (int k = 0; k < T; ++k) tau.set_coeff(k, AV.coeff(k + d));
    TruncSeries1 next = Binv * (one - tau);
    if (next == V) {
      converged = true;
      break;
    }
    V = std::move(next);
  }
  if (!converged) throw CertificationError("Weierstrass iteration did not converge");

  const TruncSeries1 AV = A * V.resized(Dw);
  for (int k = 0; k < d; ++k) out.P.set_coeff(k, AV.coeff(k));
  out.U = inverse_series(V).resized(out.window);
  if (out.P.resized(out.window) * out.U != fin.resized(out.window))
    throw CertificationError("Weierstrass factorization failed verification");
  return out;
}

Claim22Step claim22_step(const TruncSeries1& f, const TruncSeries1& piSeries, const WeierstrassData& prep) {
  const RingPtr& R = f.ring();
  const int q = prep.d;
  const int Tg = std::min(f.D() - q, prep.window);
  if (Tg < 1) throw PrecisionError("claim22_step: truncation must exceed the Weierstrass degree of [pi]");
  const int W = q + Tg;
  if (piSeries.D() < W) throw PrecisionError("claim22_step: [pi]-series known only to degree " + std::to_string(piSeries.D()));

  Claim22Step out;
  out.window = W;
  TruncSeries1 low(R, W);
  const u64 p = R->p();
  for (int i = 0; i < q; ++i) {
    std::vector<i64> digits(static_cast<std::size_t>(R->f()));
    if (i < f.D())
      for (int t = 0; t < R->f(); ++t) digits[static_cast<std::size_t>(t)] = static_cast<i64>(f.raw(i)[t] % p);
    out.a.emplace_back(R, std::move(digits));
    low.set_coeff(i, out.a.back());
  }
  TruncSeries1 s(R, Tg);
  for (int k = 0; k < Tg; ++k) s.set_coeff(k, f.coeff(q + k));
  out.g = s * inverse_series(prep.U.resized(Tg));
  const TruncSeries1 x = f.resized(W) - low - piSeries.resized(W) * out.g.resized(W);
  try {
    out.f1 = x.divided_by_p(1);
  } catch (const std::domain_error&) {
    throw PreconditionError("claim22_step: [pi]-series is not X^q times a unit modulo p");
  }
  return out;
}

Claim22Step claim22_step(const TruncSeries1& f, const TruncSeries1& piSeries, int q) {
  const WeierstrassData prep = weierstrass_prep(piSeries);
  if (prep.d != q)
    throw PreconditionError("claim22_step: [pi]-series has Weierstrass degree " + std::to_string(prep.d) + ", expected " +
                            std::to_string(q));
  return claim22_step(f, piSeries, prep);
}

PhiDecomposition phi_basis_decompose(const TruncSeries1& f, const TruncSeries1& piSeries, int q,
                                     bool pi_is_polynomial) {
  const RingPtr& R = f.ring();
  const int N = R->N();
  const int D = f.D();
  PhiDecomposition out;
  out.q = q;
  out.levels = D / q;
  const int K = out.levels;
  if (K < 1) throw PrecisionError("phi_basis_decompose: truncation below q");

  // Internal truncation large enough that the zero-padded input has exact
  // components below degree K.
  const int Dint = q * (K + N + 1);
  TruncSeries1 pi;
  WeierstrassData prep;
  if (pi_is_polynomial) {
    pi = piSeries.resized(Dint);
    prep = weierstrass_prep(pi, PrepOptions{true, nullptr});
  } else {
    if (piSeries.D() < Dint + N * q)
      throw PrecisionError("phi_basis_decompose: [pi]-series needed to degree " + std::to_string(Dint + N * q));
    pi = piSeries.resized(Dint + N * q);
    prep = weierstrass_prep(pi);
  }
  if (prep.d != q)
    throw PreconditionError("phi_basis_decompose: [pi]-series has Weierstrass degree " + std::to_string(prep.d));

  out.a.assign(static_cast<std::size_t>(q), TruncSeries1(R, K));
  TruncSeries1 cur = f.resized(Dint);
  for (int k = 0; k < K; ++k) {
    std::vector<UnramifiedRingElem> A(static_cast<std::size_t>(q), UnramifiedRingElem(R));
    TruncSeries1 G(R, cur.D() - q);
    TruncSeries1 r = cur;
    for (int t = 0; t < N && !r.is_zero(); ++t) {
      const Claim22Step st = claim22_step(r, pi, prep);
      ++out.n_iter;
      for (int i = 0; i < q; ++i) A[static_cast<std::size_t>(i)] += st.a[static_cast<std::size_t>(i)].times_p(t);
      TruncSeries1 g = st.g.resized(G.D());
      for (int j = 0; j < G.D(); ++j) g.set_coeff(j, g.coeff(j).times_p(t));
      G += g;
      r = st.f1.resized(cur.D());
    }
    for (int i = 0; i < q; ++i) out.a[static_cast<std::size_t>(i)].set_coeff(k, A[static_cast<std::size_t>(i)]);
    cur = std::move(G);
  }
  out.exact_degree = std::max(0, K - N + 1);
  out.recon_window = std::min(D, pi.resized(D).pow(static_cast<u64>(K)).order());
  return out;
}

TruncSeries1 phi_reconstruct(const std::vector<TruncSeries1>& a, const TruncSeries1& piSeries, int D) {
  const TruncSeries1 pi = piSeries.resized(D);
  TruncSeries1 out(pi.ring(), D);
  for (std::size_t i = 0; i < a.size(); ++i) out += compose(a[i].resized(D), pi).times_x(static_cast<int>(i));
  return out;
}

TruncSeries1 p_power_series(const FormalModule& G, int n, int D) {
  if (n < 0) throw std::invalid_argument("p_power_series: n must be non-negative");
  if (n == 0) return TruncSeries1::identity(G.ring(), D);
  const TruncSeries1 s = G.p_series(D);
  TruncSeries1 r = s;
  for (int i = 1; i < n; ++i) r = compose(s, r);
  return r;
}

DivisionPolynomial division_polynomial(const FormalModule& G, int n, int D) {
  if (n < 1) throw std::invalid_argument("division_polynomial: n must be at least 1");
  const std::optional<int> h = G.height();
  if (!h) throw PrecisionError("division_polynomial: height not detected");
  const int N = G.ring()->N();
  const u64 p = G.ring()->p();
  const int q = static_cast<int>(ipow(p, static_cast<unsigned>(*h)));
  const int qn = static_cast<int>(ipow(static_cast<u64>(q), static_cast<unsigned>(n)));
  DivisionPolynomial out;
  out.n = n;
  const int e = qn / q * (q - 1);
  const bool poly = G.p_series_is_polynomial();
  if (D == 0) D = poly ? qn + 1 : std::max(e * (N + 1) + 1, qn + 1);
  out.D = D;
  const TruncSeries1 ratio = G.p_series(D + 1).divided_by_x(1);
  const TruncSeries1 Phi = n == 1 ? ratio : compose(ratio, p_power_series(G, n - 1, D));
  WeierstrassData prep = weierstrass_prep(Phi, PrepOptions{poly, nullptr});
  out.e = prep.d;
  out.P = std::move(prep.P);
  out.U = std::move(prep.U);
  out.full_degree = p_power_series(G, n, std::max(D, qn + 1)).first_unit_index();
  return out;
}

}  // namespace fglab
