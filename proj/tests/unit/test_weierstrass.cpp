#include <gtest/gtest.h>

#include <random>

#include "fglab/errors.hpp"
#include "fglab/weierstrass.hpp"
#include "printers.hpp"

using namespace fglab;

namespace {

TruncSeries1 ints(const RingPtr& R, int D, std::vector<i64> c) { return TruncSeries1::from_ints(R, D, c); }

TruncSeries1 random_series(const RingPtr& R, int D, std::mt19937_64& rng, int from = 0) {
  TruncSeries1 s(R, D);
  std::uniform_int_distribution<u64> dist(0, R->ppow(R->N()) - 1);
  for (int k = from; k < D; ++k) {
    std::vector<u64> c(static_cast<std::size_t>(R->f()));
    for (auto& x : c) x = dist(rng);
    s.set_coeff(k, UnramifiedRingElem(R, std::span<const u64>(c)));
  }
  return s;
}

TruncSeries1 lt_poly(const RingPtr& R, int q, int D) {
  std::vector<i64> c(static_cast<std::size_t>(q + 1), 0);
  c[1] = static_cast<i64>(R->p());
  c[static_cast<std::size_t>(q)] = 1;
  return ints(R, D, c);
}

}  // namespace

TEST(Weierstrass, PrepExamples) {
  auto R = RingDescriptor::make(3, 1, 5);
  const int D = 30;
  auto f = lt_poly(R, 3, D);
  auto w = weierstrass_prep(f);
  EXPECT_EQ(w.d, 3);
  EXPECT_EQ(w.P, ints(R, 4, {0, 3, 0, 1}));
  EXPECT_EQ(w.U, ints(R, w.window, {1}));

  auto g = ints(R, D, {3, 0, 1}) * ints(R, D, {1, 1});
  auto wg = weierstrass_prep(g);
  EXPECT_EQ(wg.P, ints(R, 3, {3, 0, 1}));
  EXPECT_EQ(wg.U, ints(R, wg.window, {1, 1}));
  EXPECT_EQ(wg.window, D - 5 * 2);

  auto u = ints(R, D, {2, 3, 5});
  auto wu = weierstrass_prep(u);
  EXPECT_EQ(wu.d, 0);
  EXPECT_EQ(wu.P, ints(R, 1, {1}));
  EXPECT_EQ(wu.U, u);

  EXPECT_THROW(weierstrass_prep(ints(R, D, {3, 9, 27})), PrecisionError);
  EXPECT_THROW(weierstrass_prep(ints(R, 8, {3, 0, 1})), PrecisionError);
}

TEST(Weierstrass, PrepRecoversRandomFactorizations) {
  std::mt19937_64 rng(7);
  for (int f : {1, 2}) {
    auto R = RingDescriptor::make(3, f, 4);
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 1 + trial % 4;
      const int D = 60;
      // distinguished P: lower coefficients divisible by p
      TruncSeries1 P = random_series(R, d + 1, rng);
      for (int k = 0; k < d; ++k) P.set_coeff(k, P.coeff(k).times_p(1));
      P.set_coeff(d, UnramifiedRingElem(R, 1));
      TruncSeries1 U = random_series(R, D, rng);
      U.set_coeff(0, UnramifiedRingElem(R, 1) + U.coeff(0).times_p(1));
      auto w = weierstrass_prep(P.resized(D) * U);
      EXPECT_EQ(w.d, d);
      EXPECT_EQ(w.P, P);
      EXPECT_EQ(w.U, U.resized(w.window));
      // perturbed start converges to the same factorization
      TruncSeries1 start = random_series(R, D - d, rng);
      auto w2 = weierstrass_prep(P.resized(D) * U, PrepOptions{false, &start});
      EXPECT_EQ(w2.P, w.P);
      EXPECT_EQ(w2.U, w.U);
    }
  }
}

TEST(Weierstrass, Claim22Examples) {
  auto R = RingDescriptor::make(3, 1, 4);
  const int q = 3, D = 30;
  auto pi = lt_poly(R, q, D);
  auto xq = TruncSeries1::monomial(R, D, q, UnramifiedRingElem(R, 1));
  auto s = claim22_step(xq, pi, q);
  for (const auto& a : s.a) EXPECT_TRUE(a.is_zero());
  EXPECT_EQ(s.g, ints(R, s.g.D(), {1}));
  // f1 is determined modulo p^{N-1}
  auto R3 = R->with_precision(3);
  EXPECT_EQ(s.f1.at_precision(R3), -TruncSeries1::identity(R3, s.f1.D()));

  auto x2 = TruncSeries1::monomial(R, D, 2, UnramifiedRingElem(R, 1));
  auto s2 = claim22_step(x2, pi, q);
  EXPECT_TRUE(s2.a[0].is_zero());
  EXPECT_TRUE(s2.a[1].is_zero());
  EXPECT_TRUE(s2.a[2].is_one());
  EXPECT_TRUE(s2.g.is_zero());
  EXPECT_TRUE(s2.f1.is_zero());

  auto s3 = claim22_step(pi, pi, q);
  for (const auto& a : s3.a) EXPECT_TRUE(a.is_zero());
  EXPECT_EQ(s3.g, ints(R, s3.g.D(), {1}));
  EXPECT_TRUE(s3.f1.is_zero());

  EXPECT_THROW(claim22_step(xq, pi, 2), PreconditionError);
}

TEST(Weierstrass, Claim22IdentityRandom) {
  std::mt19937_64 rng(11);
  auto R = RingDescriptor::make(5, 2, 3);
  auto pi = lt_poly(R, 25, 80);
  auto prep = weierstrass_prep(pi, PrepOptions{true, nullptr});
  for (int trial = 0; trial < 5; ++trial) {
    auto f = random_series(R, 80, rng);
    auto s = claim22_step(f, pi, prep);
    TruncSeries1 low(R, s.window);
    for (int i = 0; i < 25; ++i) low.set_coeff(i, s.a[static_cast<std::size_t>(i)]);
    TruncSeries1 pf1 = s.f1;
    for (int k = 0; k < pf1.D(); ++k) pf1.set_coeff(k, pf1.coeff(k).times_p(1));
    EXPECT_EQ(low + pi.resized(s.window) * s.g.resized(s.window) + pf1, f.resized(s.window));
  }
}

TEST(Weierstrass, PhiDecompositionExamples) {
  auto R = RingDescriptor::make(3, 1, 4);
  const int q = 3, D = 27;
  auto pi = lt_poly(R, q, D);
  auto dec = phi_basis_decompose(pi, pi, q, true);
  EXPECT_EQ(dec.levels, 9);
  EXPECT_EQ(dec.a[0], TruncSeries1::identity(R, 9));
  EXPECT_TRUE(dec.a[1].is_zero());
  EXPECT_TRUE(dec.a[2].is_zero());

  auto x2 = TruncSeries1::monomial(R, D, 2, UnramifiedRingElem(R, 1));
  auto d2 = phi_basis_decompose(x2, pi, q, true);
  EXPECT_EQ(d2.a[2], ints(R, 9, {1}));
  EXPECT_TRUE(d2.a[0].is_zero());

  auto d0 = phi_basis_decompose(TruncSeries1(R, D), pi, q, true);
  for (const auto& a : d0.a) EXPECT_TRUE(a.is_zero());
  // (3X + X^3)^9: the p^3 X^25 term bounds the window
  EXPECT_EQ(dec.recon_window, 25);
}

TEST(Weierstrass, PhiDecompositionRoundTrips) {
  std::mt19937_64 rng(2024);
  for (int f : {1, 2}) {
    auto R = RingDescriptor::make(3, f, 4);
    const int q = f == 1 ? 3 : 9;
    const int D = 9 * q;
    auto pi = lt_poly(R, q, D);
    for (int trial = 0; trial < 4; ++trial) {
      auto x = random_series(R, D, rng);
      auto dec = phi_basis_decompose(x, pi, q, true);
      const int W = dec.recon_window;
      EXPECT_EQ(phi_reconstruct(dec.a, pi, D).resized(W), x.resized(W));
      // components supported below the exact window come back unchanged
      std::vector<TruncSeries1> comps;
      for (int i = 0; i < q; ++i) comps.push_back(random_series(R, dec.exact_degree, rng).resized(dec.levels));
      auto back = phi_basis_decompose(phi_reconstruct(comps, pi, D), pi, q, true);
      for (int i = 0; i < q; ++i)
        EXPECT_EQ(back.a[static_cast<std::size_t>(i)].resized(dec.exact_degree),
                  comps[static_cast<std::size_t>(i)].resized(dec.exact_degree));
    }
  }
}

TEST(Weierstrass, PhiDecompositionNonPolynomialPi) {
  std::mt19937_64 rng(5);
  auto R = RingDescriptor::make(3, 1, 3);
  auto G = FormalModule::multiplicative(R, 4);
  // treated as a truncated series, so the prepared unit loses degrees
  const int D = 12;
  auto pi = G.p_series(200);
  auto x = random_series(R, D, rng);
  auto dec = phi_basis_decompose(x, pi, 3, false);
  EXPECT_EQ(phi_reconstruct(dec.a, pi, D).resized(dec.recon_window), x.resized(dec.recon_window));
  EXPECT_THROW(phi_basis_decompose(x, pi.resized(20), 3, false), PrecisionError);
}

TEST(Weierstrass, DivisionPolynomials) {
  for (u64 p : {3ULL, 5ULL}) {
    auto R = RingDescriptor::make(p, 1, 4);
    const int ip = static_cast<int>(p);
    auto G = FormalModule::lubin_tate(FrobeniusSeries::standard(R, 1), 6);
    auto d1 = division_polynomial(G, 1);
    std::vector<i64> c(p, 0);
    c[0] = ip;
    c[p - 1] = 1;
    EXPECT_EQ(d1.P, ints(R, ip, c));
    auto d2 = division_polynomial(G, 2);
    EXPECT_EQ(d2.e, ip * (ip - 1));
    // p + f^{p-1}
    auto f = lt_poly(R, ip, d2.e + 1);
    EXPECT_EQ(d2.P, f.pow(p - 1) + ints(R, d2.e + 1, {ip}));
    EXPECT_EQ(d2.full_degree, ip * ip);
    EXPECT_EQ(d1.e + d2.e + 1, d2.full_degree);

    auto M = FormalModule::multiplicative(R, 6);
    auto m1 = division_polynomial(M, 1);
    std::vector<i64> binom(p, 0);
    i64 b = 1;
    for (int k = 1; k <= ip; ++k) {
      b = b * (ip - k + 1) / k;
      binom[static_cast<std::size_t>(k - 1)] = b;
    }
    EXPECT_EQ(m1.P, ints(R, ip, binom));
  }
}

TEST(Weierstrass, DivisionPolynomialHonda) {
  auto R = RingDescriptor::make(3, 1, 3);
  auto G = FormalModule::honda(R, {UnramifiedRingElem(R, 0), UnramifiedRingElem(R, 1)}, 6);
  auto d1 = division_polynomial(G, 1);
  EXPECT_EQ(d1.e, 8);
  EXPECT_EQ(d1.full_degree, 9);
  EXPECT_EQ(d1.P.coeff(0), UnramifiedRingElem(R, 3));
}
