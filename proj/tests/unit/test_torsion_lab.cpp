#include <gtest/gtest.h>

#include <chrono>

#include "fglab/errors.hpp"
#include "fglab/torsion_lab.hpp"
#include "printers.hpp"

using namespace fglab;

namespace {

FormalModule lt(u64 p, int f, int d, int N, int D = 8) {
  return FormalModule::lubin_tate(FrobeniusSeries::standard(RingDescriptor::make(p, f, N), d), D);
}

FormalModule honda01(int f, int N) {
  auto R = RingDescriptor::make(3, f, N);
  return FormalModule::honda(R, {UnramifiedRingElem(R, 0), UnramifiedRingElem(R, 1)}, 8);
}

}  // namespace

TEST(TorsionNewton, PolygonExamples) {
  auto R = RingDescriptor::make(3, 1, 5);
  auto P = TruncSeries1::from_ints(R, 3, {3, 0, 1});
  auto np = newton_polygon(P);
  ASSERT_TRUE(np.is_pure());
  EXPECT_EQ(np.segments[0].slope, Rational(1, 2));
  EXPECT_EQ(np.degree(), 2);

  auto Q = TruncSeries1::from_ints(R, 3, {9, 3, 1});
  auto nq = newton_polygon(Q);
  EXPECT_EQ(nq.vertices, (std::vector<std::pair<int, int>>{{0, 2}, {2, 0}}));
  ASSERT_TRUE(nq.is_pure());
  EXPECT_EQ(nq.segments[0].slope, Rational(1));

  // (X - p)(X - p^2 ... ) shape: slopes 1 and 2 in increasing order
  auto np2 = newton_polygon(std::vector<int>{3, 1, 0}, 5);
  ASSERT_EQ(np2.segments.size(), 2u);
  EXPECT_EQ(np2.segments[0].slope, Rational(1));
  EXPECT_EQ(np2.segments[1].slope, Rational(2));

  EXPECT_THROW(newton_polygon(std::vector<int>{4, kInfiniteValuation, 0}, 1), PrecisionError);
  EXPECT_NO_THROW(newton_polygon(std::vector<int>{1, kInfiniteValuation, 0}, 5));
  EXPECT_THROW(newton_polygon(std::vector<int>{1, 0, kInfiniteValuation}, 5), std::invalid_argument);
}

TEST(TorsionNewton, DegreeCertificates) {
  for (u64 p : {3ULL, 5ULL}) {
    auto G = lt(p, 1, 1, 4);
    for (int n : {1, 2}) {
      auto c = certify_torsion_degree(G, n);
      EXPECT_TRUE(c.ok) << p << " " << n << " " << c.polygon.to_string();
      EXPECT_EQ(c.degree, static_cast<int>(ipow(p, n - 1) * (p - 1)));
    }
  }
  auto H = lt(3, 2, 2, 3);
  EXPECT_EQ(certify_torsion_degree(H, 1).degree, 8);
  EXPECT_TRUE(certify_torsion_degree(H, 2).ok);
  EXPECT_EQ(certify_torsion_degree(H, 2).degree, 72);
  auto Ho = honda01(1, 3);
  auto ch = certify_torsion_degree(Ho, 1);
  EXPECT_TRUE(ch.ok);
  EXPECT_EQ(ch.degree, 8);
}

TEST(TorsionNewton, TorsionCounts) {
  EXPECT_EQ(torsion_count(lt(3, 1, 1, 4), 2).weierstrass_degree, 9);
  EXPECT_TRUE(torsion_count(lt(3, 2, 2, 3), 2).ok);
  EXPECT_TRUE(torsion_count(FormalModule::multiplicative(RingDescriptor::make(5, 1, 3), 8), 2).ok);
  EXPECT_EQ(torsion_count(lt(3, 1, 1, 4), 0).weierstrass_degree, 1);
}

TEST(TorsionModel, ArithmeticAndValuations) {
  auto G = lt(3, 1, 1, 4);
  auto M = TorsionFieldModel::build(G, 2);
  ASSERT_EQ(M.e(), 6);
  auto R = M.ring();
  auto z = M.z();
  EXPECT_EQ(M.valuation(z), 1);
  EXPECT_EQ(M.valuation(M.scalar(UnramifiedRingElem(R, 3))), 6);
  EXPECT_EQ(M.valuation(M.scalar(UnramifiedRingElem(R, 9))), 12);
  EXPECT_EQ(M.valuation(M.mul(M.scalar(UnramifiedRingElem(R, 3)), z) + M.pow(z, 2)), 2);
  EXPECT_EQ(M.valuation(M.pow(z, 6)), 6);
  EXPECT_EQ(M.valuation(M.pow(z, 13)), 13);
  EXPECT_FALSE(M.valuation(M.zero()).has_value());
  // z^e = -P_low(z)
  TorsionFieldModel::Elem low = M.zero();
  for (int i = 0; i < 6; ++i) low.set_coeff(i, M.P().coeff(i));
  EXPECT_TRUE((M.pow(z, 6) + low).is_zero());
  // multiplication agrees with repeated times_z
  auto a = M.one() + z + M.pow(z, 4);
  EXPECT_EQ(M.mul(a, M.pow(z, 3)), M.times_z(M.times_z(M.times_z(a))));
  EXPECT_EQ(M.mul(a, M.inverse_unit(a)), M.one());
  EXPECT_THROW(M.inverse_unit(z), PreconditionError);
}

TEST(TorsionModel, TorsionPointIsKilled) {
  auto G = lt(3, 1, 1, 4);
  auto M = TorsionFieldModel::build(G, 2);
  auto fz = M.evaluate(G.p_series(4), true);
  EXPECT_FALSE(fz.is_zero());
  EXPECT_TRUE(M.apply(G.p_series(4), fz, true).is_zero());

  auto Gm = FormalModule::multiplicative(RingDescriptor::make(3, 1, 3), 8);
  auto Mm = TorsionFieldModel::build(Gm, 1);
  EXPECT_TRUE(Mm.evaluate(Gm.p_series(Mm.required_truncation())).is_zero());
  EXPECT_THROW(Mm.evaluate(Gm.p_series(4)), PrecisionError);
}

TEST(TorsionAssumption, LubinTateAndMultiplicative) {
  for (int n : {1, 2}) {
    auto c = assumption_check(lt(3, 1, 1, 4), n);
    EXPECT_EQ(c.method, "enumeration");
    EXPECT_TRUE(c.holds) << n;
    EXPECT_EQ(c.found, ipow(3, n));
  }
  auto Gm = FormalModule::multiplicative(RingDescriptor::make(3, 1, 4), 8);
  auto cm = assumption_check(Gm, 1);
  EXPECT_EQ(cm.method, "enumeration");
  EXPECT_TRUE(cm.holds);
  auto ch = assumption_check(lt(3, 2, 2, 3), 1);
  EXPECT_TRUE(ch.holds);
  EXPECT_EQ(ch.found, 9u);
}

TEST(TorsionAssumption, HondaOverZ3Fails) {
  auto c = assumption_check(honda01(1, 4), 1);
  EXPECT_EQ(c.method, "root_count");
  EXPECT_FALSE(c.holds);
  EXPECT_LT(c.found, c.expected);
  // over W(F_9) the Teichmuller structure exists
  auto c2 = assumption_check(honda01(2, 3), 1);
  EXPECT_EQ(c2.method, "enumeration");
  EXPECT_TRUE(c2.holds);
}

TEST(TorsionBreaks, HeightOne) {
  auto t = ramification_breaks(lt(3, 1, 1, 6), 2);
  EXPECT_TRUE(t.ok());
  for (const auto& b : t.entries) {
    if (b.k == 0) EXPECT_EQ(b.i_sigma, 1);
    if (b.k == 1) EXPECT_EQ(b.i_sigma, 3);
    if (b.k == -1) EXPECT_FALSE(b.i_sigma.has_value());
  }
  EXPECT_THROW(ramification_breaks(honda01(1, 3), 1), PreconditionError);
}

TEST(TorsionBreaks, HeightTwoLevelOne) {
  auto t = ramification_breaks(lt(3, 2, 2, 4), 1);
  EXPECT_TRUE(t.ok());
}

TEST(TorsionMuP, MultiplicativeAndLubinTate) {
  for (u64 p : {3ULL, 5ULL}) {
    auto Gm = FormalModule::multiplicative(RingDescriptor::make(p, 1, 5), 8);
    auto r = mu_p_membership(Gm, 2);
    EXPECT_TRUE(r.member);
    EXPECT_EQ(r.d_used, 1);
    EXPECT_GE(r.verified_precision, 3);
  }
  auto r2 = mu_p_membership(lt(3, 2, 2, 4), 2);
  EXPECT_TRUE(r2.member);
  EXPECT_LE(r2.d_used, 2);
}
