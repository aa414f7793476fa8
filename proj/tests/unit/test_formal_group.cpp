#include <gtest/gtest.h>

#include <random>

#include "fglab/errors.hpp"
#include "fglab/formal_group.hpp"
#include "printers.hpp"

using namespace fglab;

namespace {

UnramifiedRingElem I(const RingPtr& R, i64 v) { return UnramifiedRingElem(R, v); }

TruncSeries1 X1(const RingPtr& R, int D) { return TruncSeries1::identity(R, D); }

}  // namespace

TEST(FormalGroup, LubinTateLowDegrees) {
  auto R = RingDescriptor::make(3, 1, 2);
  auto G = FormalModule::lubin_tate(FrobeniusSeries::standard(R, 1), 4);
  const auto& F = G.law();
  EXPECT_TRUE(F.coeff(2, 0).is_zero());
  EXPECT_TRUE(F.coeff(1, 1).is_zero());
  EXPECT_TRUE(F.coeff(0, 2).is_zero());
  // (X^2 Y + X Y^2) / 8 and 1/8 = 8 mod 9
  EXPECT_EQ(F.coeff(2, 1), I(R, 8));
  EXPECT_EQ(F.coeff(1, 2), I(R, 8));
  EXPECT_TRUE(F.coeff(3, 0).is_zero());
}

TEST(FormalGroup, MultiplicativeIsExact) {
  for (u64 p : {3u, 5u}) {
    auto R = RingDescriptor::make(p, 1, 5);
    auto G = FormalModule::multiplicative(R, 10);
    auto X = TruncSeries2::x(R, 10), Y = TruncSeries2::y(R, 10);
    EXPECT_EQ(G.law(), X + Y + X * Y);
    EXPECT_EQ(G.height(), 1);
  }
}

TEST(FormalGroup, HondaBasics) {
  auto R = RingDescriptor::make(3, 1, 5);
  auto add = FormalModule::honda(R, {}, 10);
  EXPECT_EQ(add.law(), TruncSeries2::x(R, 10) + TruncSeries2::y(R, 10));
  auto h1 = FormalModule::honda(R, {I(R, 1)}, 12);
  EXPECT_TRUE(check_group_axioms(h1.law()).ok());
  EXPECT_EQ(h1.height(), 1);
  auto h2 = FormalModule::honda(R, {I(R, 0), I(R, 1)}, 12);
  EXPECT_EQ(h2.height(), 2);
  EXPECT_FALSE(add.height().has_value());
}

TEST(FormalGroup, HondaLogarithmMatchesLawLogarithm) {
  // logarithm computed from F agrees with the functional-equation logarithm
  auto R = RingDescriptor::make(3, 1, 6);
  auto G = FormalModule::honda(R, {I(R, 0), I(R, 1)}, 12);
  auto lg = logarithm(G.law());
  // lambda = X + X^9/3
  ScaledSeries1 expect(R, 12);
  expect.set_coeff(1, ScaledFieldElem(I(R, 1)));
  expect.set_coeff(9, ScaledFieldElem::from_parts(I(R, 1), -1, 6));
  EXPECT_TRUE(lg.agrees_with(expect, lg.min_abs_prec()));
}

TEST(FormalGroup, HeightFromSeries) {
  auto R = RingDescriptor::make(3, 1, 4);
  EXPECT_EQ(height_of(TruncSeries1::from_ints(R, 12, {0, 3, 0, 1})), 1);
  std::vector<i64> c(11, 0);
  c[1] = 3;
  c[9] = 1;
  EXPECT_EQ(height_of(TruncSeries1::from_ints(R, 12, c)), 2);
  EXPECT_FALSE(height_of(TruncSeries1::from_ints(R, 30, {0, 3, 3})).has_value());
  EXPECT_THROW(height_of(TruncSeries1::from_ints(R, 12, {0, 3, 1})), CertificationError);
}

TEST(FormalGroup, LogarithmAndNegationExamples) {
  auto R = RingDescriptor::make(3, 1, 6);
  const int D = 10;
  auto X = TruncSeries2::x(R, D), Y = TruncSeries2::y(R, D);
  auto mult = X + Y + X * Y;
  auto lg = logarithm(mult);
  for (int k = 1; k < D; ++k) {
    auto expect = ScaledFieldElem(I(R, k % 2 ? 1 : -1)) / ScaledFieldElem(I(R, k));
    EXPECT_TRUE((lg.coeff(k) - expect).is_zero()) << k;
  }
  EXPECT_TRUE(logarithm(X + Y).agrees_with(ScaledSeries1(X1(R, D)), 6));
  EXPECT_EQ(formal_negation(X + Y), -X1(R, D));
  std::vector<i64> alt(D);
  for (int k = 1; k < D; ++k) alt[static_cast<std::size_t>(k)] = k % 2 ? -1 : 1;
  EXPECT_EQ(formal_negation(mult), TruncSeries1::from_ints(R, D, alt));
}

TEST(FormalGroup, NegationAndLogIdentities) {
  std::mt19937_64 rng(21);
  auto R = RingDescriptor::make(3, 1, 6);
  for (int t = 0; t < 5; ++t) {
    // random Frobenius series pX + p*(...) + X^3 + p*(...)
    std::vector<i64> c(8, 0);
    c[1] = 3;
    c[3] = 1;
    for (int k = 2; k < 8; ++k)
      if (k != 3) c[static_cast<std::size_t>(k)] = 3 * static_cast<i64>(rng() % 20);
    auto G = FormalModule::lubin_tate(FrobeniusSeries::validated(TruncSeries1::from_ints(R, 8, c), 1), 12);
    const auto& F = G.law();
    auto iota = formal_negation(F);
    EXPECT_TRUE(substitute2(F, X1(R, 12), iota).is_zero());
    auto lg = logarithm(F);
    // lambda(F(g, h)) = lambda(g) + lambda(h)
    TruncSeries1 g(R, 12), h(R, 12);
    for (int k = 1; k < 12; ++k) {
      g.set_coeff(k, I(R, static_cast<i64>(rng() % 729)));
      h.set_coeff(k, I(R, static_cast<i64>(rng() % 729)));
    }
    auto lhs = compose(lg, ScaledSeries1(substitute2(F, g, h)));
    auto rhs = compose(lg, ScaledSeries1(g)) + compose(lg, ScaledSeries1(h));
    const int budget = 6 - floor_log(3, 11);
    EXPECT_TRUE(lhs.agrees_with(rhs, budget));
    auto ex = exponential(F);
    EXPECT_TRUE(compose(ex, lg).agrees_with(ScaledSeries1(X1(R, 12)), budget));
  }
}

TEST(FormalGroup, ModuleAxiomsHeightTwo) {
  auto R = RingDescriptor::make(3, 2, 4);
  auto G = FormalModule::lubin_tate(FrobeniusSeries::standard(R, 2), 12);
  EXPECT_EQ(G.height(), 2);
  const auto& F = G.law();
  const int D = 12;
  auto w = G.structure_generator();
  auto r = ResidueElem::from_code(R, w.teichmuller_digits[0]);
  auto gw = G.endomorphism(w, D);
  auto gw2 = G.endomorphism(ExactScalar::teichmuller(r * r), D);
  auto g1pw = G.endomorphism(ExactScalar{1, w.teichmuller_digits}, D);
  auto gid = G.endomorphism(ExactScalar::from_int(1), D);
  EXPECT_EQ(gw, TruncSeries1::monomial(R, D, 1, w.at(R)));
  EXPECT_EQ(gid, X1(R, D));
  EXPECT_EQ(compose(gw, gw), gw2);
  EXPECT_EQ(substitute2(F, gid, gw), g1pw);
  EXPECT_TRUE(is_endomorphism_of(gw, F));
  EXPECT_TRUE(is_endomorphism_of(G.p_series(D), F));
  // [w]^(q-1) = id since w^8 = 1
  auto it = gw;
  for (int k = 1; k < 8; ++k) it = compose(it, gw);
  EXPECT_EQ(it, X1(R, D));
  // theta itself is not in O_F when d = 1
  auto G1 = FormalModule::lubin_tate(FrobeniusSeries::standard(R, 1), 8);
  EXPECT_THROW(G1.endomorphism(ExactScalar::teichmuller(subfield_generator(R, 2)), 8), PreconditionError);
}

TEST(FormalGroup, HondaEndomorphisms) {
  auto R = RingDescriptor::make(3, 1, 5);
  auto G = FormalModule::honda(R, {I(R, 0), I(R, 1)}, 12);
  auto p3 = G.p_series(30);
  EXPECT_TRUE(is_endomorphism_of(p3, G.law()));
  auto m1 = G.endomorphism(ExactScalar::from_int(-1), 12);
  EXPECT_EQ(m1, formal_negation(G.law()));
  auto two = G.endomorphism(ExactScalar::from_int(2), 12);
  EXPECT_EQ(compose(two, two), G.endomorphism(ExactScalar::from_int(4), 12));
}

TEST(FormalGroup, BaseChange) {
  auto R = RingDescriptor::make(3, 1, 4);
  std::vector<i64> c(10, 0);
  c[1] = 3;
  c[9] = 1;
  auto G = FormalModule::lubin_tate(FrobeniusSeries::validated(TruncSeries1::from_ints(R, 10, c), 1), 10);
  EXPECT_EQ(G.height(), 2);
  auto G2 = G.base_change(2);
  EXPECT_EQ(G2.ring()->f(), 2);
  EXPECT_EQ(G2.height(), 2);
  auto M = FormalModule::multiplicative(R, 8).base_change(2);
  auto X = TruncSeries2::x(M.ring(), 8), Y = TruncSeries2::y(M.ring(), 8);
  EXPECT_EQ(M.law(), X + Y + X * Y);
  EXPECT_THROW(FormalModule::multiplicative(RingDescriptor::make(3, 2, 4), 8).base_change(3), std::invalid_argument);
}

TEST(FormalGroup, CommutingSeriesLargeDegree) {
  auto R = RingDescriptor::make(3, 2, 4);
  auto f = FrobeniusSeries::standard(R, 2);
  auto w = ExactScalar::teichmuller(subfield_generator(R, 2));
  auto g = commuting_series(f.at_degree(200), w, 200);
  EXPECT_EQ(g, TruncSeries1::monomial(R, 200, 1, w.at(R)));
}
