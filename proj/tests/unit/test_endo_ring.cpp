#include <gtest/gtest.h>

#include "fglab/endo_ring.hpp"
#include "fglab/errors.hpp"
#include "printers.hpp"

using namespace fglab;

namespace {

FormalModule lt(u64 p, int f, int d, int N, int h = 0) {
  return FormalModule::lubin_tate(FrobeniusSeries::standard(RingDescriptor::make(p, f, N), d, h), 8);
}

FormalModule honda01(int f, int N) {
  auto R = RingDescriptor::make(3, f, N);
  return FormalModule::honda(R, {UnramifiedRingElem(R, 0), UnramifiedRingElem(R, 1)}, 8);
}

}  // namespace

TEST(EndoRing, CMap) {
  auto G = lt(3, 1, 1, 5);
  EXPECT_EQ(c_map(G.p_series(10)), UnramifiedRingElem(G.ring(), 3));
  EXPECT_TRUE(c_map(TruncSeries1::identity(G.ring(), 10)).is_one());
  EXPECT_THROW(c_map(TruncSeries1::from_ints(G.ring(), 3, {1, 1})), std::invalid_argument);
}

TEST(EndoRing, TryEndomorphismExamples) {
  auto R = RingDescriptor::make(3, 1, 6);
  auto M = FormalModule::multiplicative(R, 10);
  auto two = try_endomorphism(M.law(), ExactScalar::from_int(2));
  ASSERT_TRUE(two.series);
  auto Reff = two.series->ring();
  EXPECT_EQ(*two.series, TruncSeries1::from_ints(Reff, 10, {0, 2, 1}));

  for (const auto& G : {M, lt(3, 1, 1, 6), honda01(1, 6)}) {
    auto neg = try_endomorphism(G.law(), ExactScalar::from_int(-1));
    ASSERT_TRUE(neg.series);
    EXPECT_EQ(*neg.series, formal_negation(G.law()).at_precision(neg.series->ring()));
  }

  // the law cannot distinguish anything at N_eff < 3
  EXPECT_THROW(try_endomorphism(FormalModule::multiplicative(RingDescriptor::make(3, 1, 4), 10).law(),
                                ExactScalar::from_int(2)),
               PrecisionError);
}

TEST(EndoRing, LinearCoefficientRecovered) {
  auto G = lt(3, 2, 2, 7);
  auto F = G.law_at(37);
  auto R = F.ring();
  const ResidueElem g = subfield_generator(R, 2);
  for (const auto& a : {ExactScalar::teichmuller(g), ExactScalar::teichmuller(g * g), ExactScalar::from_int(5),
                        ExactScalar{1, {0, g.code()}}}) {
    auto r = try_endomorphism(F, a);
    ASSERT_TRUE(r.series) << a.to_string();
    EXPECT_EQ(c_map(*r.series), a.at(r.series->ring()));
  }
}

TEST(EndoRing, SucceedingCoefficientsFormARing) {
  auto G = lt(3, 2, 2, 7);
  auto F = G.law_at(37);
  auto R = F.ring();
  const ResidueElem g = subfield_generator(R, 2);
  const ExactScalar w1 = ExactScalar::teichmuller(g), w2 = ExactScalar::teichmuller(g.pow(3));
  // [w1] + [w2] and [w1] o [w2] are endomorphisms with the expected linear terms
  auto s1 = try_endomorphism(F, w1), s2 = try_endomorphism(F, w2);
  ASSERT_TRUE(s1.series && s2.series);
  auto Fe = F.at_precision(s1.series->ring());
  auto add = substitute2(Fe, *s1.series, *s2.series);
  EXPECT_TRUE(is_endomorphism_of(add, Fe));
  auto mul = compose(*s1.series, *s2.series);
  EXPECT_TRUE(is_endomorphism_of(mul, Fe));
  auto Re = s1.series->ring();
  auto pr = w1.at(Re) * w2.at(Re);
  EXPECT_EQ(c_map(mul), pr);
  EXPECT_EQ(c_map(add), w1.at(Re) + w2.at(Re));
}

TEST(EndoRing, EndoSubfield) {
  auto rm = compute_endo_subfield(FormalModule::multiplicative(RingDescriptor::make(3, 1, 4), 8));
  EXPECT_EQ(rm.f_F, 1);
  EXPECT_TRUE(rm.full_height);
  EXPECT_GE(rm.N_eff, 3);

  auto rh = compute_endo_subfield(lt(3, 2, 2, 4));
  EXPECT_EQ(rh.h, 2);
  EXPECT_EQ(rh.f_F, 2);
  EXPECT_TRUE(rh.full_height);

  auto ro = compute_endo_subfield(honda01(1, 4));
  EXPECT_EQ(ro.h, 2);
  EXPECT_EQ(ro.f_F, 1);
  EXPECT_FALSE(ro.full_height);

  auto rb = compute_endo_subfield(honda01(1, 4).base_change(2));
  EXPECT_EQ(rb.f_F, 2);
  EXPECT_TRUE(rb.full_height);

  // pX + X^9 over Z_3: height 2, only Z_3 acts
  auto rz = compute_endo_subfield(lt(3, 1, 1, 4, 2));
  EXPECT_EQ(rz.h, 2);
  EXPECT_EQ(rz.f_F, 1);
}

TEST(EndoRing, SubfieldStableUnderLargerWindows) {
  for (const auto& G : {lt(3, 2, 2, 4), honda01(2, 4)}) {
    auto a = compute_endo_subfield(G);
    auto b = compute_endo_subfield(G, EndoOptions{a.D + 18, a.N + 2});
    EXPECT_EQ(a.f_F, b.f_F);
  }
}

TEST(EndoRing, TauInfinity) {
  auto G1 = lt(3, 1, 1, 5);
  auto t1 = tau_infinity_check(G1, compute_endo_subfield(G1));
  EXPECT_TRUE(t1.exists);
  EXPECT_EQ(t1.order, 2);
  EXPECT_EQ(*t1.tau, formal_negation(G1.law_at(t1.D)).at_precision(t1.tau->ring()));

  auto G2 = lt(3, 2, 2, 4);
  auto t2 = tau_infinity_search(G2);
  EXPECT_TRUE(t2.exists);
  EXPECT_EQ(t2.order, 8);

  auto Ho = honda01(1, 4);
  EXPECT_THROW(tau_infinity_check(Ho, compute_endo_subfield(Ho)), PreconditionError);
  EXPECT_FALSE(tau_infinity_search(Ho).exists);
}
