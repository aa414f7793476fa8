#include <gtest/gtest.h>

#include <random>

#include "fglab/padic.hpp"

using namespace fglab;

namespace {

UnramifiedRingElem random_elem(const RingPtr& ring, std::mt19937_64& rng) {
  std::vector<u64> c(static_cast<std::size_t>(ring->f()));
  for (auto& x : c) x = rng() % ring->pN();
  return UnramifiedRingElem(ring, std::span<const u64>(c));
}

UnramifiedRingElem random_unit(const RingPtr& ring, std::mt19937_64& rng) {
  for (;;) {
    auto a = random_elem(ring, rng);
    if (a.is_unit()) return a;
  }
}

}  // namespace

TEST(Padic, SmallArithmetic) {
  auto r = RingDescriptor::make(3, 1, 2);
  EXPECT_EQ((UnramifiedRingElem(r, 5) + UnramifiedRingElem(r, 5)).coeff(0), 1u);
  UnramifiedRingElem a(r, 7);
  EXPECT_EQ(a + UnramifiedRingElem(r), a);
}

TEST(Padic, Distributivity) {
  auto r = RingDescriptor::make(5, 2, 3);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    auto a = random_elem(r, rng), b = random_elem(r, rng), c = random_elem(r, rng);
    EXPECT_EQ((a + b) * c, a * c + b * c);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
  }
}

TEST(Padic, DescriptorMismatchThrows) {
  auto r1 = RingDescriptor::make(3, 1, 2);
  auto r2 = RingDescriptor::make(3, 1, 3);
  EXPECT_THROW(UnramifiedRingElem(r1, 1) + UnramifiedRingElem(r2, 1), std::invalid_argument);
}

TEST(Padic, RejectsEvenOrReducible) {
  EXPECT_THROW(RingDescriptor::make(2, 1, 3), std::invalid_argument);
  EXPECT_THROW(RingDescriptor::make(9, 1, 3), std::invalid_argument);
  // X^2 + 2 = (X-1)(X+1) mod 3
  EXPECT_THROW(RingDescriptor::make(3, 2, 3, {2, 0}), std::invalid_argument);
}

TEST(Padic, DefaultModulus) {
  EXPECT_EQ(RingDescriptor::default_modulus(3, 2), (std::vector<u64>{1, 0}));
  EXPECT_EQ(RingDescriptor::default_modulus(5, 2), (std::vector<u64>{2, 0}));
  // brute-force oracle: a monic quadratic over F_p is irreducible iff it has no root
  for (u64 p : {3u, 5u, 7u}) {
    for (u64 c0 = 0; c0 < p; ++c0)
      for (u64 c1 = 0; c1 < p; ++c1) {
        bool has_root = false;
        for (u64 x = 0; x < p; ++x) has_root |= (x * x + c1 * x + c0) % p == 0;
        EXPECT_EQ(RingDescriptor::is_irreducible_mod_p(p, {c0, c1}), !has_root);
      }
  }
}

TEST(Padic, Invert) {
  auto r = RingDescriptor::make(3, 1, 2);
  EXPECT_EQ(invert(UnramifiedRingElem(r, 2)).coeff(0), 5u);
  EXPECT_TRUE(invert(UnramifiedRingElem(r, 1)).is_one());
  EXPECT_THROW(invert(UnramifiedRingElem(r, 3)), std::domain_error);
  auto r2 = RingDescriptor::make(5, 2, 2);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    auto u = random_unit(r2, rng);
    EXPECT_TRUE((u * invert(u)).is_one());
    EXPECT_EQ(invert(invert(u)), u);
  }
}

TEST(Padic, Valuation) {
  auto r = RingDescriptor::make(3, 1, 3);
  EXPECT_EQ(valuation(UnramifiedRingElem(r, 6)), 1);
  EXPECT_EQ(valuation(UnramifiedRingElem(r, 1)), 0);
  EXPECT_EQ(valuation(UnramifiedRingElem(r, 0)), kInfiniteValuation);
  auto r2 = RingDescriptor::make(5, 2, 6);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    auto a = random_elem(r2, rng).times_p(static_cast<int>(rng() % 3));
    auto b = random_elem(r2, rng).times_p(static_cast<int>(rng() % 3));
    int va = valuation(a), vb = valuation(b);
    if (va == kInfiniteValuation || vb == kInfiniteValuation || va + vb >= 6) continue;
    EXPECT_EQ(valuation(a * b), va + vb);
  }
}

TEST(Padic, Teichmuller) {
  auto r = RingDescriptor::make(3, 1, 2);
  EXPECT_EQ(teichmuller_lift(ResidueElem::from_code(r, 2)).coeff(0), 8u);
  EXPECT_TRUE(teichmuller_lift(ResidueElem::from_code(r, 1)).is_one());
  auto r5 = RingDescriptor::make(5, 1, 2);
  EXPECT_EQ(teichmuller_lift(ResidueElem::from_code(r5, 2)).coeff(0), 7u);
  for (auto ring : {RingDescriptor::make(3, 2, 8), RingDescriptor::make(5, 3, 5)}) {
    for (u64 code = 1; code < ring->residue_size(); ++code) {
      auto res = ResidueElem::from_code(ring, code);
      auto t = teichmuller_lift(res);
      EXPECT_EQ(t.residue(), res);
      EXPECT_TRUE(t.pow(ring->residue_size() - 1).is_one());
    }
  }
}

TEST(Padic, ResiduePowerTest) {
  auto r3 = RingDescriptor::make(3, 1, 1);
  EXPECT_TRUE(residue_power_test(ResidueElem::from_code(r3, 1), 2));
  EXPECT_FALSE(residue_power_test(ResidueElem::from_code(r3, 2), 2));
  auto r5 = RingDescriptor::make(5, 1, 1);
  EXPECT_TRUE(residue_power_test(ResidueElem::from_code(r5, 4), 2));
  // exhaustive squaring table oracle
  for (u64 x = 1; x < 5; ++x) {
    bool square = false;
    for (u64 y = 1; y < 5; ++y) square |= y * y % 5 == x;
    EXPECT_EQ(residue_power_test(ResidueElem::from_code(r5, x), 2), square);
  }
  EXPECT_THROW(residue_power_test(ResidueElem::from_code(r5, 0), 2), std::domain_error);
}

TEST(Padic, FrobeniusIsRingMapOfOrderF) {
  auto r = RingDescriptor::make(3, 2, 6);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    auto a = random_elem(r, rng), b = random_elem(r, rng);
    EXPECT_EQ((a * b).frobenius(), a.frobenius() * b.frobenius());
    EXPECT_EQ(a.frobenius().frobenius(), a);
    // Frobenius lifts x -> x^p on residues
    EXPECT_EQ(a.frobenius().residue(), a.residue().pow(3));
  }
}

TEST(Padic, ScaledField) {
  auto r = RingDescriptor::make(3, 1, 5);
  ScaledFieldElem six(UnramifiedRingElem(r, 6));
  EXPECT_EQ(six.exponent(), 1);
  EXPECT_EQ(six.rel_prec(), 4);
  auto third = ScaledFieldElem::from_parts(UnramifiedRingElem(r, 1), -1, 5);
  auto two = six * third;
  EXPECT_EQ(two.exponent(), 0);
  EXPECT_EQ(two.unit().coeff(0) % 81, 2u);
  auto z = six - six;
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.abs_prec(), 5);
  EXPECT_THROW(z.inverse(), std::domain_error);
  EXPECT_EQ((six / six).unit().coeff(0) % 81, 1u);
}

TEST(Padic, Embedding) {
  auto r2 = RingDescriptor::make(3, 2, 5);
  auto r4 = RingDescriptor::make(3, 4, 5);
  RingEmbedding e(r2, r4);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    auto a = random_elem(r2, rng), b = random_elem(r2, rng);
    EXPECT_EQ(e(a * b), e(a) * e(b));
    EXPECT_EQ(e(a + b), e(a) + e(b));
    EXPECT_EQ(e(a.frobenius()), e(a).frobenius());
  }
}
