#include "fglab/suites.hpp"

#include <random>

#include "fglab/formal_group.hpp"
#include "fglab/series.hpp"
#include "fglab/weierstrass.hpp"

namespace fglab {

namespace {

UnramifiedRingElem random_elem(const RingPtr& R, std::mt19937_64& rng) {
  std::vector<u64> c(static_cast<std::size_t>(R->f()));
  for (auto& x : c) x = rng() % R->pN();
  return UnramifiedRingElem(R, std::span<const u64>(c));
}

TruncSeries1 random_series(const RingPtr& R, int D, std::mt19937_64& rng, int from) {
  TruncSeries1 s(R, D);
  for (int k = from; k < D; ++k) s.set_coeff(k, random_elem(R, rng));
  return s;
}

UnramifiedRingElem random_unit(const RingPtr& R, std::mt19937_64& rng) {
  UnramifiedRingElem u = random_elem(R, rng);
  while (!u.is_unit()) u = random_elem(R, rng);
  return u;
}

SuiteResult start(std::string name, int cases, u64 seed, int D, int N) {
  SuiteResult r;
  r.name = std::move(name);
  r.cases = cases;
  r.seed = seed;
  r.D = D;
  r.N = N;
  return r;
}

void fail(SuiteResult& r, int i, const std::string& what) {
  if (r.failures++ == 0) r.first_failure = "case " + std::to_string(i) + ": " + what;
}

}  // namespace

SuiteResult reversion_suite(u64 p, int f, int N, int D, int cases, u64 seed) {
  SuiteResult r = start("reversion", cases, seed, D, N);
  std::mt19937_64 rng(seed);
  const RingPtr R = RingDescriptor::make(p, f, N);
  const TruncSeries1 X = TruncSeries1::identity(R, D);
  for (int i = 0; i < cases; ++i) {
    TruncSeries1 s = random_series(R, D, rng, 2);
    s.set_coeff(1, random_unit(R, rng));
    const TruncSeries1 inv = reversion(s);
    if (compose(s, inv) != X || compose(inv, s) != X) fail(r, i, s.to_string());
  }
  return r;
}

SuiteResult log_exp_suite(u64 p, int N, int D, int cases, u64 seed) {
  SuiteResult r = start("log_exp", cases, seed, D, N);
  std::mt19937_64 rng(seed);
  const RingPtr R = RingDescriptor::make(p, 1, N);
  const int ip = static_cast<int>(p);
  const int budget = N - floor_log(p, static_cast<u64>(D - 1));
  const ScaledSeries1 X(TruncSeries1::identity(R, D));
  for (int i = 0; i < cases; ++i) {
    // pX + X^p + p * (random terms)
    std::vector<i64> c(static_cast<std::size_t>(ip + 3), 0);
    c[1] = ip;
    c[static_cast<std::size_t>(ip)] = 1;
    for (int k = 2; k < ip + 3; ++k)
      if (k != ip) c[static_cast<std::size_t>(k)] = ip * static_cast<i64>(rng() % R->pN());
    const FormalModule G =
        FormalModule::lubin_tate(FrobeniusSeries::validated(TruncSeries1::from_ints(R, ip + 3, c), 1), D);
    const TruncSeries2& F = G.law();
    const ScaledSeries1 lg = logarithm(F);
    const ScaledSeries1 ex = exponential(F);
    const TruncSeries1 g = random_series(R, D, rng, 1), h = random_series(R, D, rng, 1);
    const ScaledSeries1 lhs = compose(lg, ScaledSeries1(substitute2(F, g, h)));
    const ScaledSeries1 rhs = compose(lg, ScaledSeries1(g)) + compose(lg, ScaledSeries1(h));
    if (!compose(ex, lg).agrees_with(X, budget)) fail(r, i, "exp(log X) != X");
    else if (!lhs.agrees_with(rhs, budget)) fail(r, i, "log F(g, h) != log g + log h");
  }
  return r;
}

SuiteResult compose_assoc_suite(u64 p, int f, int N, int D, int cases, u64 seed) {
  SuiteResult r = start("compose_assoc", cases, seed, D, N);
  std::mt19937_64 rng(seed);
  const RingPtr R = RingDescriptor::make(p, f, N);
  for (int i = 0; i < cases; ++i) {
    const TruncSeries1 a = random_series(R, D, rng, 0);
    const TruncSeries1 b = random_series(R, D, rng, 1);
    const TruncSeries1 c = random_series(R, D, rng, 1);
    if (compose(a, compose(b, c)) != compose(compose(a, b), c)) fail(r, i, "f o (g o h) != (f o g) o h");
  }
  return r;
}

SuiteResult phi_decompose_suite(u64 p, int f, int N, int cases, u64 seed) {
  const int q = static_cast<int>(ipow(p, static_cast<unsigned>(f)));
  const int D = 9 * q;
  SuiteResult r = start("phi_decompose_q" + std::to_string(q), cases, seed, D, N);
  std::mt19937_64 rng(seed);
  const RingPtr R = RingDescriptor::make(p, f, N);
  std::vector<i64> c(static_cast<std::size_t>(q + 1), 0);
  c[1] = static_cast<i64>(p);
  c[static_cast<std::size_t>(q)] = 1;
  const TruncSeries1 pi = TruncSeries1::from_ints(R, D, c);

  const PhiDecomposition zero = phi_basis_decompose(TruncSeries1(R, D), pi, q, true);
  for (const auto& a : zero.a)
    if (!a.is_zero()) fail(r, -1, "decomposition of 0 is not 0");
  for (int i = 0; i < cases; ++i) {
    const TruncSeries1 x = random_series(R, D, rng, 0);
    const PhiDecomposition dec = phi_basis_decompose(x, pi, q, true);
    const int W = dec.recon_window;
    if (phi_reconstruct(dec.a, pi, D).resized(W) != x.resized(W))
      fail(r, i, "reconstruction differs below X^" + std::to_string(W));
  }
  return r;
}

}  // namespace fglab
