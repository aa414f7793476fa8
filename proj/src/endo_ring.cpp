#include "fglab/endo_ring.hpp"

#include <numeric>

#include "fglab/errors.hpp"

namespace fglab {

UnramifiedRingElem c_map(const TruncSeries1& g) {
  if (!g.coeff(0).is_zero()) throw std::invalid_argument("c_map: series has a constant term");
  return g.coeff(1);
}

EndoAttempt try_endomorphism(const TruncSeries2& F, const ExactScalar& a) {
  const RingPtr& R = F.ring();
  const u64 p = R->p();
  const int D = F.D();
  EndoAttempt out;
  out.D = D;
  const int shift = floor_log(p, static_cast<u64>(std::max(D - 1, 1)));
  out.N_eff = R->N() - shift;
  if (out.N_eff < 3)
    throw PrecisionError("try_endomorphism: effective precision " + std::to_string(out.N_eff) +
                         " below 3 at D = " + std::to_string(D) + "; raise N");

  // dlog = 1 / F_Y(X, 0); Lambda = p^shift * integral of dlog
  TruncSeries1 FY(R, D);
  for (int i = 0; i + 1 < D; ++i) FY.set_coeff(i, F.coeff(i, 1));
  const TruncSeries1 dlog = inverse_series(FY);
  TruncSeries1 Lambda(R, D);
  for (int k = 1; k < D; ++k) {
    int v = 0;
    u64 kk = static_cast<u64>(k);
    while (kk % p == 0) {
      kk /= p;
      ++v;
    }
    const UnramifiedRingElem inv = invert(UnramifiedRingElem(R, static_cast<i64>(kk)));
    Lambda.set_coeff(k, (dlog.coeff(k - 1) * inv).times_p(shift - v));
  }

  const LogConjugateResult r = solve_log_conjugate(Lambda, shift, dlog, a.at(R));
  if (!r.series) {
    out.first_obstruction = r.first_obstruction;
    return out;
  }
  const RingPtr Reff = R->with_precision(out.N_eff);
  TruncSeries1 g = r.series->at_precision(Reff);
  if (!is_endomorphism_of(g, F.at_precision(Reff)))
    throw CertificationError("try_endomorphism: integral solution for " + a.to_string() + " does not commute with F");
  out.series = std::move(g);
  return out;
}

namespace {

struct Workspace {
  int h = 0;
  int D = 0;
  int N = 0;
  TruncSeries2 F;
};

Workspace workspace(const FormalModule& G, const EndoOptions& opt) {
  const std::optional<int> h = G.height();
  if (!h) throw PrecisionError("endomorphisms: height not detected");
  const u64 p = G.ring()->p();
  Workspace w;
  w.h = *h;
  w.D = opt.D ? opt.D : static_cast<int>(4 * ipow(p, static_cast<unsigned>(w.h))) + 1;
  const int shift = floor_log(p, static_cast<u64>(w.D - 1));
  w.N = opt.N ? opt.N : std::max(G.ring()->N(), shift + 3);
  const FormalModule Gw = w.N == G.ring()->N() ? G : G.at_precision(w.N);
  w.F = Gw.law_at(w.D);
  return w;
}

}  // namespace

EndoReport compute_endo_subfield(const FormalModule& G, const EndoOptions& opt) {
  const Workspace w = workspace(G, opt);
  const RingPtr R = w.F.ring();
  EndoReport rep;
  rep.h = w.h;
  rep.f = R->f();
  rep.D = w.D;
  rep.N = w.N;

  auto run = [&](EndoCandidate c) {
    const EndoAttempt at = try_endomorphism(w.F, c.a);
    rep.N_eff = at.N_eff;
    c.success = at.series.has_value();
    c.first_obstruction = at.first_obstruction;
    rep.candidates.push_back(std::move(c));
    return rep.candidates.back().success;
  };

  run(EndoCandidate{"p", ExactScalar::from_int(static_cast<i64>(R->p())), 0});
  const int g = std::gcd(rep.f, rep.h);
  for (int d = g; d >= 1; --d) {
    if (g % d != 0) continue;
    const bool ok = run(EndoCandidate{"T(F_" + std::to_string(R->p()) + "^" + std::to_string(d) + ")",
                                      ExactScalar::teichmuller(subfield_generator(R, d)), d});
    if (ok && rep.f_F == 0) rep.f_F = d;
  }
  rep.full_height = rep.f_F == rep.h;
  return rep;
}

TauCertificate tau_infinity_search(const FormalModule& G, const EndoOptions& opt) {
  const Workspace w = workspace(G, opt);
  const RingPtr R = w.F.ring();
  TauCertificate c;
  c.q = static_cast<int>(ipow(R->p(), static_cast<unsigned>(w.h)));
  c.D = w.D;
  if (R->f() % w.h != 0) {
    c.reason = "O_K contains no primitive (q-1)-th root of unity";
    return c;
  }
  const ExactScalar zeta = ExactScalar::teichmuller(subfield_generator(R, w.h));
  c.zeta = zeta.to_string();
  const EndoAttempt at = try_endomorphism(w.F, zeta);
  c.N_eff = at.N_eff;
  if (!at.series) {
    c.reason = "zeta X + ... is not integral at degree " + std::to_string(at.first_obstruction);
    return c;
  }
  const TruncSeries1& g = *at.series;
  const TruncSeries1 X = TruncSeries1::identity(g.ring(), g.D());
  TruncSeries1 it = g;
  for (int k = 1; k <= c.q - 1; ++k) {
    if (it == X) {
      c.order = k;
      break;
    }
    it = compose(g, it);
  }
  c.exists = c.order == c.q - 1 && c_map(g) == zeta.at(g.ring());
  if (!c.exists) c.reason = "tau has order " + std::to_string(c.order) + ", expected " + std::to_string(c.q - 1);
  c.tau = g;
  return c;
}

TauCertificate tau_infinity_check(const FormalModule& G, const EndoReport& report, const EndoOptions& opt) {
  if (!report.full_height) throw PreconditionError("tau_infinity_check: group is not of full height");
  return tau_infinity_search(G, opt);
}

}  // namespace fglab
