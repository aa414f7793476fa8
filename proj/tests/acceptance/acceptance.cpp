// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fglab/endo_ring.hpp"
#include "fglab/errors.hpp"
#include "fglab/matrix_models.hpp"
#include "fglab/suites.hpp"
#include "fglab/torsion_lab.hpp"

using namespace fglab;

namespace {

struct Named {
  std::string name;
  FormalModule G;
};

FormalModule lt(u64 p, int f, int d, int N) {
  return FormalModule::lubin_tate(FrobeniusSeries::standard(RingDescriptor::make(p, f, N), d));
}

FormalModule honda01(int f, int N) {
  auto R = RingDescriptor::make(3, f, N);
  return FormalModule::honda(R, {UnramifiedRingElem(R, 0), UnramifiedRingElem(R, 1)});
}

std::vector<Named> corpus(int N) {
  return {{"Gm p=3", FormalModule::multiplicative(RingDescriptor::make(3, 1, N))},
          {"Gm p=5", FormalModule::multiplicative(RingDescriptor::make(5, 1, N))},
          {"pX+X^3", lt(3, 1, 1, N)},
          {"pX+X^5", lt(5, 1, 1, N)},
          {"LT h=2 W(F_9)", lt(3, 2, 2, N)},
          {"honda(0,1) p=3", honda01(1, N)}};
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << " exception: " << e.what();
  }
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << " " << name << ":" << detail.str() << " ("
            << since(t0) << " s)" << std::endl;
}

}  // namespace

int main() {
  report(1, "degree law", [](std::ostringstream& os) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (const auto& [name, G] : corpus(4))
      for (int n : {1, 2}) {
        const TorsionDegreeCertificate c = certify_torsion_degree(G, n);
        ok = ok && c.ok;
        os << " [" << name << " n=" << n << " e=" << c.degree << " slopes " << c.polygon.to_string() << "]";
      }
    return ok && since(t0) <= 120;
  });

  report(2, "torsion cardinality", [](std::ostringstream& os) {
    bool ok = true;
    for (const auto& [name, G] : corpus(4))
      for (int n : {1, 2}) {
        const TorsionCountCertificate c = torsion_count(G, n);
        ok = ok && c.ok;
        os << " [" << name << " n=" << n << " " << c.weierstrass_degree << "/" << c.expected << "]";
      }
    return ok;
  });

  report(3, "division algorithm", [](std::ostringstream& os) {
    bool ok = true;
    for (int f : {1, 2}) {
      const SuiteResult s = phi_decompose_suite(3, f, 4, 25, 2024 + static_cast<u64>(f));
      ok = ok && s.ok();
      os << " [q=" << ipow(3, static_cast<unsigned>(f)) << " D=" << s.D << " cases=" << s.cases
         << " failures=" << s.failures << s.first_failure << "]";
    }
    return ok;
  });

  report(4, "ramification filtration", [](std::ostringstream& os) {
    const auto t0 = std::chrono::steady_clock::now();
    const BreakTable t = ramification_breaks(lt(3, 2, 2, 11), 2);
    bool ok = t.D == 792;
    bool seen0 = false, seen1 = false;
    for (const auto& b : t.entries) {
      os << " [k=" << b.k << " u=" << b.u << " v=" << (b.i_sigma ? std::to_string(*b.i_sigma) : "inf") << "]";
      if (b.k == 0 || b.k == 1) {
        const int want = b.k == 0 ? 1 : 9;
        ok = ok && b.i_sigma == want && b.i_diff == want;
        (b.k == 0 ? seen0 : seen1) = true;
      }
    }
    return ok && seen0 && seen1 && t.ok() && since(t0) <= 600;
  });

  report(5, "full-height equivalence", [](std::ostringstream& os) {
    bool ok = true;
    std::vector<Named> groups = corpus(4);
    groups.push_back({"honda(0,1) p=3 f=2", honda01(2, 4)});
    for (const auto& [name, G] : groups) {
      bool gen = true;
      for (int n : {1, 2}) gen = gen && assumption_check(G, n).holds;
      const bool full = compute_endo_subfield(G).full_height;
      const bool tau = tau_infinity_search(G).exists;
      ok = ok && gen == full && full == tau;
      os << " [" << name << " " << gen << full << tau << "]";
    }
    return ok;
  });

  report(6, "unit quotient order", [](std::ostringstream& os) {
    bool ok = true;
    for (const auto& [name, G] : corpus(4)) {
      if (!compute_endo_subfield(G).full_height) continue;
      const u64 q = ipow(G.ring()->p(), static_cast<unsigned>(*G.height()));
      for (int n : {1, 2}) {
        const u64 order = unit_quotient_order(q, n);
        const TorsionDegreeCertificate c = certify_torsion_degree(G, n);
        ok = ok && c.ok && order == static_cast<u64>(c.degree);
        os << " [" << name << " n=" << n << " " << order << "=" << c.degree << "]";
      }
    }
    return ok;
  });

  report(7, "commutant dimensions", [](std::ostringstream& os) {
    bool ok = true;
    for (int m = 1; m <= 4; ++m)
      for (int n = 1; n <= 4; ++n) {
        const CommutantDimension d = commutant_dimension(build_phi_zeta(m, n));
        ok = ok && d.dimension == n * n * m && d.consistent();
      }
    os << " [grid 1..4 x 1..4]";
    for (int m = 1; m <= 3; ++m) {
      const RelationSweep s = exhaustive_relation_sweep(m, 3);
      ok = ok && s.disagreements == 0;
      os << " [m=" << m << " " << s.total << " matrices, " << s.commuting << " commuting, " << s.disagreements
         << " disagreements]";
    }
    return ok;
  });

  report(8, "mu_p membership", [](std::ostringstream& os) {
    bool ok = true;
    const int N = 6;
    for (u64 p : {3ULL, 5ULL}) {
      const FormalModule G = FormalModule::multiplicative(RingDescriptor::make(p, 1, N));
      const MuPResult r = mu_p_membership(G, 2);
      // recheck the witness in a freshly built model
      const TorsionFieldModel M = TorsionFieldModel::build(G, 1);
      const auto y = M.pow(r.witness, p - 1) + M.scalar(UnramifiedRingElem(M.ring(), static_cast<i64>(p)));
      const std::optional<int> v = M.valuation(y);
      const bool good = !v || *v >= M.e() * (N - 2);
      ok = ok && r.member && r.d_used == 1 && good;
      os << " [Gm p=" << p << " d=" << r.d_used << " v_p(y^(p-1)+p)>=" << (v ? *v / M.e() : N) << "]";
    }
    const MuPResult r2 = mu_p_membership(lt(3, 2, 2, N), 2);
    ok = ok && r2.member && r2.d_used <= 2;
    os << " [LT h=2 d=" << r2.d_used << "]";
    return ok;
  });

  report(9, "base-change invariance", [](std::ostringstream& os) {
    bool ok = true;
    for (const auto& [name, G] : corpus(4)) {
      if (G.ring()->f() != 1) continue;
      const FormalModule G2 = G.base_change(2);
      bool same = G.height() == G2.height();
      for (int n : {1, 2}) {
        const TorsionDegreeCertificate a = certify_torsion_degree(G, n), b = certify_torsion_degree(G2, n);
        same = same && a.degree == b.degree && a.polygon.vertices == b.polygon.vertices;
      }
      const int h = *G.height();
      std::string ff = "n/a";
      if (std::gcd(1, h) == std::gcd(2, h)) {
        const int a = compute_endo_subfield(G).f_F, b = compute_endo_subfield(G2).f_F;
        same = same && a == b;
        ff = std::to_string(a) + "=" + std::to_string(b);
      }
      ok = ok && same;
      os << " [" << name << " f_F " << ff << (same ? "" : " CHANGED") << "]";
    }
    return ok;
  });

  report(10, "kernel round-trips", [](std::ostringstream& os) {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteResult a = reversion_suite(3, 1, 6, 12, 100, 11);
    const SuiteResult b = log_exp_suite(3, 6, 12, 100, 12);
    const SuiteResult c = compose_assoc_suite(3, 1, 6, 12, 100, 13);
    for (const auto& s : {a, b, c}) os << " [" << s.name << " " << s.cases - s.failures << "/" << s.cases << "]";
    return a.ok() && b.ok() && c.ok() && since(t0) <= 30;
  });

  std::cout << (failures ? "FAILED " : "ALL PASSED ") << 10 - failures << "/10" << std::endl;
  return failures ? 1 : 0;
}
