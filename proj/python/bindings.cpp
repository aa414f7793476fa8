#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>

#include "fglab/endo_ring.hpp"
#include "fglab/matrix_models.hpp"
#include "fglab/reports.hpp"
#include "fglab/torsion_lab.hpp"

namespace py = pybind11;
using namespace fglab;

namespace {

std::vector<u64> elem(const UnramifiedRingElem& c) { return {c.coeffs().begin(), c.coeffs().end()}; }

// theta-coordinates of each coefficient, degree 0 .. D-1
std::vector<std::vector<u64>> series(const TruncSeries1& s) {
  std::vector<std::vector<u64>> out;
  for (int k = 0; k < s.D(); ++k) out.push_back(elem(s.coeff(k)));
  return out;
}

// nonzero coefficients as {(i, j): coordinates}
std::map<std::pair<int, int>, std::vector<u64>> law(const TruncSeries2& F) {
  std::map<std::pair<int, int>, std::vector<u64>> out;
  for (int i = 0; i < F.D(); ++i)
    for (int j = 0; i + j < F.D(); ++j)
      if (!F.coeff_is_zero(i, j)) out[{i, j}] = elem(F.coeff(i, j));
  return out;
}

py::dict polygon(const NewtonPolygon& P) {
  py::dict d;
  d["vertices"] = P.vertices;
  py::list slopes;
  for (const auto& s : P.segments) slopes.append(py::make_tuple(s.slope.numerator(), s.slope.denominator(), s.length));
  d["segments"] = slopes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Formal group laws over unramified p-adic rings: construction, torsion and endomorphism checks";

  py::class_<FormalModule>(m, "FormalModule")
      .def_property_readonly("label", &FormalModule::label)
      .def_property_readonly("p", [](const FormalModule& G) { return G.ring()->p(); })
      .def_property_readonly("f", [](const FormalModule& G) { return G.ring()->f(); })
      .def_property_readonly("N", [](const FormalModule& G) { return G.ring()->N(); })
      .def("height", [](const FormalModule& G) { return G.height(); })
      .def("law", [](const FormalModule& G, int D) { return law(G.law_at(D)); }, py::arg("D") = 6)
      .def("p_series", [](const FormalModule& G, int D) { return series(G.p_series(D)); }, py::arg("D"))
      .def("base_change", &FormalModule::base_change, py::arg("f_target"))
      .def("__repr__", [](const FormalModule& G) { return "<FormalModule " + G.label() + ">"; });

  m.def(
      "lubin_tate",
      [](u64 p, int f, int N, int d, int h) {
        return FormalModule::lubin_tate(FrobeniusSeries::standard(RingDescriptor::make(p, f, N), d ? d : f, h));
      },
      py::arg("p"), py::arg("f") = 1, py::arg("N") = 6, py::arg("d") = 0, py::arg("h") = 0,
      "Lubin-Tate module of pX + X^q over W(F_{p^f}) mod p^N");
  m.def(
      "multiplicative", [](u64 p, int f, int N) { return FormalModule::multiplicative(RingDescriptor::make(p, f, N)); },
      py::arg("p"), py::arg("f") = 1, py::arg("N") = 6);
  m.def(
      "honda",
      [](u64 p, int f, int N, const std::vector<i64>& u) {
        auto R = RingDescriptor::make(p, f, N);
        std::vector<UnramifiedRingElem> coeffs;
        for (i64 c : u) coeffs.emplace_back(R, c);
        return FormalModule::honda(R, coeffs);
      },
      py::arg("p"), py::arg("f") = 1, py::arg("N") = 6, py::arg("u") = std::vector<i64>{0, 1});

  m.def(
      "torsion_degree",
      [](const FormalModule& G, int n) {
        const auto c = certify_torsion_degree(G, n);
        py::dict d;
        d["n"] = c.n;
        d["degree"] = c.degree;
        d["expected_degree"] = c.expected_degree;
        d["ok"] = c.ok;
        d["polygon"] = polygon(c.polygon);
        return d;
      },
      py::arg("G"), py::arg("n"));
  m.def(
      "torsion_count",
      [](const FormalModule& G, int n) {
        const auto c = torsion_count(G, n);
        py::dict d;
        d["weierstrass_degree"] = c.weierstrass_degree;
        d["expected"] = c.expected;
        d["ok"] = c.ok;
        return d;
      },
      py::arg("G"), py::arg("n"));
  m.def(
      "generation_check",
      [](const FormalModule& G, int n) {
        const auto c = assumption_check(G, n);
        py::dict d;
        d["method"] = c.method;
        d["holds"] = c.holds;
        d["expected"] = c.expected;
        d["found"] = c.found;
        return d;
      },
      py::arg("G"), py::arg("n"));
  m.def(
      "endo_subfield",
      [](const FormalModule& G) {
        const auto r = compute_endo_subfield(G);
        py::dict d;
        d["h"] = r.h;
        d["f"] = r.f;
        d["f_F"] = r.f_F;
        d["full_height"] = r.full_height;
        return d;
      },
      py::arg("G"));
  m.def(
      "commutant_dimension",
      [](int m_, int n, u64 p) {
        const auto c = commutant_dimension(build_phi_zeta(m_, n), p);
        return py::make_tuple(c.dimension, c.expected);
      },
      py::arg("m"), py::arg("n"), py::arg("p") = 3);
  m.def("unit_quotient_order", &unit_quotient_order, py::arg("q_h"), py::arg("n"));

  m.def(
      "run_json",
      [](const std::string& command, const std::map<std::string, std::string>& config) {
        RunConfig cfg;
        try {
          cfg.apply(config);
        } catch (const ConfigError& e) {
          throw py::value_error(e.what());
        }
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_command(command, cfg);
        }
        return py::make_tuple(r.exit_code, r.report.dump());
      },
      py::arg("command"), py::arg("config"));
}
