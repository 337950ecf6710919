#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "newmc/exponents.hpp"
#include "newmc/quaternion.hpp"
#include "newmc/statphase.hpp"
#include "runner.hpp"

namespace py = pybind11;
using namespace newmc;

namespace {

Rational to_rational(const py::handle& x) {
  if (py::isinstance<py::int_>(x)) return Rational(x.cast<i64>());
  return Rational(x.attr("numerator").cast<i64>(), x.attr("denominator").cast<i64>());
}

py::object to_fraction(const Rational& r) {
  static py::object Fraction = py::module_::import("fractions").attr("Fraction");
  return Fraction(r.numerator(), r.denominator());
}

MatCoefQuery query(const ReprSpec& s, int i, int v_a, i64 a_unit, std::optional<std::pair<int, i64>> m) {
  const auto& ctx = s.context();
  return {i, PAdicScalar::make(ctx, v_a, a_unit), m ? PAdicScalar::make(ctx, m->first, m->second) : PAdicScalar::zero(ctx)};
}

RationalOrder to_order(const std::vector<std::vector<py::object>>& rows) {
  if (rows.size() != 4) throw std::invalid_argument("order: expected four basis vectors");
  RationalOrder O;
  for (std::size_t r = 0; r < 4; ++r) {
    if (rows[r].size() != 4) throw std::invalid_argument("order: expected four coordinates");
    for (std::size_t t = 0; t < 4; ++t) O.basis[r][t] = to_rational(rows[r][t]);
  }
  return O;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Matrix coefficients of p-adic newvectors and quaternion lattice counts";

  py::class_<ReprSpec>(m, "ReprSpec")
      .def_property_readonly("p", &ReprSpec::p)
      .def_property_readonly("n", &ReprSpec::n)
      .def_property_readonly("n0", &ReprSpec::n0)
      .def_property_readonly("n1", &ReprSpec::n1)
      .def_property_readonly("family", [](const ReprSpec& s) { return family_name(s.family()); })
      .def("__repr__", [](const ReprSpec& s) {
        return "ReprSpec(p=" + std::to_string(s.p()) + ", n=" + std::to_string(s.n()) + ", " + family_name(s.family()) + ")";
      });

  m.def(
      "make_spec", [](i64 p, int n, const std::string& family, i64 choice) { return makeSpec(p, n, parse_family(family), choice); },
      py::arg("p"), py::arg("n"), py::arg("family") = "ps", py::arg("choice") = 0);

  py::class_<PhiEvaluator>(m, "PhiEvaluator")
      .def(py::init<ReprSpec>())
      .def_property_readonly("spec", &PhiEvaluator::spec, py::return_value_policy::reference_internal)
      .def(
          "phi",
          [](const PhiEvaluator& ev, int i, int v_a, i64 a_unit, std::optional<std::pair<int, i64>> m) {
            py::gil_scoped_release nogil;
            return ev.value(ev.naive(query(ev.spec(), i, v_a, a_unit, m)));
          },
          py::arg("i"), py::arg("v_a"), py::arg("a_unit"), py::arg("m") = std::nullopt,
          "Phi^(i)(a, m) by direct summation; m is (v(m), unit) or None for m = 0.")
      .def(
          "is_zero",
          [](const PhiEvaluator& ev, int i, int v_a, i64 a_unit, std::optional<std::pair<int, i64>> m) {
            py::gil_scoped_release nogil;
            return phiNaive(ev, query(ev.spec(), i, v_a, a_unit, m)).is_zero();
          },
          py::arg("i"), py::arg("v_a"), py::arg("a_unit"), py::arg("m") = std::nullopt)
      .def(
          "phi_fast",
          [](const PhiEvaluator& ev, int i, int v_a, i64 a_unit, std::optional<std::pair<int, i64>> m) {
            py::gil_scoped_release nogil;
            const auto r = phiFast(ev, query(ev.spec(), i, v_a, a_unit, m));
            return std::make_pair(ev.value(r.sum), static_cast<i64>(r.pairs.size()));
          },
          py::arg("i"), py::arg("v_a"), py::arg("a_unit"), py::arg("m") = std::nullopt,
          "(value, number of critical pairs) by stationary phase.");

  m.def(
      "in_support",
      [](const ReprSpec& s, int i, int v_a, i64 a_unit, std::optional<std::pair<int, i64>> mm) {
        const auto q = query(s, i, v_a, a_unit, mm);
        return in_support(s, i, q.a, q.m);
      },
      py::arg("spec"), py::arg("i"), py::arg("v_a"), py::arg("a_unit"), py::arg("m") = std::nullopt);

  m.def(
      "verify_support",
      [](const PhiEvaluator& ev, int i, int points, std::uint64_t seed) {
        SupportReport r;
        {
          py::gil_scoped_release nogil;
          r = verifySupport(ev, i, support_grid(ev.spec(), i, points, seed));
        }
        py::dict d;
        d["points"] = r.rows.size();
        d["violations"] = r.violations;
        d["max_abs"] = r.max_abs;
        return d;
      },
      py::arg("evaluator"), py::arg("i"), py::arg("points") = 200, py::arg("seed") = 1);

  m.def(
      "verify_decay",
      [](const PhiEvaluator& ev, int i, int samples, std::uint64_t seed) {
        DecayReport r;
        {
          py::gil_scoped_release nogil;
          r = verifyDecay(ev, i, samples, seed);
        }
        py::dict d;
        d["points"] = r.rows.size();
        d["max_ratio"] = r.max_ratio;
        d["bound"] = r.bound;
        return d;
      },
      py::arg("evaluator"), py::arg("i"), py::arg("samples") = 200, py::arg("seed") = 1);

  m.def("supnorm_exponent", [](py::object e1, py::object d, py::object e2) {
    return to_fraction(supnormExponent(to_rational(e1), to_rational(d), to_rational(e2)));
  });
  m.def("depth_exponent", [](py::object e1, py::object d, py::object e2) {
    return to_fraction(depthExponent(to_rational(e1), to_rational(d), to_rational(e2)));
  });
  m.def(
      "filtration_schedule",
      [](const std::map<i64, int>& a1, py::object e1, py::object e2) {
        const auto s = filtrationSchedule(a1, to_rational(e1), to_rational(e2));
        py::dict eta;
        for (const auto& [p, v] : s.eta) {
          py::list l;
          for (const auto& x : v) l.append(to_fraction(x));
          eta[py::int_(p)] = l;
        }
        return py::make_tuple(eta, to_fraction(s.amplifier));
      },
      py::arg("a1"), py::arg("eta1"), py::arg("eta2"));

  m.def("hilbert_symbol", &localHilbertSymbol, py::arg("a"), py::arg("b"), py::arg("p"));

  py::class_<QuaternionAlgebra>(m, "QuaternionAlgebra")
      .def(py::init<i64, i64>(), py::arg("a"), py::arg("b"))
      .def_property_readonly("discriminant", &QuaternionAlgebra::discriminant)
      .def_property_readonly("ramified_primes", &QuaternionAlgebra::ramified_primes)
      .def("nr", [](const QuaternionAlgebra& A, const std::vector<py::object>& x) {
        if (x.size() != 4) throw std::invalid_argument("expected four coordinates");
        return to_fraction(A.nr({to_rational(x[0]), to_rational(x[1]), to_rational(x[2]), to_rational(x[3])}));
      });

  m.def(
      "verify_maximal_order",
      [](const QuaternionAlgebra& A, const std::vector<std::vector<py::object>>& rows) {
        return verifyMaximalOrder(A, to_order(rows));
      },
      py::arg("algebra"), py::arg("order"));

  m.def(
      "conductor_counts",
      [](const QuaternionAlgebra& A, const std::vector<std::vector<py::object>>& rows, i64 M, std::pair<double, double> z,
         double delta, const std::vector<i64>& norms, const std::string& how) {
        const auto O = to_order(rows);
        const auto L = conductorLattice(A, O, {0, Rational(1), 0, 0}, M);
        const auto e = how == "box" ? Enumerator::Box : Enumerator::FinckePohst;
        py::gil_scoped_release nogil;
        return std::make_pair(L.N, countLatticePointsTable(A, L, {z.first, z.second}, delta, norms, e).by_norm);
      },
      py::arg("algebra"), py::arg("order"), py::arg("M"), py::arg("z"), py::arg("delta"), py::arg("norms"),
      py::arg("enumerator") = "fincke-pohst",
      "(N, {m: count}) for the lattice Z + Z i + M O.");

  py::register_exception<runner::ConfigError>(m, "ConfigError", PyExc_ValueError);
  m.def(
      "run_task",
      [](const std::string& config_json) {
        runner::TaskOutput r;
        {
          const auto cfg = nlohmann::json::parse(config_json);
          py::gil_scoped_release nogil;
          r = runner::runTaskInMemory(cfg);
        }
        py::dict d;
        d["ok"] = r.ok;
        d["csv"] = r.csv;
        d["report"] = r.report;
        return d;
      },
      py::arg("config_json"), "Runs a CLI task from its JSON config; raises ConfigError on invalid configs.");
}
