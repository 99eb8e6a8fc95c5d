#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wiener/asymptotics.hpp"
#include "wiener/cli.hpp"
#include "wiener/errors.hpp"
#include "wiener/exact_values.hpp"
#include "wiener/lattice.hpp"
#include "wiener/spectral.hpp"
#include "wiener/weights.hpp"

namespace py = pybind11;
using namespace wiener;

namespace {

ClassParams make_params(double p, double q, double r, int d) {
  ClassParams params{p, q, r, d};
  params.validate();
  return params;
}

CoefficientField make_field(const std::vector<std::pair<LatticeVector, Complex>>& terms, int d) {
  CoefficientField f(d);
  for (const auto& [k, c] : terms) f.set(k, c);
  return f;
}

}  // namespace

PYBIND11_MODULE(_wiener, m) {
  m.doc() = "Exact approximation characteristics of weighted Wiener classes";

  auto base = py::register_exception<Error>(m, "WienerError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<DivergentSeries>(m, "DivergentSeries", base.ptr());
  py::register_exception<RegimeMismatch>(m, "RegimeMismatch", base.ptr());
  py::register_exception<GuardExceeded>(m, "GuardExceeded", base.ptr());

  py::class_<WeightFunction>(m, "Weight")
      .def(py::init([](const std::string& spec) { return parse_weight(spec); }), py::arg("spec"))
      .def("__call__", &WeightFunction::operator(), py::arg("t"))
      .def("log_value", &WeightFunction::log_value, py::arg("t"))
      .def_property_readonly("spec", &WeightFunction::spec)
      .def_property_readonly("family", [](const WeightFunction& w) { return std::string(family_name(w.family())); })
      .def("__repr__", [](const WeightFunction& w) { return "Weight('" + w.spec() + "')"; });

  m.def("ball_count", &ball_count, py::arg("s"), py::arg("r"), py::arg("d"));
  m.def("inverse_count", &inverse_count, py::arg("m"), py::arg("r"), py::arg("d"));
  m.def("enumerate_shell", &enumerate_shell, py::arg("s"), py::arg("r"), py::arg("d"));
  m.def("lr_norm", &lr_norm, py::arg("k"), py::arg("r"));

  m.def(
      "sigma_m",
      [](double p, double q, double r, int d, const WeightFunction& w, std::uint64_t mm) {
        SigmaResult s = sigma_m(make_params(p, q, r, d), w, mm);
        return py::dict(py::arg("value") = s.value.value(), py::arg("log_value") = s.value.log(),
                        py::arg("argmax") = s.argmax, py::arg("at_infinity") = s.at_infinity);
      },
      py::arg("p"), py::arg("q"), py::arg("r"), py::arg("d"), py::arg("psi"), py::arg("m"));
  m.def(
      "basis_width",
      [](double p, double q, double r, int d, const WeightFunction& w, std::uint64_t mm) {
        return basis_width(make_params(p, q, r, d), w, mm).value();
      },
      py::arg("p"), py::arg("q"), py::arg("r"), py::arg("d"), py::arg("psi"), py::arg("m"));
  m.def(
      "predict_sigma",
      [](double p, double q, double r, int d, const WeightFunction& w, std::uint64_t mm) {
        return predict_sp(make_params(p, q, r, d), w, mm, SpQuantity::Sigma).lo.value();
      },
      py::arg("p"), py::arg("q"), py::arg("r"), py::arg("d"), py::arg("psi"), py::arg("m"));

  m.def(
      "sp_norm",
      [](const std::vector<std::pair<LatticeVector, Complex>>& terms, int d, double p) {
        return sp_norm(make_field(terms, d), p);
      },
      py::arg("terms"), py::arg("d"), py::arg("p"));
  m.def(
      "greedy_residual",
      [](const std::vector<std::pair<LatticeVector, Complex>>& terms, int d, std::uint64_t mm, double p, bool grid) {
        CoefficientField f = make_field(terms, d);
        return grid ? greedy_residual(f, mm, GridNorm{p, 0}) : greedy_residual(f, mm, SequenceNorm{p});
      },
      py::arg("terms"), py::arg("d"), py::arg("m"), py::arg("p"), py::arg("grid") = false);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"wiener-approx"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
