#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "confext/cli.hpp"
#include "confext/errors.hpp"
#include "confext/inequalities.hpp"

namespace py = pybind11;
using namespace confext;

namespace {

// Wraps a Python callable of a coordinate list. Quadrature samples in parallel, so
// every call takes the GIL; the caller releases it around the computation.
FieldFunction from_python(py::function fn, Domain domain, int n, int degree) {
  FieldFunction f;
  f.domain = domain;
  f.n = n;
  f.polynomial_degree = degree;
  auto holder = std::make_shared<py::function>(std::move(fn));
  f.eval = [holder](std::span<const double> x) {
    py::gil_scoped_acquire gil;
    return (*holder)(std::vector<double>(x.begin(), x.end())).cast<double>();
  };
  return f;
}

py::dict to_dict(const QuotientReport& r) {
  py::dict d;
  d["numerator"] = r.numerator;
  d["denominator"] = r.denominator;
  d["quotient"] = r.quotient;
  d["error"] = r.quotient_error();
  if (r.reference_constant) {
    d["reference"] = *r.reference_constant;
    d["verdict"] = std::string(to_string(r.verdict));
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sharp conformal extension inequalities";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<Inadmissible>(m, "Inadmissible", PyExc_ValueError);
  py::register_exception<NonConvergent>(m, "NonConvergent", PyExc_RuntimeError);
  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("normalization", &normalization, py::arg("n"), py::arg("a"), "d_{n,a}, cross-checked by two routes.");
  m.def("sharp_constant_closed_form", &sharp_constant_closed_form, py::arg("n"));
  m.def("limit_at_origin", &limit_at_origin, py::arg("n"));

  m.def(
      "sharp_constant",
      [](int n, double a, int resolution) {
        py::gil_scoped_release release;
        const PointValue S = sharp_constant(KernelParams(n, a), resolution);
        return std::pair{S.value, S.error};
      },
      py::arg("n"), py::arg("a"), py::arg("resolution") = 12, "S_{n,a} as (value, error).");

  m.def(
      "theorem1_quotient",
      [](py::function f, int n, double a, int resolution, int degree) {
        const FieldFunction data = from_python(std::move(f), Domain::sphere, n, degree);
        py::gil_scoped_release release;
        return Theorem1Evaluator(KernelParams(n, a), resolution).quotient(data);
      },
      py::arg("f"), py::arg("n"), py::arg("a"), py::arg("resolution") = 12, py::arg("degree") = -1,
      "Theorem 1 quotient of sphere data f(xi); pass `degree` for polynomial data.");

  m.def(
      "theorem2_quotient",
      [](py::function F, int n, int resolution, int degree) {
        const FieldFunction data = from_python(std::move(F), Domain::sphere, n, degree);
        py::gil_scoped_release release;
        return quotient_thm2(data, n, resolution);
      },
      py::arg("F"), py::arg("n"), py::arg("resolution") = 10, py::arg("degree") = -1);

  m.def(
      "carleman_quotient",
      [](py::function u, int resolution) {
        const FieldFunction data = from_python(std::move(u), Domain::ball, 2, -1);
        py::gil_scoped_release release;
        return carleman_check(data, false, resolution);
      },
      py::arg("u"), py::arg("resolution") = 16);

  m.def(
      "maximizer_search",
      [](double a, int cells, std::uint64_t seed, int max_steps, bool start_from_extremal) {
        MaximizerOptions opt;
        opt.cells = cells;
        opt.seed = seed;
        opt.max_steps = max_steps;
        opt.start_from_extremal = start_from_extremal;
        MaximizerResult r;
        {
          py::gil_scoped_release release;
          r = maximizer_search(KernelParams(2, a), opt);
        }
        py::dict d;
        d["quotient"] = r.quotient;
        d["edges"] = r.edges;
        d["values"] = r.values;
        d["trace"] = r.trace;
        d["steps"] = r.steps;
        d["fit_lambda"] = r.fit.lambda;
        d["fit_center"] = r.fit.Y0;
        d["fit_residual"] = r.fit_residual;
        return d;
      },
      py::arg("a") = 0.5, py::arg("cells") = 32, py::arg("seed") = 1, py::arg("max_steps") = 600,
      py::arg("start_from_extremal") = false);

  m.def(
      "run_command",
      [](const std::string& command, std::optional<int> n, std::optional<double> a, std::optional<double> a_min,
         std::optional<double> a_max, std::optional<double> a_step, int resolution, int samples, std::uint64_t seed,
         const std::vector<std::string>& tolerances, bool timing) {
        cli::RunConfig cfg;
        cfg.command = command;
        cfg.n = n;
        cfg.a = a;
        cfg.a_min = a_min;
        cfg.a_max = a_max;
        cfg.a_step = a_step;
        cfg.resolution = resolution;
        cfg.samples = samples;
        cfg.seed = seed;
        for (const auto& t : tolerances) cli::add_tolerance_override(cfg, t);
        py::gil_scoped_release release;
        const cli::Report r = cli::run(cfg);
        return std::pair{r.exit_code(), r.json(timing)};
      },
      py::arg("command"), py::arg("n") = py::none(), py::arg("a") = py::none(), py::arg("a_min") = py::none(),
      py::arg("a_max") = py::none(), py::arg("a_step") = py::none(), py::arg("resolution") = 0,
      py::arg("samples") = -1, py::arg("seed") = 1, py::arg("tolerances") = std::vector<std::string>{},
      py::arg("timing") = false, "Runs one CLI command; returns (exit_code, JSON report).");

  py::class_<QuotientReport>(m, "QuotientReport")
      .def_readonly("numerator", &QuotientReport::numerator)
      .def_readonly("denominator", &QuotientReport::denominator)
      .def_readonly("quotient", &QuotientReport::quotient)
      .def_property_readonly("error", &QuotientReport::quotient_error)
      .def("as_dict", &to_dict)
      .def("__repr__", [](const QuotientReport& r) {
        return "QuotientReport(quotient=" + std::to_string(r.quotient) + ")";
      });
}
