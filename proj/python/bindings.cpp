#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "indde/analyze.hpp"
#include "indde/certify.hpp"
#include "indde/cli.hpp"
#include "indde/oracle.hpp"
#include "indde/simulate.hpp"
#include "indde/specfile.hpp"

namespace py = pybind11;
using namespace indde;

namespace {

LoadedSpec with_horizon(LoadedSpec l, std::optional<double> horizon) {
  if (horizon) set_horizon(l, *horizon);
  return l;
}

std::vector<std::vector<double>> states(const Trajectory& t) {
  std::vector<std::vector<double>> out;
  out.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    auto s = t.state(k);
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_indde, m) {
  m.doc() = "Stability certificates and simulation for impulsive neutral delay systems";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<Expr>(m, "Expr")
      .def(py::init([](const std::string& text) { return parse(text); }), py::arg("text"))
      .def("__call__", &Expr::operator(), py::arg("value"))
      .def("is_constant", &Expr::is_constant)
      .def("__str__", &Expr::print)
      .def("__repr__", [](const Expr& e) { return "Expr('" + e.print() + "')"; })
      .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; });

  m.def("sup_abs", &sup_abs, py::arg("expr"), py::arg("lo"), py::arg("hi"),
        py::arg("step") = 1e-3);
  m.def("kernel_sup", &kernel_sup, py::arg("v"), py::arg("window") = 100.0,
        py::arg("step") = 1e-3);

  py::class_<SystemSpec>(m, "SystemSpec")
      .def_readonly("name", &SystemSpec::name)
      .def_readonly("dim", &SystemSpec::dim)
      .def_readonly("reference_rho", &SystemSpec::reference_rho)
      .def_property_readonly("impulse_instants",
                             [](const SystemSpec& s) { return s.impulses.instants; })
      .def_property_readonly("theta", [](const SystemSpec& s) { return s.theta_floor; })
      .def("validate", [](const SystemSpec& s) {
        std::vector<std::string> out;
        for (const auto& v : validate(s)) out.push_back(v.to_string());
        return out;
      });

  py::class_<LoadedSpec>(m, "Problem")
      .def_readonly("spec", &LoadedSpec::spec)
      .def_readonly("warnings", &LoadedSpec::warnings)
      .def_property_readonly("horizon", [](const LoadedSpec& l) { return l.integrator.horizon; })
      .def_property_readonly("step", [](const LoadedSpec& l) { return l.integrator.step; })
      .def("serialize", &serialize);

  m.def("parse_spec", &parse_spec, py::arg("text"));
  m.def("load", [](const std::string& path) { return load(path); }, py::arg("path"));
  m.def("example", [](const std::string& name) {
    auto text = builtin_example(name);
    if (!text) throw Error(ErrorCode::invalid_argument, "unknown example '" + name + "'");
    return parse_spec(*text);
  }, py::arg("name"));
  m.def("example_text", [](const std::string& name) {
    auto text = builtin_example(name);
    if (!text) throw Error(ErrorCode::invalid_argument, "unknown example '" + name + "'");
    return std::string(*text);
  }, py::arg("name"));
  m.def("example_names", &builtin_names);

  py::class_<RowTerms>(m, "RowTerms")
      .def_readonly("neutral", &RowTerms::neutral_sup)
      .def_readonly("linear", &RowTerms::linear_sup)
      .def_readonly("instant", &RowTerms::instant_sup)
      .def_readonly("delayed", &RowTerms::delayed_sup)
      .def_readonly("distributed", &RowTerms::distributed_sup)
      .def_readonly("neutral_aux", &RowTerms::neutral_aux_sup)
      .def_readonly("impulse", &RowTerms::impulse_rate)
      .def_readonly("kernel", &RowTerms::kernel_sup)
      .def_readonly("contribution", &RowTerms::contribution);

  py::class_<Certificate>(m, "Certificate")
      .def_readonly("rho", &Certificate::rho)
      .def_readonly("rows", &Certificate::rows)
      .def_readonly("reference_rho", &Certificate::reference_rho)
      .def_readonly("lambda_max", &Certificate::lambda_max)
      .def_readonly("notes", &Certificate::notes)
      .def_readonly("rigorous_constants", &Certificate::rigorous_constants)
      .def_property_readonly("mode", [](const Certificate& c) { return to_string(c.mode); })
      .def_property_readonly("certified", &Certificate::certified)
      .def_property_readonly("conditions", [](const Certificate& c) {
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const auto& k : c.conditions) out.emplace_back(k.label, k.holds, k.detail);
        return out;
      })
      .def("report", [](const Certificate& c, const std::string& name) {
        return render_certificate(c, name);
      }, py::arg("name") = "");

  m.def("certify", [](const LoadedSpec& l, const std::string& mode) {
    if (mode == "asym") return certify(l.spec, ModeRequest::asymptotic);
    if (mode == "exp") return certify(l.spec, ModeRequest::exponential);
    if (mode == "corollary") return certify_corollary(strip_impulses(l.spec));
    if (mode == "auto") return certify(l.spec, ModeRequest::automatic);
    throw Error(ErrorCode::invalid_argument, "mode must be asym, exp, auto or corollary");
  }, py::arg("problem"), py::arg("mode") = "auto");

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("times", [](const Trajectory& t) {
        return std::vector<double>(t.times().begin(), t.times().end());
      })
      .def_property_readonly("states", &states)
      .def_property_readonly("dim", &Trajectory::dim)
      .def_property_readonly("horizon", &Trajectory::horizon)
      .def_property_readonly("engine", [](const Trajectory& t) { return to_string(t.engine()); })
      .def("impulse_times", &Trajectory::impulse_times)
      .def("__len__", &Trajectory::size)
      .def("__call__", [](const Trajectory& t, double at, const std::string& side) {
        return t.eval_at(at, side == "left" ? Side::left : Side::right);
      }, py::arg("t"), py::arg("side") = "right")
      .def("csv", [](const Trajectory& t) {
        std::ostringstream os;
        emit_csv(t, os);
        return os.str();
      })
      .def("svg", [](const Trajectory& t, const std::string& title) {
        std::ostringstream os;
        PlotOptions opts;
        opts.title = title;
        emit_plot(t, os, opts);
        return os.str();
      }, py::arg("title") = "");

  m.def("simulate", [](const LoadedSpec& l, std::optional<double> horizon,
                       std::optional<double> step) {
    LoadedSpec run = with_horizon(l, horizon);
    if (step) run.integrator.step = *step;
    py::gil_scoped_release release;
    return simulate(run.spec, run.integrator);
  }, py::arg("problem"), py::arg("horizon") = py::none(), py::arg("step") = py::none());

  py::class_<PicardReport>(m, "PicardReport")
      .def_readonly("iterations", &PicardReport::iterations)
      .def_readonly("sup_deltas", &PicardReport::sup_deltas)
      .def_readonly("converged", &PicardReport::converged)
      .def_readonly("final", &PicardReport::final)
      .def("contraction_ratio", &PicardReport::contraction_ratio, py::arg("count") = 5);

  m.def("picard_solve", [](const LoadedSpec& l, std::optional<double> horizon, double grid,
                           double tol, std::size_t max_iter) {
    LoadedSpec run = with_horizon(l, horizon);
    py::gil_scoped_release release;
    try {
      return picard_solve(run.spec, run.integrator.horizon, grid, tol, max_iter);
    } catch (const NotConverged& e) {
      return e.report();
    }
  }, py::arg("problem"), py::arg("horizon") = py::none(), py::arg("grid") = 1e-2,
     py::arg("tol") = 1e-6, py::arg("max_iter") = 200);

  py::class_<CrosscheckReport>(m, "CrosscheckReport")
      .def_readonly("sup_diff", &CrosscheckReport::sup_diff)
      .def_readonly("component_max", &CrosscheckReport::component_max)
      .def_readonly("worst_time", &CrosscheckReport::worst_time)
      .def_readonly("picard", &CrosscheckReport::picard);

  m.def("crosscheck", [](const LoadedSpec& l, std::optional<double> horizon) {
    LoadedSpec run = with_horizon(l, horizon);
    py::gil_scoped_release release;
    return crosscheck(run.spec, run.integrator, run.oracle);
  }, py::arg("problem"), py::arg("horizon") = py::none());

  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("rate", &DecayFit::lambda)
      .def_readonly("prefactor", &DecayFit::c)
      .def_readonly("residual", &DecayFit::residual);

  py::class_<DecayReport>(m, "DecayReport")
      .def_readonly("fit", &DecayReport::fit)
      .def_readonly("tail_norm", &DecayReport::tail_norm)
      .def_readonly("history_norm", &DecayReport::history_norm)
      .def_readonly("decays_to_zero", &DecayReport::decays_to_zero)
      .def_readonly("exponential_bound_holds", &DecayReport::exponential_bound_holds)
      .def_readonly("lambda_bound_used", &DecayReport::lambda_bound_used)
      .def_readonly("c_bound_used", &DecayReport::c_bound_used);

  m.def("check_definitions", [](const Trajectory& t, const LoadedSpec& l) {
    return check_definitions(t, l.spec);
  }, py::arg("trajectory"), py::arg("problem"));

  m.def("fit_decay", [](const std::vector<double>& t, const std::vector<double>& values,
                        double lo, double hi) {
    if (t.size() != values.size()) throw Error(ErrorCode::invalid_argument, "length mismatch");
    std::vector<SeriesPoint> series;
    for (std::size_t k = 0; k < t.size(); ++k) series.push_back({t[k], values[k]});
    return fit_decay(series, lo, hi);
  }, py::arg("t"), py::arg("values"), py::arg("lo"), py::arg("hi"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"indde"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
