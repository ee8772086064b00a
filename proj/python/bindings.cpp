#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dirac_front/border.hpp"
#include "dirac_front/errors.hpp"
#include "dirac_front/evolution.hpp"
#include "dirac_front/experiment.hpp"
#include "dirac_front/exponential_type.hpp"
#include "dirac_front/mass.hpp"
#include "dirac_front/states.hpp"

namespace py = pybind11;
using namespace dirac_front;

namespace {

// (components, n, ...) complex array copy of the samples.
py::array_t<cdouble> field_array(const SpinorField& psi) {
  std::vector<py::ssize_t> shape{psi.components()};
  for (int a = 0; a < psi.grid().dim; ++a) shape.push_back(psi.grid().n);
  py::array_t<cdouble> out(shape);
  std::copy(psi.values().begin(), psi.values().end(), out.mutable_data());
  return out;
}

Spinor to_spinor(const std::vector<cdouble>& v) {
  Spinor s(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) s(static_cast<Eigen::Index>(i)) = v[i];
  return s;
}

py::dict check_dict(const CheckSummary& c) {
  py::dict d;
  d["name"] = c.name;
  d["passed"] = c.passed;
  d["skipped"] = c.skipped;
  d["violations"] = c.violations;
  d["worst_margin"] = c.worst_margin;
  d["note"] = c.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dirac_front, m) {
  m.doc() = "Free Dirac evolution, borders and exponential-type diagnostics";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<UndefinedStateError>(m, "UndefinedStateError", PyExc_RuntimeError);
  py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_RuntimeError);
  py::register_exception<EmptyCutError>(m, "EmptyCutError", PyExc_RuntimeError);
  py::register_exception<ApexNotBracketedError>(m, "ApexNotBracketedError", PyExc_RuntimeError);

  py::enum_<Representation>(m, "Representation")
      .value("weyl", Representation::weyl)
      .value("dirac", Representation::dirac);
  py::enum_<Space>(m, "Space").value("position", Space::position).value("momentum", Space::momentum);

  py::class_<GridSpec>(m, "GridSpec")
      .def_readonly("dim", &GridSpec::dim)
      .def_readonly("n", &GridSpec::n)
      .def_readonly("extent", &GridSpec::extent)
      .def_property_readonly("dx", &GridSpec::dx)
      .def_property_readonly("dp", &GridSpec::dp)
      .def("coordinate", &GridSpec::coordinate)
      .def("momentum", &GridSpec::momentum)
      .def("__repr__", [](const GridSpec& g) {
        return "GridSpec(dim=" + std::to_string(g.dim) + ", n=" + std::to_string(g.n) +
               ", extent=" + format_double(g.extent) + ")";
      });
  m.def("make_grid", &make_grid, py::arg("dim"), py::arg("n"), py::arg("extent"));
  m.def("axis_directions", &axis_directions);

  py::class_<SpinorField>(m, "SpinorField")
      .def_property_readonly("grid", &SpinorField::grid)
      .def_property_readonly("space", &SpinorField::space)
      .def_property_readonly("mass", &SpinorField::mass)
      .def_property_readonly("components", &SpinorField::components)
      .def("to_momentum", &SpinorField::to_momentum)
      .def("to_position", &SpinorField::to_position)
      .def("squared_norm", &SpinorField::squared_norm)
      .def("max_abs_difference", &SpinorField::max_abs_difference)
      .def("inner", &SpinorField::inner)
      .def("array", &field_array, "Copy of the samples, shape (components, n, ...).");

  m.def("random_spinor", [](int c, std::uint64_t seed) {
    const Spinor s = random_spinor(c, seed);
    return std::vector<cdouble>(s.data(), s.data() + s.size());
  });
  m.def(
      "bump_state",
      [](const GridSpec& g, const Vec3& center, double rho, const std::vector<cdouble>& u, double mass,
         Representation rep) { return bump_state(g, center, rho, to_spinor(u), mass, rep); },
      py::arg("grid"), py::arg("center"), py::arg("rho"), py::arg("spinor"), py::arg("mass") = 1.0,
      py::arg("representation") = Representation::weyl);
  m.def("translate", &translate);
  m.def("time_reverse", &time_reverse);

  m.def("evolve", &evolve, py::arg("psi"), py::arg("t"));
  m.def("evolve_nw", &evolve_nw, py::arg("psi"), py::arg("t"), py::arg("eta"));
  m.def("project_energy", &project_energy, py::arg("psi"), py::arg("eta"));

  m.def("border", &border, py::arg("psi"), py::arg("e"), py::arg("delta") = kDefaultDelta);
  m.def("support_function", &support_function, py::arg("psi"), py::arg("lam"),
        py::arg("delta") = kDefaultDelta);
  m.def("outside_ball_mass", &outside_ball_mass);
  m.def("half_space_mass", &half_space_mass);
  m.def("linspace", &linspace);

  m.def("log_abs_cos", &log_abs_cos);
  m.def("log_abs_sin", &log_abs_sin);
  m.def("log_abs_sinc", &log_abs_sinc);

  m.def("list_experiments", [] {
    py::list out;
    for (const auto& e : list_experiments()) {
      py::dict d;
      d["name"] = e.name;
      d["description"] = e.description;
      d["anchor"] = e.anchor;
      out.append(d);
    }
    return out;
  });
  m.def(
      "validate_config",
      [](const std::string& text) {
        try {
          validate_config(nlohmann::json::parse(text));
          return std::vector<std::string>{};
        } catch (const ConfigValidationError& e) {
          return e.problems();
        }
      },
      "Problems found in a JSON config text; empty when valid.");
  m.def(
      "run",
      [](const std::filesystem::path& config, const std::filesystem::path& out_dir) {
        const RunResult r = run(load_config(config), out_dir);
        py::dict d;
        d["all_passed"] = r.all_passed();
        py::list checks;
        for (const auto& c : r.checks) checks.append(check_dict(c));
        d["checks"] = checks;
        d["outputs"] = r.outputs;
        d["manifest"] = r.manifest.dump();
        return d;
      },
      py::arg("config"), py::arg("out_dir"));
  m.attr("__version__") = tool_version();
}
