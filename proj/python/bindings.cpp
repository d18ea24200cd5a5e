#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "umorse/curve.hpp"
#include "umorse/energy.hpp"
#include "umorse/error.hpp"
#include "umorse/flow.hpp"
#include "umorse/geodesics.hpp"
#include "umorse/scenario.hpp"
#include "umorse/serialize.hpp"
#include "umorse/space.hpp"

namespace py = pybind11;
using namespace umorse;

namespace {

Face face_from(const std::string& s) {
  if (s == "top") return Face::top;
  if (s == "bottom") return Face::bottom;
  if (s.empty() || s == "none") return Face::none;
  throw ValidationError("face must be \"top\", \"bottom\" or None");
}

std::vector<Face> faces_from(const py::object& obj) {
  std::vector<Face> out;
  if (obj.is_none()) return out;
  if (py::isinstance<py::str>(obj)) {
    out.push_back(face_from(obj.cast<std::string>()));
    return out;
  }
  for (const auto& f : obj) out.push_back(f.is_none() ? Face::none : face_from(f.cast<std::string>()));
  return out;
}

py::object face_obj(Face f) {
  if (f == Face::top) return py::str("top");
  if (f == Face::bottom) return py::str("bottom");
  return py::none();
}

Configuration make_config(const SpaceSpec& space, const std::vector<Point>& pts) { return Configuration::make(space, pts); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Uniform-energy Morse theory on flat tori, doubled rectangles and their products";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto val = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  auto num = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<DegenerateGeodesicError>(m, "DegenerateGeodesicError", num.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", num.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", num.ptr());
  (void)val;

  py::class_<SpaceSpec>(m, "SpaceSpec")
      .def_static("flat_torus", &SpaceSpec::flat_torus, py::arg("periods"))
      .def_static("doubled_rectangle", &SpaceSpec::doubled_rectangle, py::arg("a"), py::arg("b"))
      .def_static("product", &SpaceSpec::product, py::arg("factors"))
      .def_property_readonly("dimension", &SpaceSpec::dimension)
      .def_property_readonly("face_count", &SpaceSpec::face_count)
      .def_property_readonly("min_scale", &SpaceSpec::min_scale)
      .def(
          "point",
          [](const SpaceSpec& s, const Vec& coords, const py::object& face) { return s.point(coords, faces_from(face)); },
          py::arg("coords"), py::arg("face") = py::none())
      .def("to_json", [](const SpaceSpec& s) { return to_json(s).dump(); })
      .def_static("from_json", [](const std::string& text) { return space_from_json(Json::parse(text)); })
      .def("__eq__", [](const SpaceSpec& a, const SpaceSpec& b) { return a == b; })
      .def("__repr__", [](const SpaceSpec& s) { return "SpaceSpec(" + to_json(s).dump() + ")"; });

  py::class_<Point>(m, "Point")
      .def_readonly("coords", &Point::coords)
      .def_property_readonly("faces",
                             [](const Point& p) {
                               py::list out;
                               for (Face f : p.faces) out.append(face_obj(f));
                               return out;
                             })
      .def("__repr__", [](const Point& p) { return "Point(" + to_json(p).dump() + ")"; });

  py::class_<MinGeodesic>(m, "MinGeodesic")
      .def_readonly("length", &MinGeodesic::length)
      .def_readonly("v0", &MinGeodesic::v0)
      .def_readonly("v1", &MinGeodesic::v1)
      .def_readonly("lift", &MinGeodesic::lift);

  m.def("distance", &distance, py::arg("space"), py::arg("p"), py::arg("q"));
  m.def("minimizing_geodesics", &minimizing_geodesics, py::arg("space"), py::arg("p"), py::arg("q"),
        py::arg("tol") = kTieTol, py::arg("allow_degenerate") = false);
  m.def("is_cut_pair", &is_cut_pair, py::arg("space"), py::arg("p"), py::arg("q"), py::arg("tol") = kTieTol);
  m.def("dplus_distance", &dplus_distance, py::arg("space"), py::arg("p"), py::arg("q"), py::arg("v"), py::arg("w"),
        py::arg("tol") = kTieTol);

  py::class_<Configuration>(m, "Configuration")
      .def(py::init(&make_config), py::arg("space"), py::arg("points"))
      .def_readonly("space", &Configuration::space)
      .def_readonly("points", &Configuration::points)
      .def_property_readonly("k", &Configuration::k);

  py::class_<CandidateGradient>(m, "CandidateGradient")
      .def_readonly("tangent", &CandidateGradient::tangent)
      .def_readonly("choice", &CandidateGradient::choice)
      .def_readonly("magnitude", &CandidateGradient::magnitude)
      .def("stacked", &CandidateGradient::stacked);

  py::class_<HessianReport>(m, "HessianReport")
      .def_readonly("index", &HessianReport::index)
      .def_readonly("nullity", &HessianReport::nullity)
      .def_readonly("eigenvalues", &HessianReport::eigenvalues)
      .def_readonly("zero_tol", &HessianReport::zero_tol)
      .def_readonly("degenerate", &HessianReport::degenerate);

  m.def("uniform_energy", &uniform_energy, py::arg("x"));
  m.def("dplus_uniform_energy", &dplus_uniform_energy, py::arg("x"), py::arg("v"), py::arg("tol") = kTieTol,
        py::arg("normalized") = false);
  m.def(
      "candidate_gradients",
      [](const Configuration& x, double tol) { return candidate_gradients(x, tol); }, py::arg("x"),
      py::arg("tol") = kTieTol);
  m.def(
      "gradient_like", [](const Configuration& x, double tol) { return gradient_like(x, tol); }, py::arg("x"),
      py::arg("tol") = kTieTol);
  m.def(
      "has_associated_geodesic",
      [](const Configuration& x, double tol) { return has_associated_geodesic(x, tol).associated; }, py::arg("x"),
      py::arg("tol") = kTieTol);
  m.def("hessian_index_nullity", &hessian_index_nullity, py::arg("x"), py::arg("zero_tol") = 1e-6,
        py::arg("step") = 1e-5);

  py::class_<ClosedGeodesic>(m, "ClosedGeodesic")
      .def_static(
          "torus_class",
          [](const SpaceSpec& s, const Point& base, const std::vector<int>& w) {
            return ClosedGeodesic::torus_class(s, base, w);
          },
          py::arg("space"), py::arg("base"), py::arg("winding"))
      .def_static(
          "segment_loop",
          [](const SpaceSpec& s, const Point& base, const Vec& dir, double len) {
            return ClosedGeodesic::segment_loop(s, base, dir, len);
          },
          py::arg("space"), py::arg("base"), py::arg("direction"), py::arg("length"))
      .def_property_readonly("length", &ClosedGeodesic::length)
      .def("point_at", &ClosedGeodesic::point_at, py::arg("t"))
      .def("to_json", [](const ClosedGeodesic& g) { return to_json(g).dump(); });

  m.def(
      "minimizing_index", [](const ClosedGeodesic& g, int samples, double tol) {
        return minimizing_index(g, samples, tol).minind;
      },
      py::arg("geodesic"), py::arg("samples") = 0, py::arg("tol") = kTieTol);
  m.def("is_k_geodesic", &is_k_geodesic, py::arg("geodesic"), py::arg("k"), py::arg("samples") = 0,
        py::arg("tol") = kTieTol);
  m.def("is_openly_k_geodesic", &is_openly_k_geodesic, py::arg("geodesic"), py::arg("k"), py::arg("samples") = 0,
        py::arg("tol") = kTieTol);
  m.def("sample_configuration", &sample_configuration, py::arg("geodesic"), py::arg("k"), py::arg("t0") = 0.0);

  py::class_<FlowParams>(m, "FlowParams")
      .def(py::init<>())
      .def_readwrite("step", &FlowParams::step)
      .def_readwrite("max_iters", &FlowParams::max_iters)
      .def_readwrite("grad_tol", &FlowParams::grad_tol)
      .def_readwrite("energy_tol", &FlowParams::energy_tol)
      .def_readwrite("perturb_eps", &FlowParams::perturb_eps)
      .def_readwrite("backtrack", &FlowParams::backtrack)
      .def_readwrite("stride", &FlowParams::stride);

  m.def(
      "descend", [](const Configuration& x, const FlowParams& p) { return to_json(descend(x, p)).dump(); },
      py::arg("x"), py::arg("params") = FlowParams{}, "Gradient descent; returns the trace as JSON text.");
  m.def(
      "birkhoff_shorten",
      [](const Configuration& x, const FlowParams& p) { return to_json(birkhoff_shorten(x, p)).dump(); }, py::arg("x"),
      py::arg("params") = FlowParams{}, "Midpoint shortening; returns the trace as JSON text.");
  m.def(
      "restart_step", [](const ClosedGeodesic& g, const FlowParams& p) { return to_json(restart_step(g, p)).dump(); },
      py::arg("geodesic"), py::arg("params") = FlowParams{}, "One restart; returns the report as JSON text.");

  m.def(
      "run_scenario",
      [](const std::string& text) {
        const auto res = cli::run_scenario_text(text);
        return py::make_tuple(res.exit_code, cli::dump(res.report));
      },
      py::arg("scenario_json"), "Runs a scenario given as JSON text; returns (exit_code, report_json).");
  m.def(
      "plot_csv",
      [](const std::string& report, const std::string& kind) {
        return cli::plot_csv(Json::parse(report), cli::plot_kind(kind));
      },
      py::arg("report_json"), py::arg("kind"));

  m.attr("__version__") = cli::version();
}
