#include "umorse/serialize.hpp"

#include <cmath>
#include <string>

#include "umorse/error.hpp"

namespace umorse {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ValidationError(path + ": " + what); }

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

double positive(const Json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Face face_from(const Json& j, const std::string& path) {
  if (j.is_null()) return Face::none;
  const std::string s = text(j, path);
  if (s == "top") return Face::top;
  if (s == "bottom") return Face::bottom;
  fail(path, "expected \"top\", \"bottom\" or null, got \"" + s + "\"");
}

Json face_json(Face f) {
  switch (f) {
    case Face::top:
      return "top";
    case Face::bottom:
      return "bottom";
    case Face::none:
      break;
  }
  return nullptr;
}

template <class F>
auto rethrow_at(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ValidationError(path + ": " + msg);
  }
}

Json lift_json(const Lift& l) { return Json(l); }

}  // namespace

SpaceSpec space_from_json(const Json& j, const std::string& path) {
  const std::string type = text(field(j, "type", path), path + ".type");
  if (type == "flat_torus") {
    const Json& per = field(j, "periods", path);
    if (!per.is_array() || per.empty()) fail(path + ".periods", "expected a non-empty array");
    std::vector<double> periods;
    for (std::size_t i = 0; i < per.size(); ++i)
      periods.push_back(positive(per[i], path + ".periods[" + std::to_string(i) + "]"));
    return rethrow_at(path, [&] { return SpaceSpec::flat_torus(periods); });
  }
  if (type == "doubled_rectangle") {
    const double a = positive(field(j, "a", path), path + ".a");
    const double b = positive(field(j, "b", path), path + ".b");
    return rethrow_at(path, [&] { return SpaceSpec::doubled_rectangle(a, b); });
  }
  if (type == "product") {
    const Json& fs = field(j, "factors", path);
    if (!fs.is_array() || fs.size() < 2) fail(path + ".factors", "expected an array of at least two spaces");
    std::vector<SpaceSpec> factors;
    for (std::size_t i = 0; i < fs.size(); ++i)
      factors.push_back(space_from_json(fs[i], path + ".factors[" + std::to_string(i) + "]"));
    return rethrow_at(path, [&] { return SpaceSpec::product(factors); });
  }
  fail(path + ".type", "unknown space type \"" + type + "\"");
}

Json to_json(const SpaceSpec& space) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SpaceSpec::FlatTorus>) {
          return {{"type", "flat_torus"}, {"periods", s.periods}};
        } else if constexpr (std::is_same_v<T, SpaceSpec::DoubledRectangle>) {
          return {{"type", "doubled_rectangle"}, {"a", s.a}, {"b", s.b}};
        } else {
          Json fs = Json::array();
          for (const auto& f : s.factors) fs.push_back(to_json(f));
          return {{"type", "product"}, {"factors", fs}};
        }
      },
      space.variant());
}

Vec vec_from_json(const Json& j, const std::string& path, int dim) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  if (dim >= 0 && static_cast<int>(j.size()) != dim)
    fail(path, "expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i) == 0.0 ? 0.0 : v(i));
  return out;
}

Point point_from_json(const SpaceSpec& space, const Json& j, const std::string& path) {
  const Vec coords = vec_from_json(field(j, "coords", path), path + ".coords", space.dimension());
  std::vector<Face> faces;
  auto it = j.find("face");
  if (it != j.end() && it->is_array()) {
    for (std::size_t i = 0; i < it->size(); ++i)
      faces.push_back(face_from((*it)[i], path + ".face[" + std::to_string(i) + "]"));
  } else if (it != j.end() && !it->is_null()) {
    faces.push_back(face_from(*it, path + ".face"));
  }
  if (space.face_count() == 0 && !faces.empty())
    fail(path + ".face", "this space has no faces; use null");
  if (space.face_count() > 0 && static_cast<int>(faces.size()) != space.face_count())
    fail(path + ".face", "expected " + std::to_string(space.face_count()) + " face label(s)");
  return rethrow_at(path, [&] { return space.point(coords, faces); });
}

Json to_json(const Point& p) {
  Json face;
  if (p.faces.size() == 1) {
    face = face_json(p.faces[0]);
  } else if (p.faces.size() > 1) {
    face = Json::array();
    for (Face f : p.faces) face.push_back(face_json(f));
  }
  return {{"coords", to_json(p.coords)}, {"face", face}};
}

Configuration configuration_from_json(const SpaceSpec& space, const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of points");
  if (j.size() < 2) fail(path, "a configuration needs at least two points");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < j.size(); ++i)
    pts.push_back(point_from_json(space, j[i], path + "[" + std::to_string(i) + "]"));
  return rethrow_at(path, [&] { return Configuration::make(space, pts); });
}

Json to_json(const Configuration& x) {
  Json out = Json::array();
  for (const auto& p : x.points) out.push_back(to_json(p));
  return out;
}

ConfigTangent tangent_from_json(const Configuration& x, const Json& j, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != x.k())
    fail(path, "expected an array of " + std::to_string(x.k()) + " vectors");
  ConfigTangent v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(vec_from_json(j[i], path + "[" + std::to_string(i) + "]", x.space.dimension()));
  return v;
}

Json to_json(const ConfigTangent& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back(to_json(c));
  return out;
}

ClosedGeodesic geodesic_from_json(const SpaceSpec& space, const Json& j, const std::string& path) {
  const std::string type = text(field(j, "type", path), path + ".type");
  const Point base = point_from_json(space, field(j, "base", path), path + ".base");
  if (type == "torus_class") {
    const Json& cls = field(j, "class", path);
    if (!cls.is_array()) fail(path + ".class", "expected an array of integers");
    if (static_cast<int>(cls.size()) != space.dimension())
      fail(path + ".class", "expected " + std::to_string(space.dimension()) + " entries");
    std::vector<int> w;
    for (std::size_t i = 0; i < cls.size(); ++i) w.push_back(integer(cls[i], path + ".class[" + std::to_string(i) + "]"));
    return rethrow_at(path, [&] { return ClosedGeodesic::torus_class(space, base, w); });
  }
  if (type == "segment_loop") {
    const Vec dir = vec_from_json(field(j, "direction", path), path + ".direction", space.dimension());
    const double len = positive(field(j, "length", path), path + ".length");
    return rethrow_at(path, [&] { return ClosedGeodesic::segment_loop(space, base, dir, len); });
  }
  fail(path + ".type", "unknown geodesic type \"" + type + "\"");
}

Json to_json(const ClosedGeodesic& g) {
  Json out;
  if (const auto* tc = std::get_if<ClosedGeodesic::TorusClass>(&g.descriptor())) {
    out = {{"type", "torus_class"}, {"base", to_json(tc->base)}, {"class", tc->winding}};
  } else {
    const auto& sl = std::get<ClosedGeodesic::SegmentLoop>(g.descriptor());
    out = {{"type", "segment_loop"}, {"base", to_json(sl.base)}, {"direction", to_json(sl.direction)},
           {"length", sl.length}};
  }
  return out;
}

VariationSpec variation_from_json(const SpaceSpec& space, const Json& j, const std::string& path) {
  VariationSpec v{geodesic_from_json(space, field(j, "geodesic", path), path + ".geodesic"),
                  vec_from_json(field(j, "field", path), path + ".field", space.dimension())};
  if (j.contains("range")) v.range = positive(j["range"], path + ".range");
  if (j.contains("steps")) {
    v.steps = integer(j["steps"], path + ".steps");
    if (v.steps < 2) fail(path + ".steps", "must be at least 2");
  }
  if (j.contains("perpendicular")) {
    if (!j["perpendicular"].is_boolean()) fail(path + ".perpendicular", "expected a boolean");
    v.perpendicular = j["perpendicular"].get<bool>();
  }
  return v;
}

Json to_json(const VariationSpec& v) {
  return {{"geodesic", to_json(v.geodesic)},
          {"field", to_json(v.field)},
          {"range", v.range},
          {"steps", v.steps},
          {"perpendicular", v.perpendicular}};
}

FlowParams params_from_json(const Json& j, FlowParams p, const std::string& path) {
  if (j.is_null()) return p;
  if (!j.is_object()) fail(path, "expected an object");
  if (j.contains("step")) p.step = number(j["step"], path + ".step");
  if (j.contains("max_iters")) p.max_iters = integer(j["max_iters"], path + ".max_iters");
  if (j.contains("grad_tol")) p.grad_tol = number(j["grad_tol"], path + ".grad_tol");
  if (j.contains("energy_tol")) p.energy_tol = number(j["energy_tol"], path + ".energy_tol");
  if (j.contains("perturb_eps") && !j["perturb_eps"].is_null())
    p.perturb_eps = number(j["perturb_eps"], path + ".perturb_eps");
  if (j.contains("backtrack")) p.backtrack = number(j["backtrack"], path + ".backtrack");
  if (j.contains("stride")) p.stride = integer(j["stride"], path + ".stride");
  if (j.contains("tie_tol")) p.tie_tol = number(j["tie_tol"], path + ".tie_tol");
  rethrow_at(path, [&] {
    p.validate();
    return 0;
  });
  return p;
}

Json to_json(const FlowParams& p) {
  Json out = {{"step", p.step},           {"max_iters", p.max_iters}, {"grad_tol", p.grad_tol},
              {"energy_tol", p.energy_tol}, {"backtrack", p.backtrack}, {"stride", p.stride},
              {"tie_tol", p.tie_tol}};
  out["perturb_eps"] = p.perturb_eps ? Json(*p.perturb_eps) : Json(nullptr);
  return out;
}

Json to_json(const MinGeodesic& g) {
  return {{"length", g.length}, {"v0", to_json(g.v0)}, {"v1", to_json(g.v1)}, {"lift", lift_json(g.lift)}};
}

Json to_json(const CandidateGradient& c) {
  Json choice = Json::array();
  for (const auto& l : c.choice) choice.push_back(lift_json(l));
  return {{"tangent", to_json(c.tangent)}, {"choice", choice}, {"magnitude", c.magnitude}};
}

Json to_json(const HessianReport& h) {
  return {{"index", h.index},
          {"nullity", h.nullity},
          {"eigenvalues", h.eigenvalues},
          {"zero_tol", h.zero_tol},
          {"degenerate", h.degenerate}};
}

Json to_json(const MinindResult& m) {
  Json out = {{"minind", m.minind}};
  out["closed_form"] = m.closed_form ? Json(*m.closed_form) : Json(nullptr);
  return out;
}

Json to_json(const CutPair& c) {
  return {{"t0", c.t0}, {"distance", c.distance}, {"multiplicity", c.multiplicity}};
}

Json to_json(const VariationProfile& p) {
  Json samples = Json::array();
  for (const auto& s : p.samples) samples.push_back({{"s", s.s}, {"minind", s.minind}, {"openly", s.openly}});
  Json out = {{"profile", samples},
              {"k", p.k},
              {"central_minind", p.central_minind},
              {"strict_prediction", p.strict_prediction},
              {"eps_observed", p.eps_observed},
              {"central_openly", p.central_openly},
              {"openly_preserved", p.openly_preserved}};
  out["cut_pair"] = p.cut_pair ? to_json(*p.cut_pair) : Json(nullptr);
  out["dplus"] = p.dplus ? Json(*p.dplus) : Json(nullptr);
  return out;
}

Json to_json(const FlowTrace& t) {
  Json iterates = Json::array();
  for (const auto& x : t.iterates) iterates.push_back(to_json(x));
  return {{"status", to_string(t.status)},
          {"iterations", t.iterations},
          {"nudges", t.nudges},
          {"message", t.message},
          {"energies", t.energies},
          {"grad_norms", t.grad_norms},
          {"iterates", iterates}};
}

Json to_json(const RestartReport& r) {
  Json out = {{"before", to_json(r.before)},
              {"before_minind", r.before_minind},
              {"t0", r.t0},
              {"start", to_json(r.start)},
              {"outcome", to_string(r.outcome)},
              {"trace", to_json(r.trace)}};
  out["direction"] = r.direction ? to_json(*r.direction) : Json(nullptr);
  out["perturbed"] = r.perturbed ? to_json(*r.perturbed) : Json(nullptr);
  out["reconnected_class"] = r.reconnected_class ? Json(*r.reconnected_class) : Json(nullptr);
  out["after"] = r.after ? to_json(*r.after) : Json(nullptr);
  out["after_minind"] = r.after_minind ? Json(*r.after_minind) : Json(nullptr);
  return out;
}

}  // namespace umorse
