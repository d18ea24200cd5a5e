#include "umorse/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "umorse/error.hpp"

namespace umorse::cli {

namespace {

constexpr double kDefaultZeroTol = 1e-6;
constexpr double kDefaultHessianStep = 1e-5;
constexpr double kPerturbFraction = 0.05;

const std::set<std::string> kCommands = {"dist",  "dplus",   "energy", "candgrad", "gradlike", "minind",
                                         "openly", "probe",  "hessian", "flow",    "restart",  "sweep"};
const std::set<std::string> kTopKeys = {"command", "space", "inputs", "params", "seed"};
const std::set<std::string> kParamKeys = {"tol",       "samples",   "zero_tol",    "hessian_step", "cap",
                                          "step",      "max_iters", "grad_tol",    "energy_tol",   "perturb_eps",
                                          "backtrack", "stride",    "tie_tol"};

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ValidationError(path + ": " + what); }

// Tolerances and flow parameters resolved from the scenario.
struct Settings {
  double tol = kTieTol;
  int samples = 0;
  double zero_tol = kDefaultZeroTol;
  double hessian_step = kDefaultHessianStep;
  std::size_t cap = kCandidateCap;
  FlowParams flow;
  std::optional<long long> seed;
};

double get_number(const Json& j, const std::string& path) {
  if (!j.is_number() || !std::isfinite(j.get<double>())) fail(path, "expected a finite number");
  return j.get<double>();
}

int get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

Settings settings_from(const Json& scenario) {
  Settings s;
  const Json params = scenario.value("params", Json::object());
  if (!params.is_object()) fail("params", "expected an object");
  for (const auto& [key, _] : params.items())
    if (!kParamKeys.count(key)) fail("params." + key, "unknown parameter");
  if (params.contains("tol")) {
    s.tol = get_number(params["tol"], "params.tol");
    if (!(s.tol > 0.0)) fail("params.tol", "must be positive");
  }
  if (params.contains("samples")) {
    s.samples = get_int(params["samples"], "params.samples");
    if (s.samples < 0) fail("params.samples", "must be nonnegative");
  }
  if (params.contains("zero_tol")) {
    s.zero_tol = get_number(params["zero_tol"], "params.zero_tol");
    if (!(s.zero_tol > 0.0)) fail("params.zero_tol", "must be positive");
  }
  if (params.contains("hessian_step")) {
    s.hessian_step = get_number(params["hessian_step"], "params.hessian_step");
    if (!(s.hessian_step > 0.0)) fail("params.hessian_step", "must be positive");
  }
  if (params.contains("cap")) {
    const int cap = get_int(params["cap"], "params.cap");
    if (cap < 1) fail("params.cap", "must be positive");
    s.cap = static_cast<std::size_t>(cap);
  }
  FlowParams base;
  base.tie_tol = s.tol;
  s.flow = params_from_json(params, base, "params");
  if (scenario.contains("seed") && !scenario["seed"].is_null()) {
    if (!scenario["seed"].is_number_integer()) fail("seed", "expected an integer");
    s.seed = scenario["seed"].get<long long>();
  }
  return s;
}

// Uniform double in [-1, 1) from a 64-bit Mersenne twister, bit-identical across platforms.
double symmetric_unit(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

Configuration flow_start(const SpaceSpec& space, const Json& inputs, const Settings& s) {
  if (inputs.contains("configuration"))
    return configuration_from_json(space, inputs["configuration"], "inputs.configuration");
  if (!inputs.contains("geodesic")) fail("inputs", "flow needs either \"configuration\" or \"geodesic\"");
  const ClosedGeodesic g = geodesic_from_json(space, inputs["geodesic"], "inputs.geodesic");
  const int k = get_int(require(inputs, "k", "inputs"), "inputs.k");
  if (k < 2) fail("inputs.k", "must be at least 2");
  const double t0 = inputs.contains("t0") ? get_number(inputs["t0"], "inputs.t0") : 0.0;
  Configuration x = sample_configuration(g, k, t0);
  const double noise = inputs.contains("noise") ? get_number(inputs["noise"], "inputs.noise") : 0.0;
  if (noise < 0.0) fail("inputs.noise", "must be nonnegative");
  if (noise > 0.0) {
    if (!s.seed) fail("seed", "required when inputs.noise is positive");
    std::mt19937_64 rng(static_cast<std::uint64_t>(*s.seed));
    ConfigTangent v;
    for (int i = 0; i < k; ++i) {
      Vec d(space.dimension());
      for (Eigen::Index c = 0; c < d.size(); ++c) d(c) = noise * symmetric_unit(rng);
      v.push_back(d);
    }
    x = exp_map(x, v, 1.0);
  }
  return x;
}

Json curve_samples(const ClosedGeodesic& g, int n) {
  Json out = Json::array();
  for (int j = 0; j < n; ++j) {
    const double t = 2 * std::numbers::pi * j / (n - 1);
    Json rec = to_json(g.point_at(t));
    rec["t"] = t;
    out.push_back(rec);
  }
  return out;
}

Json run_dist(const SpaceSpec& space, const Json& in, const Settings& s) {
  const Point p = point_from_json(space, require(in, "p", "inputs"), "inputs.p");
  const Point q = point_from_json(space, require(in, "q", "inputs"), "inputs.q");
  const bool allow = in.contains("allow_degenerate") && get_bool(in["allow_degenerate"], "inputs.allow_degenerate");
  const double d = distance(space, p, q);
  Json out = {{"distance", d}};
  Json segs = Json::array();
  if (d > 0.0) {
    const auto gs = minimizing_geodesics(space, p, q, s.tol, allow);
    for (const auto& g : gs) segs.push_back(to_json(g));
    out["cut_pair"] = gs.size() > 1;
  } else {
    out["cut_pair"] = false;
  }
  out["geodesics"] = segs;
  return out;
}

Json run_dplus(const SpaceSpec& space, const Json& in, const Settings& s) {
  if (in.contains("configuration")) {
    const Configuration x = configuration_from_json(space, in["configuration"], "inputs.configuration");
    const ConfigTangent v = tangent_from_json(x, require(in, "direction", "inputs"), "inputs.direction");
    const bool normalized = in.contains("normalized") && get_bool(in["normalized"], "inputs.normalized");
    return {{"dplus", dplus_uniform_energy(x, v, s.tol, normalized)}, {"normalized", normalized}};
  }
  const Point p = point_from_json(space, require(in, "p", "inputs"), "inputs.p");
  const Point q = point_from_json(space, require(in, "q", "inputs"), "inputs.q");
  const Vec v = vec_from_json(require(in, "v", "inputs"), "inputs.v", space.dimension());
  const Vec w = vec_from_json(require(in, "w", "inputs"), "inputs.w", space.dimension());
  return {{"dplus", dplus_distance(space, p, q, v, w, s.tol)}};
}

Json run_energy(const SpaceSpec& space, const Json& in, const Settings& s) {
  const Configuration x = configuration_from_json(space, require(in, "configuration", "inputs"), "inputs.configuration");
  const LoopEnergy le = loop_energy(x);
  const Association a = has_associated_geodesic(x, s.tol);
  Json out = {{"uniform_energy", uniform_energy(x)},
              {"length", le.length},
              {"loop_energy", le.energy},
              {"associated", a.associated}};
  out["geodesic"] = a.geodesic ? to_json(*a.geodesic) : Json(nullptr);
  return out;
}

Json candidates_json(const std::vector<CandidateGradient>& cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back(to_json(c));
  return out;
}

Json run_candgrad(const SpaceSpec& space, const Json& in, const Settings& s) {
  const Configuration x = configuration_from_json(space, require(in, "configuration", "inputs"), "inputs.configuration");
  const auto cs = candidate_gradients(x, s.tol, s.cap);
  const bool zero = std::any_of(cs.begin(), cs.end(), [&](const auto& c) { return c.magnitude <= s.tol; });
  return {{"count", cs.size()},
          {"candidates", candidates_json(cs)},
          {"gradient_like", candidates_json(gradient_like_all(x, s.tol, s.cap))},
          {"contains_zero", zero}};
}

Json run_gradlike(const SpaceSpec& space, const Json& in, const Settings& s) {
  const Configuration x = configuration_from_json(space, require(in, "configuration", "inputs"), "inputs.configuration");
  return {{"gradient_like", to_json(gradient_like(x, s.tol, s.cap))},
          {"maxima", candidates_json(gradient_like_all(x, s.tol, s.cap))}};
}

Json run_minind(const SpaceSpec& space, const Json& in, const Settings& s) {
  const ClosedGeodesic g = geodesic_from_json(space, require(in, "geodesic", "inputs"), "inputs.geodesic");
  int n = kDefaultCurveSamples;
  if (in.contains("curve_samples")) {
    n = get_int(in["curve_samples"], "inputs.curve_samples");
    if (n < 2) fail("inputs.curve_samples", "must be at least 2");
  }
  Json out = to_json(minimizing_index(g, s.samples, s.tol));
  out["length"] = g.length();
  out["curve"] = curve_samples(g, n);
  return out;
}

Json run_openly(const SpaceSpec& space, const Json& in, const Settings& s) {
  const ClosedGeodesic g = geodesic_from_json(space, require(in, "geodesic", "inputs"), "inputs.geodesic");
  const int k = get_int(require(in, "k", "inputs"), "inputs.k");
  if (k < 2) fail("inputs.k", "must be at least 2");
  const int m = s.samples == 0 ? 0 : std::max(s.samples, 8 * k);
  Json out = {{"k", k},
              {"is_k_geodesic", is_k_geodesic(g, k, m, s.tol)},
              {"openly", is_openly_k_geodesic(g, k, m, s.tol)}};
  const auto cp = max_cut_pair(g, k, m, s.tol);
  out["cut_pair"] = cp ? to_json(*cp) : Json(nullptr);
  return out;
}

Json run_probe(const SpaceSpec& space, const Json& in, const Settings& s) {
  const VariationSpec var = variation_from_json(space, require(in, "variation", "inputs"), "inputs.variation");
  int k_hint = 0;
  if (in.contains("k_hint")) {
    k_hint = get_int(in["k_hint"], "inputs.k_hint");
    if (k_hint != 0 && k_hint < 2) fail("inputs.k_hint", "must be 0 or at least 2");
  }
  return to_json(variation_minind_profile(var, k_hint, s.samples, s.tol));
}

Json run_hessian(const SpaceSpec& space, const Json& in, const Settings& s) {
  const Configuration x = configuration_from_json(space, require(in, "configuration", "inputs"), "inputs.configuration");
  return to_json(hessian_index_nullity(x, s.zero_tol, s.hessian_step));
}

struct PartialTrace {
  Json outputs;
};

Json run_flow(const SpaceSpec& space, const Json& in, const Settings& s) {
  std::string method = "descend";
  if (in.contains("method")) {
    if (!in["method"].is_string()) fail("inputs.method", "expected a string");
    method = in["method"].get<std::string>();
  }
  if (method != "descend" && method != "birkhoff") fail("inputs.method", "expected \"descend\" or \"birkhoff\"");
  const Configuration x0 = flow_start(space, in, s);
  const FlowTrace trace = method == "descend" ? descend(x0, s.flow) : birkhoff_shorten(x0, s.flow);
  Json out = {{"method", method}, {"trace", to_json(trace)}};
  if (trace.status == FlowStatus::error) throw PartialTrace{out};
  out["limit"] = nullptr;
  out["limit_minind"] = nullptr;
  if (trace.status == FlowStatus::converged) {
    try {
      const ClosedGeodesic g = classify_limit(trace.final_configuration(), 10 * s.flow.grad_tol);
      out["limit"] = to_json(g);
      out["limit_minind"] = minimizing_index(g, s.samples, s.tol).minind;
    } catch (const NumericalError& e) {
      out["limit_error"] = e.what();
    }
  }
  return out;
}

Json run_restart(const SpaceSpec& space, const Json& in, const Settings& s) {
  const ClosedGeodesic g = geodesic_from_json(space, require(in, "geodesic", "inputs"), "inputs.geodesic");
  int rounds = 1;
  if (in.contains("rounds")) {
    rounds = get_int(in["rounds"], "inputs.rounds");
    if (rounds < 1) fail("inputs.rounds", "must be at least 1");
  }
  FlowParams fp = s.flow;
  if (!fp.perturb_eps) fp.perturb_eps = fp.perturbation(space);
  Json out = {{"perturb_eps", *fp.perturb_eps}};
  try {
    Json reports = Json::array();
    if (rounds == 1) {
      const RestartReport r = restart_step(g, fp);
      reports.push_back(to_json(r));
      const bool improved = r.after && r.after_minind && *r.after_minind < r.before_minind;
      out["final"] = to_json(improved ? *r.after : r.before);
      out["final_minind"] = improved ? *r.after_minind : r.before_minind;
    } else {
      const RestartSequence seq = restart_until_stable(g, fp, rounds);
      for (const auto& r : seq.reports) reports.push_back(to_json(r));
      out["final"] = to_json(seq.final_geodesic);
      out["final_minind"] = seq.final_minind;
    }
    out["rounds"] = reports;
  } catch (const FlowError& e) {
    out["partial_trace"] = to_json(e.trace());
    out["error"] = e.what();
    throw PartialTrace{out};
  }
  return out;
}

Json run_command(const std::string& command, const SpaceSpec& space, const Json& in, const Settings& s) {
  if (command == "dist") return run_dist(space, in, s);
  if (command == "dplus") return run_dplus(space, in, s);
  if (command == "energy") return run_energy(space, in, s);
  if (command == "candgrad") return run_candgrad(space, in, s);
  if (command == "gradlike") return run_gradlike(space, in, s);
  if (command == "minind") return run_minind(space, in, s);
  if (command == "openly") return run_openly(space, in, s);
  if (command == "probe") return run_probe(space, in, s);
  if (command == "hessian") return run_hessian(space, in, s);
  if (command == "flow") return run_flow(space, in, s);
  return run_restart(space, in, s);
}

Json run_sweep(const Json& in, const Overrides& o, const std::filesystem::path& base_dir, int& exit_code) {
  const Json& list = require(in, "scenarios", "inputs");
  if (!list.is_array() || list.empty()) fail("inputs.scenarios", "expected a non-empty array");
  std::vector<Json> children(list.size());
  std::vector<std::filesystem::path> dirs(list.size(), base_dir);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "inputs.scenarios[" + std::to_string(i) + "]";
    if (list[i].is_string()) {
      const std::filesystem::path file = base_dir / list[i].get<std::string>();
      std::ifstream f(file);
      if (!f) fail(path, "cannot read " + file.string());
      try {
        children[i] = Json::parse(f);
      } catch (const Json::parse_error& e) {
        fail(path, file.string() + ": " + e.what());
      }
      dirs[i] = file.parent_path();
    } else if (list[i].is_object()) {
      children[i] = list[i];
    } else {
      fail(path, "expected a file name or an inline scenario");
    }
    if (children[i].value("command", "") == "sweep") fail(path, "sweeps cannot be nested");
  }

  Overrides child = o;
  child.timing = false;
  child.jobs = 1;
  std::vector<RunResult> results(children.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < children.size(); i = next++)
      results[i] = run_scenario(children[i], child, dirs[i]);
  };
  const int jobs = std::clamp(o.jobs, 1, static_cast<int>(children.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Json out = Json::array();
  for (auto& r : results) {
    exit_code = std::max(exit_code, r.exit_code);
    out.push_back({{"exit_code", r.exit_code}, {"report", r.report}});
  }
  return {{"results", out}};
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const Json* find_series(const Json& outputs, const char* key) {
  if (!outputs.is_object()) return nullptr;
  auto it = outputs.find(key);
  return it == outputs.end() ? nullptr : &*it;
}

const Json* find_trace(const Json& outputs) {
  if (const Json* t = find_series(outputs, "trace")) return t;
  if (const Json* r = find_series(outputs, "rounds"); r && r->is_array() && !r->empty()) return find_series((*r)[0], "trace");
  return find_series(outputs, "partial_trace");
}

}  // namespace

Json defaults() {
  const FlowParams fp;
  return {{"tol", kTieTol},
          {"samples", 0},
          {"samples_per_k", kSamplesPerK},
          {"zero_tol", kDefaultZeroTol},
          {"hessian_step", kDefaultHessianStep},
          {"cap", kCandidateCap},
          {"curve_samples", kDefaultCurveSamples},
          {"perturb_fraction", kPerturbFraction},
          {"flow", to_json(fp)}};
}

std::string version() { return UMORSE_VERSION; }

Json effective_scenario(Json scenario, const Overrides& o) {
  if (!scenario.is_object()) return scenario;
  Json& params = scenario["params"];
  if (params.is_null()) params = Json::object();
  if (params.is_object()) {
    if (o.tol) params["tol"] = *o.tol;
    if (o.samples) params["samples"] = *o.samples;
    if (o.step) params["step"] = *o.step;
    if (o.max_iters) params["max_iters"] = *o.max_iters;
    if (o.perturb_eps) params["perturb_eps"] = *o.perturb_eps;
  }
  if (o.seed) scenario["seed"] = *o.seed;
  return scenario;
}

std::string digest(const Json& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : scenario.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunResult run_scenario(const Json& raw, const Overrides& o, const std::filesystem::path& base_dir) {
  const auto start = std::chrono::steady_clock::now();
  RunResult res;
  const Json scenario = effective_scenario(raw, o);
  Json& rep = res.report;
  rep["schema_version"] = kSchemaVersion;
  rep["version"] = version();
  rep["defaults"] = defaults();
  rep["scenario_digest"] = digest(scenario);
  rep["command"] = scenario.is_object() ? scenario.value("command", Json(nullptr)) : Json(nullptr);
  rep["outputs"] = nullptr;
  try {
    if (!scenario.is_object()) fail("scenario", "expected a JSON object");
    for (const auto& [key, _] : scenario.items())
      if (!kTopKeys.count(key)) fail(key, "unknown field");
    const Json& cmd = require(scenario, "command", "scenario");
    if (!cmd.is_string() || !kCommands.count(cmd.get<std::string>()))
      fail("command", "expected one of dist, dplus, energy, candgrad, gradlike, minind, openly, probe, hessian, "
                      "flow, restart, sweep");
    const std::string command = cmd.get<std::string>();
    const Json inputs = scenario.value("inputs", Json::object());
    if (!inputs.is_object()) fail("inputs", "expected an object");
    const Settings s = settings_from(scenario);
    rep["params"] = {{"tol", s.tol}, {"samples", s.samples}, {"zero_tol", s.zero_tol},
                     {"hessian_step", s.hessian_step}, {"cap", s.cap}, {"flow", to_json(s.flow)}};
    rep["seed"] = s.seed ? Json(*s.seed) : Json(nullptr);
    if (command == "sweep") {
      int code = kOk;
      rep["outputs"] = run_sweep(inputs, o, base_dir, code);
      res.exit_code = code;
    } else {
      const SpaceSpec space = space_from_json(require(scenario, "space", "scenario"), "space");
      rep["outputs"] = run_command(command, space, inputs, s);
    }
  } catch (const ValidationError& e) {
    res.exit_code = kValidation;
    res.diagnostic = e.what();
    rep["error"] = {{"kind", "validation"}, {"message", e.what()}};
  } catch (const PartialTrace& p) {
    res.exit_code = kNumerical;
    rep["outputs"] = p.outputs;
    const Json* t = find_trace(p.outputs);
    res.diagnostic = p.outputs.value("error", t ? t->value("message", "flow failed") : "flow failed");
    rep["error"] = {{"kind", "numerical"}, {"message", res.diagnostic}};
  } catch (const NumericalError& e) {
    res.exit_code = kNumerical;
    res.diagnostic = e.what();
    rep["error"] = {{"kind", "numerical"}, {"message", e.what()}};
  } catch (const Json::exception& e) {
    res.exit_code = kValidation;
    res.diagnostic = std::string("scenario: ") + e.what();
    rep["error"] = {{"kind", "validation"}, {"message", res.diagnostic}};
  }
  rep["exit_code"] = res.exit_code;
  if (o.timing) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    rep["wall_time"] = dt.count();
  }
  return res;
}

namespace {

// 1-based line of the field named by a diagnostic path such as
// "space.periods[1]", found by scanning for each key in turn.
int locate(const std::string& text, const std::string& diagnostic) {
  const std::string path = diagnostic.substr(0, diagnostic.find(':'));
  std::size_t pos = 0;
  bool found = false;
  std::size_t i = 0;
  while (i < path.size()) {
    std::size_t j = path.find_first_of(".[", i);
    const std::string key = path.substr(i, j == std::string::npos ? std::string::npos : j - i);
    if (!key.empty() && key.back() != ']') {
      const std::size_t at = text.find("\"" + key + "\"", pos);
      if (at == std::string::npos) break;
      pos = at;
      found = true;
    }
    if (j == std::string::npos) break;
    i = path[j] == '[' ? path.find(']', j) + 1 : j + 1;
    if (i < path.size() && path[i] == '.') ++i;
  }
  if (!found) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

}  // namespace

RunResult run_scenario_text(const std::string& text, const Overrides& o, const std::filesystem::path& base_dir) {
  Json scenario;
  try {
    scenario = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    RunResult res;
    res.exit_code = kValidation;
    res.diagnostic = "line " + std::to_string(line) + ": " + e.what();
    res.report = {{"schema_version", kSchemaVersion}, {"version", version()},  {"defaults", defaults()},
                  {"scenario_digest", nullptr},        {"command", nullptr},    {"outputs", nullptr},
                  {"exit_code", kValidation},          {"error", {{"kind", "validation"}, {"message", res.diagnostic}}}};
    return res;
  }
  RunResult res = run_scenario(scenario, o, base_dir);
  if (res.exit_code == kValidation && res.report["command"] != "sweep") {
    if (const int line = locate(text, res.diagnostic); line > 0) {
      res.diagnostic = "line " + std::to_string(line) + ": " + res.diagnostic;
      res.report["error"]["message"] = res.diagnostic;
    }
  }
  return res;
}

RunResult run_scenario_file(const std::filesystem::path& path, const Overrides& o) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    RunResult res;
    res.exit_code = kValidation;
    res.diagnostic = "cannot read scenario file " + path.string();
    res.report = {{"schema_version", kSchemaVersion}, {"version", version()},
                  {"exit_code", kValidation},          {"error", {{"kind", "validation"}, {"message", res.diagnostic}}}};
    return res;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  RunResult res = run_scenario_text(ss.str(), o, path.parent_path());
  if (res.exit_code == kValidation) res.diagnostic = path.string() + ": " + res.diagnostic;
  return res;
}

std::string dump(const Json& report) { return report.dump(2) + "\n"; }

PlotKind plot_kind(const std::string& name) {
  if (name == "trace") return PlotKind::trace;
  if (name == "profile") return PlotKind::profile;
  if (name == "curve") return PlotKind::curve;
  throw ValidationError("kind: expected trace, profile or curve, got \"" + name + "\"");
}

std::string plot_csv(const Json& report, PlotKind kind) {
  const Json outputs = report.is_object() ? report.value("outputs", Json(nullptr)) : Json(nullptr);
  std::string out;
  const char* eol = "\r\n";
  switch (kind) {
    case PlotKind::trace: {
      const Json* t = find_trace(outputs);
      if (!t || !t->contains("energies")) throw ValidationError("report has no trace series");
      const Json& e = (*t)["energies"];
      const Json& g = (*t)["grad_norms"];
      out += std::string("iteration,energy,grad_norm") + eol;
      for (std::size_t i = 0; i < e.size(); ++i)
        out += std::to_string(i) + "," + csv_number(e[i].get<double>()) + "," + csv_number(g[i].get<double>()) + eol;
      break;
    }
    case PlotKind::profile: {
      const Json* p = find_series(outputs, "profile");
      if (!p || !p->is_array()) throw ValidationError("report has no profile series");
      out += std::string("s,minind,openly") + eol;
      for (const auto& r : *p)
        out += csv_number(r["s"].get<double>()) + "," + std::to_string(r["minind"].get<int>()) + "," +
               (r["openly"].get<bool>() ? "true" : "false") + eol;
      break;
    }
    case PlotKind::curve: {
      const Json* c = find_series(outputs, "curve");
      if (!c || !c->is_array() || c->empty()) throw ValidationError("report has no curve series");
      const std::size_t dim = (*c)[0]["coords"].size();
      out += "t";
      for (std::size_t d = 0; d < dim; ++d) out += ",x" + std::to_string(d + 1);
      bool faces = false;
      for (const auto& r : *c) faces = faces || !r["face"].is_null();
      if (faces) out += ",face";
      out += eol;
      for (const auto& r : *c) {
        out += csv_number(r["t"].get<double>());
        for (const auto& x : r["coords"]) out += "," + csv_number(x.get<double>());
        if (faces) {
          std::string f = r["face"].is_array() ? r["face"].dump() : r["face"].is_null() ? "" : r["face"].get<std::string>();
          if (f.find_first_of(",\"\r\n") != std::string::npos) {
            std::string q = "\"";
            for (char ch : f) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            f = q + "\"";
          }
          out += "," + f;
        }
        out += eol;
      }
      break;
    }
  }
  return out;
}

std::string json_lines(const Json& report) {
  const Json outputs = report.is_object() ? report.value("outputs", Json(nullptr)) : Json(nullptr);
  std::string out;
  if (const Json* p = find_series(outputs, "profile"); p && p->is_array()) {
    for (const auto& r : *p) out += r.dump() + "\n";
    return out;
  }
  if (const Json* t = find_trace(outputs)) {
    const Json& e = (*t)["energies"];
    const Json& g = (*t)["grad_norms"];
    for (std::size_t i = 0; i < e.size(); ++i)
      out += Json{{"iteration", i}, {"energy", e[i]}, {"grad_norm", g[i]}}.dump() + "\n";
    return out;
  }
  throw ValidationError("report has no profile or trace series");
}

}  // namespace umorse::cli
