#include "umorse/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "umorse/geodesics.hpp"

namespace umorse {

namespace {

constexpr double kCollisionTol = 1e-12;
constexpr double kNudge = 1e-9;
constexpr double kMinStep = 1e-14;

ConfigTangent negated(const ConfigTangent& v, double scale = 1.0) {
  ConfigTangent out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -scale * v[i];
  return out;
}

// Separates coincident consecutive points by pushing the later one along the
// previous segment's direction.
int separate_collisions(Configuration& x, double tie_tol) {
  const int k = x.k();
  int nudges = 0;
  for (int i = 0; i < k; ++i) {
    const auto cur = static_cast<std::size_t>(i);
    const auto next = static_cast<std::size_t>((i + 1) % k);
    if (distance(x.space, x.points[cur], x.points[next]) > kCollisionTol) continue;
    const auto prev = static_cast<std::size_t>((i + k - 1) % k);
    Vec dir = Vec::Zero(x.space.dimension());
    dir[0] = 1.0;
    if (distance(x.space, x.points[prev], x.points[cur]) > kCollisionTol) {
      const auto gs = minimizing_geodesics(x.space, x.points[prev], x.points[cur], tie_tol);
      dir = gs.front().v1;
    }
    x.points[next] = transport(x.space, x.points[next], dir, kNudge).end;
    ++nudges;
  }
  return nudges;
}

std::optional<std::vector<int>> winding_of(const Configuration& x, const std::vector<const MinGeodesic*>& chosen) {
  const auto periods = x.space.flat_periods();
  if (!periods) return std::nullopt;
  Vec total = Vec::Zero(x.space.dimension());
  for (const auto* g : chosen) total += g->length * g->v0;
  std::vector<int> w(periods->size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = static_cast<int>(std::lround(total[static_cast<Eigen::Index>(i)] / (*periods)[i]));
  return w;
}

bool is_zero(const std::vector<int>& w) {
  return std::all_of(w.begin(), w.end(), [](int m) { return m == 0; });
}

class TraceRecorder {
 public:
  TraceRecorder(FlowTrace& trace, int stride) : trace_(trace), stride_(stride) {}

  void record(const Configuration& x, double energy, double grad, int iter) {
    trace_.energies.push_back(energy);
    trace_.grad_norms.push_back(grad);
    if (iter % stride_ == 0) {
      trace_.iterates.push_back(x);
      last_ = iter;
    }
  }
  void finish(const Configuration& x, int iter) {
    if (last_ != iter) trace_.iterates.push_back(x);
  }

 private:
  FlowTrace& trace_;
  int stride_;
  int last_ = -1;
};

// Shared driver: `advance` proposes the next configuration from (x, g).
template <class Advance>
FlowTrace run_flow(const Configuration& x0, const FlowParams& params, Advance&& advance) {
  params.validate();
  FlowTrace trace;
  TraceRecorder rec(trace, params.stride);
  Configuration x = Configuration::make(x0.space, x0.points);
  trace.nudges += separate_collisions(x, params.tie_tol);
  double energy = uniform_energy(x);
  bool stalled = false;
  int iter = 0;
  try {
    while (true) {
      const CandidateGradient g = gradient_like(x, params.tie_tol);
      rec.record(x, energy, g.magnitude, iter);
      if (g.magnitude <= params.grad_tol) {
        trace.status = FlowStatus::converged;
        break;
      }
      if (stalled) {
        trace.status = FlowStatus::stalled;
        break;
      }
      if (iter >= params.max_iters) {
        trace.status = FlowStatus::max_iters;
        break;
      }
      std::optional<Configuration> next = advance(x, g, energy);
      if (!next) {
        trace.status = FlowStatus::error;
        trace.message = "step underflow without energy decrease";
        break;
      }
      trace.nudges += separate_collisions(*next, params.tie_tol);
      const double e_next = uniform_energy(*next);
      stalled = energy - e_next <= params.energy_tol;
      x = std::move(*next);
      energy = e_next;
      ++iter;
    }
  } catch (const Error& e) {
    trace.status = FlowStatus::error;
    trace.message = e.what();
  }
  trace.iterations = iter;
  rec.finish(x, iter);
  if (trace.iterates.empty()) trace.iterates.push_back(x);
  return trace;
}

}  // namespace

void FlowParams::validate() const {
  if (!(step > 0.0)) throw ValidationError("flow: step must be positive");
  if (max_iters <= 0) throw ValidationError("flow: max_iters must be positive");
  if (!(grad_tol > 0.0)) throw ValidationError("flow: grad_tol must be positive");
  if (!(energy_tol > 0.0)) throw ValidationError("flow: energy_tol must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ValidationError("flow: backtrack must lie in (0,1)");
  if (perturb_eps && !(*perturb_eps > 0.0)) throw ValidationError("flow: perturb_eps must be positive");
  if (stride < 1) throw ValidationError("flow: stride must be at least 1");
  if (!(tie_tol > 0.0)) throw ValidationError("flow: tie_tol must be positive");
}

double FlowParams::perturbation(const SpaceSpec& space) const {
  return perturb_eps ? *perturb_eps : 0.05 * space.min_scale();
}

FlowTrace descend(const Configuration& x0, const FlowParams& params) {
  return run_flow(x0, params,
                  [&](const Configuration& x, const CandidateGradient& g, double energy) -> std::optional<Configuration> {
                    const ConfigTangent dir = negated(g.tangent);
                    for (double tau = params.step; tau >= kMinStep; tau *= params.backtrack) {
                      Configuration y = exp_map(x, dir, tau);
                      if (uniform_energy(y) < energy) return y;
                    }
                    return std::nullopt;
                  });
}

FlowTrace birkhoff_shorten(const Configuration& x0, const FlowParams& params) {
  return run_flow(x0, params,
                  [&](const Configuration& x, const CandidateGradient&, double energy) -> std::optional<Configuration> {
                    Configuration y = x;
                    const int k = y.k();
                    // Replace x_i by the midpoint of its lifted neighbours,
                    // x_i + (l_i v0_i - l_{i-1} v1_{i-1}) / 2, along the smallest-lift minimizers.
                    auto relax = [&](int i) {
                      const auto cur = static_cast<std::size_t>(i);
                      const auto prev = static_cast<std::size_t>((i + k - 1) % k);
                      const auto next = static_cast<std::size_t>((i + 1) % k);
                      const auto in = detail::segments(y.space, y.points[prev], y.points[cur], params.tie_tol, false);
                      const auto out = detail::segments(y.space, y.points[cur], y.points[next], params.tie_tol, false);
                      const Vec move = out.front().length * out.front().v0 - in.front().length * in.front().v1;
                      y.points[cur] = transport(y.space, y.points[cur], move, 0.5, params.tie_tol).end;
                    };
                    // Even indices first, then odd ones; for odd k the last index
                    // neighbours x_1 and joins the odd sweep.
                    const int even_end = k % 2 == 1 ? k - 1 : k;
                    for (int i = 0; i < even_end; i += 2) relax(i);
                    for (int i = 1; i < k; i += 2) relax(i);
                    if (k % 2 == 1) relax(k - 1);
                    if (uniform_energy(y) > energy) return std::nullopt;
                    return y;
                  });
}

ClosedGeodesic classify_limit(const Configuration& x, double tol) {
  const Association assoc = has_associated_geodesic(x, tol);
  if (!assoc.associated) throw NumericalError("classify_limit: configuration has no associated closed geodesic");
  const auto sets = detail::segment_sets(x, kTieTol);
  // Use the minimizer tuple whose candidate vanishes.
  const auto cands = candidate_gradients(x, kTieTol);
  const CandidateGradient* zero = nullptr;
  for (const auto& c : cands)
    if (c.magnitude <= tol && (!zero || c.magnitude < zero->magnitude)) zero = &c;
  std::vector<const MinGeodesic*> chosen;
  double l_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto it = std::find_if(sets[i].begin(), sets[i].end(),
                                 [&](const MinGeodesic& g) { return g.lift == zero->choice[i]; });
    chosen.push_back(&*it);
    l_min = std::min(l_min, it->length);
  }
  const std::size_t k = chosen.size();
  for (std::size_t i = 0; i < k; ++i) {
    const MinGeodesic& in = *chosen[(i + k - 1) % k];
    const double angle = (in.v1 - chosen[i]->v0).norm();
    if (angle > tol / l_min)
      throw NumericalError("classify_limit: joint " + std::to_string(i + 1) + " is not straight");
  }
  try {
    return detail::associated_geodesic(x, chosen);
  } catch (const ValidationError& e) {
    throw NumericalError(std::string("classify_limit: limit is not a closed geodesic: ") + e.what());
  }
}

Configuration sample_configuration(const ClosedGeodesic& g, int k, double t0) {
  if (k < 2) throw ValidationError("sample_configuration: k must be at least 2");
  std::vector<Point> pts;
  for (int i = 0; i < k; ++i) pts.push_back(g.point_at(t0 + 2 * std::numbers::pi * i / k));
  return Configuration::make(g.space(), std::move(pts));
}

RestartReport restart_step(const ClosedGeodesic& g, const FlowParams& params) {
  params.validate();
  if (!g.space().flat_periods())
    throw ValidationError("restart_step: requires a flat torus or a product of flat tori");

  const int k = minimizing_index(g).minind;
  const auto cut = max_cut_pair(g, k, 0, params.tie_tol);
  const double t0 = cut ? cut->t0 : 0.0;
  Configuration x = sample_configuration(g, k, t0);
  RestartReport rep{g, k, t0, x, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt, {}, RestartOutcome::no_direction};

  const CandidateGradient gl = gradient_like(x, params.tie_tol);
  if (gl.magnitude <= params.grad_tol) {
    rep.after = g;
    rep.after_minind = k;
    return rep;
  }
  rep.direction = gl;
  const Configuration xp = exp_map(x, negated(gl.tangent, 1.0 / gl.magnitude), params.perturbation(g.space()));
  rep.perturbed = xp;

  // Reconnection: among tied minimizers prefer the one aligned with the
  // pre-perturbation segment chosen by the gradient-like vector.
  {
    const auto pre = detail::segment_sets(x, params.tie_tol);
    const auto post = detail::segment_sets(xp, params.tie_tol);
    std::vector<const MinGeodesic*> chosen;
    for (std::size_t i = 0; i < post.size(); ++i) {
      const auto pit = std::find_if(pre[i].begin(), pre[i].end(),
                                    [&](const MinGeodesic& m) { return m.lift == gl.choice[i]; });
      const Vec& ref = pit->v0;
      const MinGeodesic* best = &post[i].front();
      for (const auto& m : post[i])
        if (m.v0.dot(ref) > best->v0.dot(ref)) best = &m;
      chosen.push_back(best);
    }
    rep.reconnected_class = winding_of(xp, chosen);
  }

  rep.trace = descend(xp, params);
  if (rep.trace.status == FlowStatus::error || rep.trace.status == FlowStatus::max_iters)
    throw FlowError("restart_step: flow did not converge (" + to_string(rep.trace.status) +
                        (rep.trace.message.empty() ? "" : ": " + rep.trace.message) + ")",
                    rep.trace);

  const Configuration& limit = rep.trace.final_configuration();
  {
    std::vector<std::vector<MinGeodesic>> sets;
    for (int i = 0; i < limit.k(); ++i)
      sets.push_back(detail::segments(limit.space, limit.points[static_cast<std::size_t>(i)],
                                      limit.points[static_cast<std::size_t>((i + 1) % limit.k())], params.tie_tol, false));
    std::vector<const MinGeodesic*> chosen;
    for (const auto& s : sets) chosen.push_back(&s.front());
    const auto w = winding_of(limit, chosen);
    if (w && is_zero(*w)) {
      rep.outcome = RestartOutcome::collapsed;
      return rep;
    }
  }
  try {
    rep.after = classify_limit(limit, 10.0 * params.grad_tol);
  } catch (const NumericalError& e) {
    throw FlowError(std::string("restart_step: ") + e.what(), rep.trace);
  }
  rep.after_minind = minimizing_index(*rep.after).minind;
  rep.outcome = RestartOutcome::restarted;
  return rep;
}

RestartSequence restart_until_stable(const ClosedGeodesic& g, const FlowParams& params, int max_rounds) {
  if (max_rounds < 1) throw ValidationError("restart_until_stable: max_rounds must be positive");
  RestartSequence seq{{}, g, minimizing_index(g).minind};
  ClosedGeodesic current = g;
  int current_minind = seq.final_minind;
  for (int round = 0; round < max_rounds; ++round) {
    RestartReport rep = restart_step(current, params);
    const bool moved = rep.outcome == RestartOutcome::restarted;
    std::optional<ClosedGeodesic> next = rep.after;
    const int next_minind = rep.after_minind.value_or(current_minind);
    seq.reports.push_back(std::move(rep));
    if (!moved) break;
    if (next_minind < seq.final_minind) {
      seq.final_geodesic = *next;
      seq.final_minind = next_minind;
    }
    if (next_minind >= current_minind) break;
    current = *next;
    current_minind = next_minind;
  }
  return seq;
}

std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged: return "converged";
    case FlowStatus::stalled: return "stalled";
    case FlowStatus::max_iters: return "max_iters";
    case FlowStatus::error: return "error";
  }
  return "error";
}

std::string to_string(RestartOutcome o) {
  switch (o) {
    case RestartOutcome::restarted: return "restarted";
    case RestartOutcome::no_direction: return "no_direction";
    case RestartOutcome::collapsed: return "collapsed";
  }
  return "collapsed";
}

}  // namespace umorse
