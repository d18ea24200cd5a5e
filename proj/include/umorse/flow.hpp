#pragma once

// Discrete negative gradient flow of the energy on M^k, a Birkhoff-style
// midpoint shortening used as an independent cross-check, and the restart
// procedure that perturbs a closed geodesic along the negative of a
// gradient-like vector and flows again.

#include <optional>
#include <string>
#include <vector>

#include "umorse/curve.hpp"
#include "umorse/energy.hpp"
#include "umorse/error.hpp"

namespace umorse {

struct FlowParams {
  double step = 0.25;
  int max_iters = 20000;
  double grad_tol = 1e-7;
  double energy_tol = 1e-15;
  /// Restart displacement; unset selects 0.05 * min period of the space.
  std::optional<double> perturb_eps;
  double backtrack = 0.5;
  /// Keep every stride-th iterate in the trace (the final iterate is always kept).
  int stride = 1;
  double tie_tol = kTieTol;

  void validate() const;
  double perturbation(const SpaceSpec& space) const;
};

enum class FlowStatus { converged, stalled, max_iters, error };

struct FlowTrace {
  std::vector<Configuration> iterates;
  std::vector<double> energies;
  std::vector<double> grad_norms;
  FlowStatus status = FlowStatus::error;
  int iterations = 0;
  int nudges = 0;
  std::string message;

  const Configuration& final_configuration() const { return iterates.back(); }
};

enum class RestartOutcome {
  restarted,     // the flow reached a new closed geodesic
  no_direction,  // gradient-like vector vanishes: smooth critical point
  collapsed,     // reconnected loop is null-homotopic; the flow shrinks it to a point
};

struct RestartReport {
  ClosedGeodesic before;
  int before_minind = 0;
  double t0 = 0.0;
  Configuration start;
  std::optional<CandidateGradient> direction;
  std::optional<Configuration> perturbed;
  /// Winding class of the perturbed loop under the reconnection rule (flat backends).
  std::optional<std::vector<int>> reconnected_class;
  std::optional<ClosedGeodesic> after;
  std::optional<int> after_minind;
  FlowTrace trace;
  RestartOutcome outcome = RestartOutcome::no_direction;
};

struct RestartSequence {
  std::vector<RestartReport> reports;
  ClosedGeodesic final_geodesic;
  int final_minind = 0;
};

/// Raised when a flow cannot produce a usable limit; carries the partial trace.
class FlowError : public NumericalError {
 public:
  FlowError(const std::string& what, FlowTrace trace) : NumericalError(what), trace_(std::move(trace)) {}
  const FlowTrace& trace() const { return trace_; }

 private:
  FlowTrace trace_;
};

FlowTrace descend(const Configuration& x0, const FlowParams& params = {});
FlowTrace birkhoff_shorten(const Configuration& x0, const FlowParams& params = {});

/// Torus class (or segment loop) of a limit configuration. Requires an
/// associated geodesic at `tol` and straight joints; throws NumericalError otherwise.
ClosedGeodesic classify_limit(const Configuration& x, double tol);

/// Evenly spaced sample x_i = g(t0 + 2pi (i-1)/k).
Configuration sample_configuration(const ClosedGeodesic& g, int k, double t0 = 0.0);

RestartReport restart_step(const ClosedGeodesic& g, const FlowParams& params = {});
RestartSequence restart_until_stable(const ClosedGeodesic& g, const FlowParams& params = {}, int max_rounds = 8);

std::string to_string(FlowStatus s);
std::string to_string(RestartOutcome o);

}  // namespace umorse
