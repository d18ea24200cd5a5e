#pragma once

// Uniform energy E^k(x) = k * sum_i d(x_i, x_{i+1})^2 on k-point configurations,
// its one-sided directional derivative, candidate gradients, gradient-like
// vectors and the Hessian spectrum at smooth critical points.

#include <cstddef>
#include <optional>
#include <vector>

#include "umorse/curve.hpp"
#include "umorse/space.hpp"

namespace umorse {

struct Configuration {
  SpaceSpec space;
  std::vector<Point> points;  // cyclic: x_{k+1} = x_1

  /// Validates and canonicalizes every point; requires k >= 2.
  static Configuration make(SpaceSpec space, std::vector<Point> points);
  int k() const { return static_cast<int>(points.size()); }
};

/// One chart vector per configuration point.
using ConfigTangent = std::vector<Vec>;

struct CandidateGradient {
  ConfigTangent tangent;
  std::vector<Lift> choice;  // lift of the chosen minimizer, one per segment
  double magnitude = 0.0;    // product-metric norm

  /// Components stacked into one vector of length k * dim.
  Vec stacked() const;
};

struct HessianReport {
  int index = 0;
  int nullity = 0;
  std::vector<double> eigenvalues;  // ascending
  double zero_tol = 1e-6;
  /// A null direction perpendicular to the associated geodesic at every x_i.
  bool degenerate = false;
};

struct LoopEnergy {
  double length = 0.0;
  double energy = 0.0;
};

struct Association {
  bool associated = false;
  /// Present when associated and every segment has a unique minimizer.
  std::optional<ClosedGeodesic> geodesic;
};

inline constexpr std::size_t kCandidateCap = 1'000'000;

double uniform_energy(const Configuration& x);
LoopEnergy loop_energy(const Configuration& x);

/// min over eta in A(p,q) of -<v, eta'(0)> - <w, -eta'(l)>.
double dplus_distance(const SpaceSpec& space, const Point& p, const Point& q, const Vec& v, const Vec& w,
                      double tol = kTieTol);

/// One-sided directional derivative of E^k. With `normalized`, returns the
/// derivative divided by 2k.
double dplus_uniform_energy(const Configuration& x, const ConfigTangent& v, double tol = kTieTol,
                            bool normalized = false);

std::vector<CandidateGradient> candidate_gradients(const Configuration& x, double tol = kTieTol,
                                                   std::size_t cap = kCandidateCap);
/// The deterministic maximal-magnitude candidate (lexicographically smallest
/// stacked components among the maxima).
CandidateGradient gradient_like(const Configuration& x, double tol = kTieTol, std::size_t cap = kCandidateCap);
std::vector<CandidateGradient> gradient_like_all(const Configuration& x, double tol = kTieTol,
                                                 std::size_t cap = kCandidateCap);

Association has_associated_geodesic(const Configuration& x, double tol = kTieTol);

HessianReport hessian_index_nullity(const Configuration& x, double zero_tol = 1e-6, double step = 1e-5);

/// Moves every point by s * v_i along its exponential map.
Configuration exp_map(const Configuration& x, const ConfigTangent& v, double s);

double norm(const ConfigTangent& v);

namespace detail {
/// Minimizing segments x_i -> x_{i+1}, one list per i. Throws ValidationError
/// on coincident consecutive points.
std::vector<std::vector<MinGeodesic>> segment_sets(const Configuration& x, double tol);
/// Candidate components -(-l_{i-1} v1_{i-1} + l_i v0_i) for a fixed choice.
ConfigTangent candidate_components(const std::vector<const MinGeodesic*>& chosen);
/// Closed geodesic through x_1 built from a chain of chosen segments.
ClosedGeodesic associated_geodesic(const Configuration& x, const std::vector<const MinGeodesic*>& chosen);
}  // namespace detail

}  // namespace umorse
