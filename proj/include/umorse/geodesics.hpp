#pragma once

// 1/k-geodesic predicates, the minimizing index, cut-pair search along a
// closed geodesic, and variation probes through closed geodesics.

#include <optional>
#include <vector>

#include "umorse/curve.hpp"
#include "umorse/space.hpp"

namespace umorse {

/// samples == 0 selects the default density of 64 * k points on [0, 2pi).
inline constexpr int kSamplesPerK = 64;

bool is_k_geodesic(const ClosedGeodesic& g, int k, int samples = 0, double tol = kTieTol);

struct MinindResult {
  int minind = 0;
  /// 2 * max|m_i| for torus-class descriptors.
  std::optional<int> closed_form;
};

/// Smallest k >= 2 with is_k_geodesic. The search is bounded by
/// ceil(2L / c) + 2, c the smaller of the min scale and the loop's clearance
/// from cone points; exceeding it throws NumericalError.
MinindResult minimizing_index(const ClosedGeodesic& g, int samples = 0, double tol = kTieTol);

/// False when g is not a 1/k-geodesic or some sampled L/k-separated pair is a
/// cut pair.
bool is_openly_k_geodesic(const ClosedGeodesic& g, int k, int samples = 0, double tol = kTieTol);

struct CutPair {
  double t0 = 0.0;
  double distance = 0.0;
  int multiplicity = 0;  // number of minimizing segments between the pair
};

/// Among sampled t whose pair (g(t), g(t + 2pi/k)) is a cut pair, the one at
/// maximal distance. Ties prefer more minimizers, then the smallest t.
std::optional<CutPair> max_cut_pair(const ClosedGeodesic& g, int k, int samples = 0, double tol = kTieTol);

/// Variation alpha(s, t) = exp(g(t), s J(t)) with J the parallel extension of
/// `field` (a chart vector at g(0)) along g.
struct VariationSpec {
  ClosedGeodesic geodesic;
  Vec field;
  double range = 0.1;
  int steps = 21;
  bool perpendicular = false;
};

/// The closed geodesic alpha(s, .). Throws NumericalError if it does not close.
ClosedGeodesic varied_geodesic(const VariationSpec& var, double s);

struct ProfileSample {
  double s = 0.0;
  int minind = 0;
  bool openly = false;  // openly 1/k at the probe's k
};

struct VariationProfile {
  std::vector<ProfileSample> samples;
  int k = 0;               // probe k: k_hint, or minind of the central geodesic
  int central_minind = 0;
  std::optional<CutPair> cut_pair;
  /// D+ of the distance at the central cut pair in direction (J(t0), J(t0 + 2pi/k)).
  std::optional<double> dplus;
  /// D+ < 0 and the first sampled s > 0 has minind k + 1.
  bool strict_prediction = false;
  /// Largest sampled s > 0 such that every sampled s' in (0, s] has minind k + 1
  /// (0 when none does).
  double eps_observed = 0.0;
  bool central_openly = false;
  /// Central geodesic openly 1/k implies every sampled alpha(s, .) openly 1/k.
  bool openly_preserved = false;
};

VariationProfile variation_minind_profile(const VariationSpec& var, int k_hint = 0, int samples = 0,
                                          double tol = kTieTol);

}  // namespace umorse
