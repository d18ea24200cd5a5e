#include "umorse/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "umorse/energy.hpp"
#include "umorse/error.hpp"

namespace umorse {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

int sample_count(int k, int samples) {
  if (k < 2) throw ValidationError("k must be at least 2, got " + std::to_string(k));
  if (samples == 0) return kSamplesPerK * k;
  if (samples < 8 * k)
    throw ValidationError("need at least 8k = " + std::to_string(8 * k) + " samples, got " + std::to_string(samples));
  return samples;
}

double sample_t(int j, int samples) { return kTwoPi * j / samples; }

}  // namespace

bool is_k_geodesic(const ClosedGeodesic& g, int k, int samples, double tol) {
  const int m = sample_count(k, samples);
  const double target = g.length() / k;
  const double shift = kTwoPi / k;
  for (int j = 0; j < m; ++j) {
    const double t = sample_t(j, m);
    const double d = distance(g.space(), g.point_at(t), g.point_at(t + shift));
    if (std::abs(d - target) > tol) return false;
  }
  return true;
}

MinindResult minimizing_index(const ClosedGeodesic& g, int samples, double tol) {
  MinindResult out;
  if (const auto* tc = std::get_if<ClosedGeodesic::TorusClass>(&g.descriptor())) {
    int m = 0;
    for (int w : tc->winding) m = std::max(m, std::abs(w));
    out.closed_form = 2 * m;
  }
  double scale = g.space().min_scale();
  for (int j = 0; j < 256; ++j) scale = std::min(scale, cone_clearance(g.space(), g.point_at(sample_t(j, 256))));
  const int k_max = static_cast<int>(std::ceil(2 * g.length() / scale)) + 2;
  for (int k = 2; k <= k_max; ++k) {
    const int m = samples == 0 ? 0 : std::max(samples, 8 * k);
    if (is_k_geodesic(g, k, m, tol)) {
      out.minind = k;
      return out;
    }
  }
  throw NumericalError("minimizing_index: no 1/k-geodesic property up to k = " + std::to_string(k_max));
}

bool is_openly_k_geodesic(const ClosedGeodesic& g, int k, int samples, double tol) {
  if (!is_k_geodesic(g, k, samples, tol)) return false;
  const int m = sample_count(k, samples);
  const double shift = kTwoPi / k;
  for (int j = 0; j < m; ++j) {
    const double t = sample_t(j, m);
    if (is_cut_pair(g.space(), g.point_at(t), g.point_at(t + shift), tol)) return false;
  }
  return true;
}

std::optional<CutPair> max_cut_pair(const ClosedGeodesic& g, int k, int samples, double tol) {
  const int m = sample_count(k, samples);
  const double shift = kTwoPi / k;
  std::optional<CutPair> best;
  for (int j = 0; j < m; ++j) {
    const double t = sample_t(j, m);
    const auto gs = minimizing_geodesics(g.space(), g.point_at(t), g.point_at(t + shift), tol);
    if (gs.size() < 2) continue;
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : gs) d = std::min(d, s.length);
    const int mult = static_cast<int>(gs.size());
    if (!best || d > best->distance + tol || (std::abs(d - best->distance) <= tol && mult > best->multiplicity))
      best = CutPair{t, d, mult};
  }
  return best;
}

ClosedGeodesic varied_geodesic(const VariationSpec& var, double s) {
  const ClosedGeodesic& g = var.geodesic;
  const Transport moved = transport(g.space(), g.base(), s * var.field, 1.0);
  try {
    if (const auto* tc = std::get_if<ClosedGeodesic::TorusClass>(&g.descriptor()))
      return ClosedGeodesic::torus_class(g.space(), moved.end, tc->winding);
    const auto& loop = std::get<ClosedGeodesic::SegmentLoop>(g.descriptor());
    return ClosedGeodesic::segment_loop(g.space(), moved.end, moved.frame.cwiseProduct(loop.direction), loop.length);
  } catch (const ValidationError& e) {
    throw NumericalError("variation leaves the closed geodesics at s = " + std::to_string(s) + ": " + e.what());
  }
}

VariationProfile variation_minind_profile(const VariationSpec& var, int k_hint, int samples, double tol) {
  const ClosedGeodesic& g = var.geodesic;
  if (var.field.size() != g.space().dimension()) throw ValidationError("variation field dimension mismatch");
  if (var.steps < 2) throw ValidationError("variation needs at least 2 steps");
  if (!(var.range > 0.0)) throw ValidationError("variation range must be positive");
  const ClosedGeodesic::Frame f0 = g.frame_at(0.0);
  if (var.perpendicular && std::abs(var.field.dot(f0.velocity)) > 1e-9)
    throw ValidationError("variation field is not perpendicular to the geodesic");

  VariationProfile prof;
  prof.central_minind = minimizing_index(g, samples, tol).minind;
  prof.k = k_hint > 0 ? k_hint : prof.central_minind;
  const int k = prof.k;
  const int m = samples == 0 ? 0 : std::max(samples, 8 * k);

  prof.cut_pair = max_cut_pair(g, k, m, tol);
  if (prof.cut_pair) {
    const double t0 = prof.cut_pair->t0;
    const double t1 = t0 + kTwoPi / k;
    const auto fa = g.frame_at(t0);
    const auto fb = g.frame_at(t1);
    prof.dplus = dplus_distance(g.space(), fa.point, fb.point, fa.transport.cwiseProduct(var.field),
                                fb.transport.cwiseProduct(var.field), tol);
  }
  prof.central_openly = is_openly_k_geodesic(g, k, m, tol);

  bool all_openly = true;
  for (int j = 0; j < var.steps; ++j) {
    double s = -var.range + 2.0 * var.range * j / (var.steps - 1);
    if (std::abs(s) < 1e-15 * var.range) s = 0.0;
    const ClosedGeodesic a = varied_geodesic(var, s);
    ProfileSample ps;
    ps.s = s;
    ps.minind = minimizing_index(a, samples, tol).minind;
    ps.openly = is_openly_k_geodesic(a, k, m, tol);
    all_openly = all_openly && ps.openly;
    prof.samples.push_back(ps);
  }
  prof.openly_preserved = !prof.central_openly || all_openly;

  bool first_positive = true;
  bool run = true;
  for (const auto& ps : prof.samples) {
    if (ps.s <= 0.0) continue;
    if (first_positive) {
      prof.strict_prediction = prof.dplus && *prof.dplus < 0.0 && ps.minind == k + 1;
      first_positive = false;
    }
    if (run && ps.minind == k + 1) {
      prof.eps_observed = ps.s;
    } else {
      run = false;
    }
  }
  return prof;
}

}  // namespace umorse
