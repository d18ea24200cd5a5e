#include "umorse/curve.hpp"

#include <cmath>
#include <numbers>

#include "umorse/error.hpp"

namespace umorse {

double reduce_angle(double t) {
  constexpr double two_pi = 2 * std::numbers::pi;
  double r = t - two_pi * std::floor(t / two_pi);
  if (r >= two_pi || r < 0.0) r = 0.0;
  return r;
}

ClosedGeodesic::ClosedGeodesic(SpaceSpec space, Descriptor desc, Vec disp, double length)
    : space_(std::move(space)), desc_(std::move(desc)), disp_(std::move(disp)), length_(length) {}

ClosedGeodesic ClosedGeodesic::torus_class(SpaceSpec space, const Point& base, std::vector<int> winding) {
  const auto periods = space.flat_periods();
  if (!periods) throw ValidationError("torus_class requires a flat torus or a product of flat tori");
  if (winding.size() != periods->size())
    throw ValidationError("torus_class: winding vector has the wrong dimension");
  bool nonzero = false;
  Vec disp(static_cast<Eigen::Index>(winding.size()));
  for (std::size_t i = 0; i < winding.size(); ++i) {
    nonzero = nonzero || winding[i] != 0;
    disp[static_cast<Eigen::Index>(i)] = winding[i] * (*periods)[i];
  }
  if (!nonzero) throw ValidationError("torus_class: the zero class is a point, not a closed geodesic");
  Point b = space.point(base.coords, base.faces);
  const double length = disp.norm();
  return ClosedGeodesic(std::move(space), TorusClass{std::move(b), std::move(winding)}, std::move(disp), length);
}

ClosedGeodesic ClosedGeodesic::segment_loop(SpaceSpec space, const Point& base, const Vec& direction,
                                            double length, double closure_tol) {
  if (!(length > 0.0)) throw ValidationError("segment_loop: length must be positive");
  if (direction.size() != space.dimension()) throw ValidationError("segment_loop: direction dimension mismatch");
  const double n = direction.norm();
  if (!(n > 0.0)) throw ValidationError("segment_loop: direction must be nonzero");
  const Vec u = direction / n;
  Point b = space.point(base.coords, base.faces);
  const Transport end = transport(space, b, u, length);
  const double gap = distance(space, b, end.end);
  const double turn = (end.frame.cwiseProduct(u) - u).norm();
  if (gap > closure_tol || turn > closure_tol) {
    throw ValidationError("segment_loop does not close up (position gap " + std::to_string(gap) +
                          ", direction gap " + std::to_string(turn) + ")");
  }
  Vec disp = length * u;
  return ClosedGeodesic(std::move(space), SegmentLoop{std::move(b), u, length}, std::move(disp), length);
}

const Point& ClosedGeodesic::base() const {
  return std::visit([](const auto& d) -> const Point& { return d.base; }, desc_);
}

Point ClosedGeodesic::point_at(double t) const { return frame_at(t).point; }

ClosedGeodesic::Frame ClosedGeodesic::frame_at(double t) const {
  const double frac = reduce_angle(t) / (2 * std::numbers::pi);
  Transport tr = transport(space_, base(), disp_, frac);
  Frame f;
  f.point = std::move(tr.end);
  f.velocity = tr.frame.cwiseProduct(disp_ / length_);
  f.transport = std::move(tr.frame);
  return f;
}

}  // namespace umorse
