#pragma once

#include <variant>
#include <vector>

#include "umorse/space.hpp"

namespace umorse {

/// Constant-speed closed geodesic parameterized on t in [0, 2pi).
class ClosedGeodesic {
 public:
  /// (m_1, ..., m_n)-geodesic on a flat torus (or product of flat tori).
  struct TorusClass {
    Point base;
    std::vector<int> winding;
  };
  /// Straight loop: flow from `base` along unit `direction` for `length`.
  struct SegmentLoop {
    Point base;
    Vec direction;
    double length = 0.0;
  };
  using Descriptor = std::variant<TorusClass, SegmentLoop>;

  /// Throws ValidationError for the zero class or a space without flat periods.
  static ClosedGeodesic torus_class(SpaceSpec space, const Point& base, std::vector<int> winding);
  /// Throws ValidationError if the loop fails to close up within `closure_tol`.
  static ClosedGeodesic segment_loop(SpaceSpec space, const Point& base, const Vec& direction,
                                     double length, double closure_tol = 1e-9);

  const SpaceSpec& space() const { return space_; }
  const Descriptor& descriptor() const { return desc_; }
  const Point& base() const;
  double length() const { return length_; }
  /// Chart displacement of one full loop at the base, i.e. length * unit velocity.
  const Vec& displacement() const { return disp_; }

  Point point_at(double t) const;

  struct Frame {
    Point point;
    Vec velocity;  // unit, chart at `point`
    Vec transport; // base-chart -> chart at `point`, diagonal +-1
  };
  Frame frame_at(double t) const;

 private:
  ClosedGeodesic(SpaceSpec space, Descriptor desc, Vec disp, double length);
  SpaceSpec space_;
  Descriptor desc_;
  Vec disp_;
  double length_ = 0.0;
};

/// Reduces t into [0, 2pi).
double reduce_angle(double t);

}  // namespace umorse
