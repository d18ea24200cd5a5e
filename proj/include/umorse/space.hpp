#pragma once

// Geometry backends: flat n-tori, the doubled rectangle (a flat sphere with
// four cone points) and Riemannian products of those. Every backend is flat
// away from cone points, so distances and minimizing geodesics are computed
// in closed form by enumerating lattice lifts in a covering chart.

#include <Eigen/Core>

#include <optional>
#include <variant>
#include <vector>

namespace umorse {

using Vec = Eigen::VectorXd;

/// Integer descriptor of a lift: the lattice translate applied to the target
/// point, followed (doubled rectangle only) by an involution flag. Products
/// concatenate factor descriptors.
using Lift = std::vector<int>;

/// Default tie tolerance, in chart units, for "minimizing".
inline constexpr double kTieTol = 1e-9;

/// Points closer than this are treated as the same point (chart roundoff).
inline constexpr double kCoincideTol = 1e-12;

enum class Face { none, top, bottom };

struct Point {
  Vec coords;
  /// One entry per doubled-rectangle factor, in factor order. Empty for tori.
  std::vector<Face> faces;

  static Point at(std::initializer_list<double> xs, Face face = Face::none);
};

struct Tangent {
  Point base;
  Vec vec;
};

/// One unit-speed minimizing geodesic eta from p to q. v0 is eta'(0) in the
/// chart at p, v1 is eta'(l) in the chart at q.
struct MinGeodesic {
  double length = 0.0;
  Vec v0;
  Vec v1;
  Lift lift;
};

/// Result of flowing a point along a straight chart trajectory. `frame` is the
/// diagonal (entries +-1) of the linear map taking chart vectors at the start
/// to chart vectors at the end.
struct Transport {
  Point end;
  Vec frame;
};

class SpaceSpec {
 public:
  struct FlatTorus {
    std::vector<double> periods;
  };
  struct DoubledRectangle {
    double a = 1.0;
    double b = 1.0;
  };
  struct Product {
    std::vector<SpaceSpec> factors;
  };
  using Variant = std::variant<FlatTorus, DoubledRectangle, Product>;

  static SpaceSpec flat_torus(std::vector<double> periods);
  static SpaceSpec doubled_rectangle(double a, double b);
  static SpaceSpec product(std::vector<SpaceSpec> factors);

  const Variant& variant() const { return v_; }
  bool is_flat_torus() const { return std::holds_alternative<FlatTorus>(v_); }
  bool is_doubled_rectangle() const { return std::holds_alternative<DoubledRectangle>(v_); }
  bool is_product() const { return std::holds_alternative<Product>(v_); }

  int dimension() const;
  /// Number of doubled-rectangle leaves (length of Point::faces).
  int face_count() const;
  /// Periods when the space is a flat torus or a product of flat tori.
  std::optional<std::vector<double>> flat_periods() const;
  /// Smallest period / rectangle side over all leaves.
  double min_scale() const;

  /// Validates and canonicalizes chart coordinates.
  Point point(Vec coords, std::vector<Face> faces = {}) const;
  Point canonical(const Point& p) const;
  void validate(const Point& p) const;
  void validate(const Tangent& t) const;

  std::vector<Point> split(const Point& p) const;
  Point join(const std::vector<Point>& parts) const;
  std::vector<Vec> split(const Vec& v) const;

  friend bool operator==(const SpaceSpec& a, const SpaceSpec& b);

 private:
  explicit SpaceSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

double distance(const SpaceSpec& space, const Point& p, const Point& q);

/// Chart distance from p to the nearest cone point; infinite on flat tori.
double cone_clearance(const SpaceSpec& space, const Point& p);

/// distance(p, q) <= kCoincideTol.
bool coincide(const SpaceSpec& space, const Point& p, const Point& q);

/// Every lift whose segment length is within `tol` of the distance, sorted by
/// lift descriptor. Throws ValidationError when p == q and, unless
/// `allow_degenerate`, DegenerateGeodesicError for segments through cone points.
std::vector<MinGeodesic> minimizing_geodesics(const SpaceSpec& space, const Point& p,
                                              const Point& q, double tol = kTieTol,
                                              bool allow_degenerate = false);

Transport transport(const SpaceSpec& space, const Point& base, const Vec& vec, double s,
                    double tol = kTieTol);

Point exp_map(const SpaceSpec& space, const Tangent& t, double s);

bool is_cut_pair(const SpaceSpec& space, const Point& p, const Point& q,
                 double tol = kTieTol);

namespace detail {
// Same as minimizing_geodesics but p == q yields one stationary segment.
std::vector<MinGeodesic> segments(const SpaceSpec& space, const Point& p, const Point& q,
                                  double tol, bool allow_degenerate);
}  // namespace detail

}  // namespace umorse
