#include "umorse/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "umorse/error.hpp"

namespace umorse {

namespace {

constexpr double kChartSlack = 1e-12;

double wrap(double x, double period) {
  double r = x - period * std::floor(x / period);
  if (r >= period || r < 0.0) r = 0.0;
  return r;
}

struct Overload {
  template <class... Fs>
  struct Impl : Fs... {
    using Fs::operator()...;
  };
};
template <class... Fs>
auto overload(Fs... fs) {
  return Overload::Impl<Fs...>{fs...};
}

// One coordinate of a lattice search: every translate lambda with
// (delta + lambda * period)^2 <= best^2 + slack.
struct AxisLift {
  int lambda;
  double offset;
};

std::vector<AxisLift> axis_lifts(double delta, double period, double slack) {
  const long nearest = std::lround(-delta / period);
  std::vector<AxisLift> out;
  double best = std::numeric_limits<double>::infinity();
  for (long l = nearest - 1; l <= nearest + 1; ++l) best = std::min(best, std::abs(delta + l * period));
  for (long l = nearest - 1; l <= nearest + 1; ++l) {
    const double e = delta + l * period;
    if (e * e <= best * best + slack) out.push_back({static_cast<int>(l), e});
  }
  return out;
}

double axis_best(double delta, double period) {
  const double e = delta - period * std::round(delta / period);
  return std::abs(e);
}

// Cartesian product over per-axis choices.
template <class F>
void for_each_combination(const std::vector<std::vector<AxisLift>>& axes, F&& f) {
  std::vector<std::size_t> idx(axes.size(), 0);
  for (const auto& a : axes)
    if (a.empty()) return;
  while (true) {
    f(idx);
    std::size_t i = axes.size();
    while (i > 0) {
      --i;
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (axes.empty()) return;
  }
}

// ---- doubled rectangle covering model -------------------------------------
// The double of [0,a]x[0,b] is the quotient of the covering torus
// R^2/(2aZ + 2bZ) by iota(x,y) = (-x,-y). The top face lifts identically, the
// bottom face lifts by x -> -x. Cone points are the images of aZ x bZ.

struct CoverPoint {
  double x;
  double y;
  double sx;  // chart -> cover sign on x
};

CoverPoint to_cover(const Point& p) {
  const bool bottom = !p.faces.empty() && p.faces[0] == Face::bottom;
  if (bottom) return {-p.coords[0], p.coords[1], -1.0};
  return {p.coords[0], p.coords[1], 1.0};
}

// Maps a cover point back to a canonical chart point. `signs` maps cover
// vectors at (X,Y) to chart vectors at the returned point.
Point from_cover(const SpaceSpec::DoubledRectangle& dr, double X, double Y, Vec* signs) {
  X = wrap(X, 2 * dr.a);
  Y = wrap(Y, 2 * dr.b);
  double s = 1.0;
  if (Y > dr.b) {
    X = wrap(-X, 2 * dr.a);
    Y = 2 * dr.b - Y;
    s = -1.0;
  }
  Point out;
  out.coords.resize(2);
  double sx = s;
  double sy = s;
  if (X <= dr.a) {
    out.coords << X, Y;
    out.faces = {Face::top};
  } else {
    out.coords << 2 * dr.a - X, Y;
    out.faces = {Face::bottom};
    sx = -sx;
    if (Y == 0.0 || Y == dr.b) {
      // Edge points belong to both faces; the top chart is canonical.
      out.faces = {Face::top};
      sy = -sy;
    }
  }
  if (signs) {
    signs->resize(2);
    *signs << sx, sy;
  }
  return out;
}

double point_segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

bool passes_cone_point(const SpaceSpec::DoubledRectangle& dr, double ax, double ay, double bx,
                       double by, double tol) {
  const long m0 = static_cast<long>(std::floor(std::min(ax, bx) / dr.a)) - 1;
  const long m1 = static_cast<long>(std::ceil(std::max(ax, bx) / dr.a)) + 1;
  const long n0 = static_cast<long>(std::floor(std::min(ay, by) / dr.b)) - 1;
  const long n1 = static_cast<long>(std::ceil(std::max(ay, by) / dr.b)) + 1;
  for (long m = m0; m <= m1; ++m)
    for (long n = n0; n <= n1; ++n)
      if (point_segment_distance(m * dr.a, n * dr.b, ax, ay, bx, by) <= tol) return true;
  return false;
}

std::string describe(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.coords.size(); ++i) os << (i ? "," : "") << p.coords[i];
  os << ")";
  return os.str();
}

// ---- per-backend segment enumeration ---------------------------------------

std::vector<MinGeodesic> torus_segments(const SpaceSpec::FlatTorus& t, const Point& p, const Point& q,
                                        double tol) {
  const int n = static_cast<int>(t.periods.size());
  double d2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = axis_best(q.coords[i] - p.coords[i], t.periods[i]);
    d2 += e * e;
  }
  const double d = std::sqrt(d2);
  const double slack = (d + tol) * (d + tol) - d2;
  std::vector<std::vector<AxisLift>> axes;
  for (int i = 0; i < n; ++i) axes.push_back(axis_lifts(q.coords[i] - p.coords[i], t.periods[i], slack));

  std::vector<MinGeodesic> out;
  for_each_combination(axes, [&](const std::vector<std::size_t>& idx) {
    Vec w(n);
    Lift lift(n);
    for (int i = 0; i < n; ++i) {
      w[i] = axes[i][idx[i]].offset;
      lift[i] = axes[i][idx[i]].lambda;
    }
    const double l = w.norm();
    if (l > d + tol) return;
    MinGeodesic g;
    g.length = l;
    g.v0 = l > 0.0 ? Vec(w / l) : Vec(Vec::Zero(n));
    g.v1 = g.v0;
    g.lift = std::move(lift);
    out.push_back(std::move(g));
  });
  return out;
}

std::vector<MinGeodesic> doubled_segments(const SpaceSpec::DoubledRectangle& dr, const Point& p,
                                          const Point& q, double tol, bool allow_degenerate) {
  const CoverPoint P = to_cover(p);
  const CoverPoint Q = to_cover(q);
  const double px = 2 * dr.a;
  const double py = 2 * dr.b;

  double d = std::numeric_limits<double>::infinity();
  for (int flip = 0; flip < 2; ++flip) {
    const double sgn = flip ? -1.0 : 1.0;
    d = std::min(d, std::hypot(axis_best(sgn * Q.x - P.x, px), axis_best(sgn * Q.y - P.y, py)));
  }
  const double slack = (d + tol) * (d + tol) - d * d;

  std::vector<MinGeodesic> out;
  for (int flip = 0; flip < 2; ++flip) {
    const double sgn = flip ? -1.0 : 1.0;
    std::vector<std::vector<AxisLift>> axes{axis_lifts(sgn * Q.x - P.x, px, slack),
                                            axis_lifts(sgn * Q.y - P.y, py, slack)};
    for_each_combination(axes, [&](const std::vector<std::size_t>& idx) {
      const double wx = axes[0][idx[0]].offset;
      const double wy = axes[1][idx[1]].offset;
      const double l = std::hypot(wx, wy);
      if (l > d + tol) return;
      if (!allow_degenerate && passes_cone_point(dr, P.x, P.y, P.x + wx, P.y + wy, tol)) {
        throw DegenerateGeodesicError("doubled rectangle: minimizing segment from " + describe(p) +
                                      " to " + describe(q) + " passes through a cone point");
      }
      MinGeodesic g;
      g.length = l;
      g.v0 = Vec::Zero(2);
      g.v1 = Vec::Zero(2);
      if (l > 0.0) {
        const double ux = wx / l;
        const double uy = wy / l;
        g.v0 << P.sx * ux, uy;
        // Pull the terminal velocity back through the involution when used.
        g.v1 << Q.sx * sgn * ux, sgn * uy;
      }
      g.lift = {axes[0][idx[0]].lambda, axes[1][idx[1]].lambda, flip};
      out.push_back(std::move(g));
    });
  }
  return out;
}

void sort_by_lift(std::vector<MinGeodesic>& gs) {
  std::sort(gs.begin(), gs.end(),
            [](const MinGeodesic& a, const MinGeodesic& b) { return a.lift < b.lift; });
  gs.erase(std::unique(gs.begin(), gs.end(),
                       [](const MinGeodesic& a, const MinGeodesic& b) { return a.lift == b.lift; }),
           gs.end());
}

}  // namespace

Point Point::at(std::initializer_list<double> xs, Face face) {
  Point p;
  p.coords.resize(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p.coords[i++] = x;
  if (face != Face::none) p.faces = {face};
  return p;
}

// ---- SpaceSpec ---------------------------------------------------------------

SpaceSpec SpaceSpec::flat_torus(std::vector<double> periods) {
  if (periods.empty()) throw ValidationError("flat_torus: periods must be nonempty");
  for (double a : periods)
    if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("flat_torus: periods must be positive");
  return SpaceSpec(FlatTorus{std::move(periods)});
}

SpaceSpec SpaceSpec::doubled_rectangle(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw ValidationError("doubled_rectangle: a and b must be positive");
  return SpaceSpec(DoubledRectangle{a, b});
}

SpaceSpec SpaceSpec::product(std::vector<SpaceSpec> factors) {
  if (factors.size() < 2) throw ValidationError("product: at least two factors required");
  return SpaceSpec(Product{std::move(factors)});
}

int SpaceSpec::dimension() const {
  return std::visit(overload([](const FlatTorus& t) { return static_cast<int>(t.periods.size()); },
                             [](const DoubledRectangle&) { return 2; },
                             [](const Product& p) {
                               int n = 0;
                               for (const auto& f : p.factors) n += f.dimension();
                               return n;
                             }),
                    v_);
}

int SpaceSpec::face_count() const {
  return std::visit(overload([](const FlatTorus&) { return 0; }, [](const DoubledRectangle&) { return 1; },
                             [](const Product& p) {
                               int n = 0;
                               for (const auto& f : p.factors) n += f.face_count();
                               return n;
                             }),
                    v_);
}

std::optional<std::vector<double>> SpaceSpec::flat_periods() const {
  if (const auto* t = std::get_if<FlatTorus>(&v_)) return t->periods;
  if (const auto* p = std::get_if<Product>(&v_)) {
    std::vector<double> out;
    for (const auto& f : p->factors) {
      auto fp = f.flat_periods();
      if (!fp) return std::nullopt;
      out.insert(out.end(), fp->begin(), fp->end());
    }
    return out;
  }
  return std::nullopt;
}

double SpaceSpec::min_scale() const {
  return std::visit(
      overload([](const FlatTorus& t) { return *std::min_element(t.periods.begin(), t.periods.end()); },
               [](const DoubledRectangle& d) { return std::min(d.a, d.b); },
               [](const Product& p) {
                 double m = std::numeric_limits<double>::infinity();
                 for (const auto& f : p.factors) m = std::min(m, f.min_scale());
                 return m;
               }),
      v_);
}

void SpaceSpec::validate(const Point& p) const {
  if (p.coords.size() != dimension()) {
    throw ValidationError("point has dimension " + std::to_string(p.coords.size()) + ", space has " +
                          std::to_string(dimension()));
  }
  if (!p.coords.allFinite()) throw ValidationError("point coordinates must be finite");
  const int fc = face_count();
  if (!(static_cast<int>(p.faces.size()) == fc || (p.faces.empty() && fc <= 1) ||
        (fc == 0 && p.faces.size() == 1 && p.faces[0] == Face::none))) {
    throw ValidationError("point carries " + std::to_string(p.faces.size()) + " face tags, space needs " +
                          std::to_string(fc));
  }
  if (const auto* dr = std::get_if<DoubledRectangle>(&v_)) {
    const double x = p.coords[0];
    const double y = p.coords[1];
    if (x < -kChartSlack || x > dr->a + kChartSlack || y < -kChartSlack || y > dr->b + kChartSlack)
      throw ValidationError("doubled rectangle point " + describe(p) + " lies outside [0,a]x[0,b]");
    const bool edge = x <= kChartSlack || x >= dr->a - kChartSlack || y <= kChartSlack || y >= dr->b - kChartSlack;
    if (!edge && (p.faces.empty() || p.faces[0] == Face::none))
      throw ValidationError("doubled rectangle point " + describe(p) + " needs a face (top or bottom)");
  }
  if (const auto* prod = std::get_if<Product>(&v_)) {
    const auto parts = split(p);
    for (std::size_t i = 0; i < parts.size(); ++i) prod->factors[i].validate(parts[i]);
  }
}

void SpaceSpec::validate(const Tangent& t) const {
  validate(t.base);
  if (t.vec.size() != dimension()) throw ValidationError("tangent vector dimension mismatch");
  if (!t.vec.allFinite()) throw ValidationError("tangent vector must be finite");
}

std::vector<Point> SpaceSpec::split(const Point& p) const {
  const auto* prod = std::get_if<Product>(&v_);
  if (!prod) return {p};
  std::vector<Point> out;
  Eigen::Index off = 0;
  std::size_t foff = 0;
  for (const auto& f : prod->factors) {
    Point fp;
    fp.coords = p.coords.segment(off, f.dimension());
    const auto nf = static_cast<std::size_t>(f.face_count());
    if (foff + nf <= p.faces.size())
      fp.faces.assign(p.faces.begin() + static_cast<long>(foff), p.faces.begin() + static_cast<long>(foff + nf));
    off += f.dimension();
    foff += nf;
    out.push_back(std::move(fp));
  }
  return out;
}

double cone_clearance(const SpaceSpec& space, const Point& p) {
  return std::visit(
      overload([](const SpaceSpec::FlatTorus&) { return std::numeric_limits<double>::infinity(); },
               [&](const SpaceSpec::DoubledRectangle& d) {
                 const double x = std::min(p.coords(0), d.a - p.coords(0));
                 const double y = std::min(p.coords(1), d.b - p.coords(1));
                 return std::hypot(x, y);
               },
               [&](const SpaceSpec::Product& prod) {
                 const auto parts = space.split(p);
                 double m = std::numeric_limits<double>::infinity();
                 for (std::size_t i = 0; i < parts.size(); ++i)
                   m = std::min(m, cone_clearance(prod.factors[i], parts[i]));
                 return m;
               }),
      space.variant());
}

std::vector<Vec> SpaceSpec::split(const Vec& v) const {
  const auto* prod = std::get_if<Product>(&v_);
  if (!prod) return {v};
  std::vector<Vec> out;
  Eigen::Index off = 0;
  for (const auto& f : prod->factors) {
    out.emplace_back(v.segment(off, f.dimension()));
    off += f.dimension();
  }
  return out;
}

Point SpaceSpec::join(const std::vector<Point>& parts) const {
  Point out;
  out.coords.resize(dimension());
  Eigen::Index off = 0;
  for (const auto& part : parts) {
    out.coords.segment(off, part.coords.size()) = part.coords;
    off += part.coords.size();
    for (Face f : part.faces)
      if (f != Face::none) out.faces.push_back(f);
  }
  return out;
}

Point SpaceSpec::canonical(const Point& p) const {
  return std::visit(overload(
                        [&](const FlatTorus& t) {
                          Point out;
                          out.coords.resize(p.coords.size());
                          for (int i = 0; i < p.coords.size(); ++i)
                            out.coords[i] = wrap(p.coords[i], t.periods[i]);
                          return out;
                        },
                        [&](const DoubledRectangle& dr) {
                          Point q = p;
                          q.coords[0] = std::clamp(q.coords[0], 0.0, dr.a);
                          q.coords[1] = std::clamp(q.coords[1], 0.0, dr.b);
                          if (q.faces.empty()) q.faces = {Face::top};
                          const CoverPoint c = to_cover(q);
                          return from_cover(dr, c.x, c.y, nullptr);
                        },
                        [&](const Product& prod) {
                          auto parts = split(p);
                          for (std::size_t i = 0; i < parts.size(); ++i)
                            parts[i] = prod.factors[i].canonical(parts[i]);
                          return join(parts);
                        }),
                    v_);
}

Point SpaceSpec::point(Vec coords, std::vector<Face> faces) const {
  Point p{std::move(coords), std::move(faces)};
  validate(p);
  return canonical(p);
}

bool operator==(const SpaceSpec& a, const SpaceSpec& b) {
  if (a.v_.index() != b.v_.index()) return false;
  if (const auto* t = std::get_if<SpaceSpec::FlatTorus>(&a.v_))
    return t->periods == std::get<SpaceSpec::FlatTorus>(b.v_).periods;
  if (const auto* d = std::get_if<SpaceSpec::DoubledRectangle>(&a.v_)) {
    const auto& e = std::get<SpaceSpec::DoubledRectangle>(b.v_);
    return d->a == e.a && d->b == e.b;
  }
  return std::get<SpaceSpec::Product>(a.v_).factors == std::get<SpaceSpec::Product>(b.v_).factors;
}

// ---- operations --------------------------------------------------------------

double distance(const SpaceSpec& space, const Point& p0, const Point& q0) {
  space.validate(p0);
  space.validate(q0);
  const Point p = space.canonical(p0);
  const Point q = space.canonical(q0);
  return std::visit(overload(
                        [&](const SpaceSpec::FlatTorus& t) {
                          double d2 = 0.0;
                          for (std::size_t i = 0; i < t.periods.size(); ++i) {
                            const auto ii = static_cast<Eigen::Index>(i);
                            const double e = axis_best(q.coords[ii] - p.coords[ii], t.periods[i]);
                            d2 += e * e;
                          }
                          return std::sqrt(d2);
                        },
                        [&](const SpaceSpec::DoubledRectangle& dr) {
                          const CoverPoint P = to_cover(p);
                          const CoverPoint Q = to_cover(q);
                          double d = std::numeric_limits<double>::infinity();
                          for (double sgn : {1.0, -1.0})
                            d = std::min(d, std::hypot(axis_best(sgn * Q.x - P.x, 2 * dr.a),
                                                       axis_best(sgn * Q.y - P.y, 2 * dr.b)));
                          return d;
                        },
                        [&](const SpaceSpec::Product& prod) {
                          const auto ps = space.split(p);
                          const auto qs = space.split(q);
                          double d2 = 0.0;
                          for (std::size_t i = 0; i < ps.size(); ++i) {
                            const double d = distance(prod.factors[i], ps[i], qs[i]);
                            d2 += d * d;
                          }
                          return std::sqrt(d2);
                        }),
                    space.variant());
}

namespace detail {

std::vector<MinGeodesic> segments(const SpaceSpec& space, const Point& p0, const Point& q0, double tol,
                                  bool allow_degenerate) {
  if (!(tol > 0.0)) throw ValidationError("tie tolerance must be positive");
  space.validate(p0);
  space.validate(q0);
  const Point p = space.canonical(p0);
  const Point q = space.canonical(q0);
  std::vector<MinGeodesic> out = std::visit(
      overload([&](const SpaceSpec::FlatTorus& t) { return torus_segments(t, p, q, tol); },
               [&](const SpaceSpec::DoubledRectangle& dr) {
                 return doubled_segments(dr, p, q, tol, allow_degenerate);
               },
               [&](const SpaceSpec::Product& prod) {
                 const auto ps = space.split(p);
                 const auto qs = space.split(q);
                 std::vector<std::vector<MinGeodesic>> lists;
                 double d2 = 0.0;
                 for (std::size_t i = 0; i < ps.size(); ++i) {
                   lists.push_back(segments(prod.factors[i], ps[i], qs[i], tol, allow_degenerate));
                   double m = std::numeric_limits<double>::infinity();
                   for (const auto& g : lists.back()) m = std::min(m, g.length);
                   d2 += m * m;
                 }
                 const double d = std::sqrt(d2);
                 const int n = space.dimension();
                 std::vector<MinGeodesic> prod_out;
                 std::vector<std::size_t> idx(lists.size(), 0);
                 while (true) {
                   Vec w0(n);
                   Vec w1(n);
                   Lift lift;
                   Eigen::Index off = 0;
                   for (std::size_t i = 0; i < lists.size(); ++i) {
                     const auto& g = lists[i][idx[i]];
                     const auto fd = g.v0.size();
                     w0.segment(off, fd) = g.length * g.v0;
                     w1.segment(off, fd) = g.length * g.v1;
                     lift.insert(lift.end(), g.lift.begin(), g.lift.end());
                     off += fd;
                   }
                   const double l = w0.norm();
                   if (l <= d + tol) {
                     MinGeodesic g;
                     g.length = l;
                     g.v0 = l > 0.0 ? Vec(w0 / l) : Vec(Vec::Zero(n));
                     g.v1 = l > 0.0 ? Vec(w1 / l) : Vec(Vec::Zero(n));
                     g.lift = std::move(lift);
                     prod_out.push_back(std::move(g));
                   }
                   std::size_t i = lists.size();
                   bool done = true;
                   while (i > 0) {
                     --i;
                     if (++idx[i] < lists[i].size()) {
                       done = false;
                       break;
                     }
                     idx[i] = 0;
                   }
                   if (done) break;
                 }
                 return prod_out;
               }),
      space.variant());
  sort_by_lift(out);
  return out;
}

}  // namespace detail

bool coincide(const SpaceSpec& space, const Point& p, const Point& q) {
  return distance(space, p, q) <= kCoincideTol;
}

std::vector<MinGeodesic> minimizing_geodesics(const SpaceSpec& space, const Point& p, const Point& q,
                                              double tol, bool allow_degenerate) {
  if (coincide(space, p, q))
    throw ValidationError("minimizing_geodesics: p and q coincide, velocity undefined");
  return detail::segments(space, p, q, tol, allow_degenerate);
}

Transport transport(const SpaceSpec& space, const Point& base0, const Vec& vec, double s, double tol) {
  if (!(s >= 0.0)) throw ValidationError("exp_map: flow time must be nonnegative");
  space.validate(Tangent{base0, vec});
  const Point base = space.canonical(base0);
  return std::visit(overload(
                        [&](const SpaceSpec::FlatTorus&) {
                          return Transport{space.canonical(Point{base.coords + s * vec, {}}),
                                           Vec::Ones(vec.size())};
                        },
                        [&](const SpaceSpec::DoubledRectangle& dr) {
                          const CoverPoint P = to_cover(base);
                          const double ux = P.sx * vec[0];
                          const double uy = vec[1];
                          const double ex = P.x + s * ux;
                          const double ey = P.y + s * uy;
                          if (s * std::hypot(ux, uy) > 0.0 && passes_cone_point(dr, P.x, P.y, ex, ey, tol)) {
                            throw DegenerateGeodesicError("doubled rectangle: trajectory from " + describe(base) +
                                                          " hits a cone point");
                          }
                          Transport t;
                          t.end = from_cover(dr, ex, ey, &t.frame);
                          t.frame[0] *= P.sx;
                          return t;
                        },
                        [&](const SpaceSpec::Product& prod) {
                          const auto ps = space.split(base);
                          const auto vs = space.split(vec);
                          std::vector<Point> ends;
                          Vec frame(vec.size());
                          Eigen::Index off = 0;
                          for (std::size_t i = 0; i < ps.size(); ++i) {
                            Transport ft = transport(prod.factors[i], ps[i], vs[i], s, tol);
                            frame.segment(off, ft.frame.size()) = ft.frame;
                            off += ft.frame.size();
                            ends.push_back(std::move(ft.end));
                          }
                          return Transport{space.join(ends), frame};
                        }),
                    space.variant());
}

Point exp_map(const SpaceSpec& space, const Tangent& t, double s) { return transport(space, t.base, t.vec, s).end; }

bool is_cut_pair(const SpaceSpec& space, const Point& p, const Point& q, double tol) {
  return minimizing_geodesics(space, p, q, tol).size() >= 2;
}

}  // namespace umorse
