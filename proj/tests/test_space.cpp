#include "doctest.h"
#include "oracles.hpp"
#include "umorse/error.hpp"
#include "umorse/space.hpp"

using namespace umorse;

namespace {

Vec v2(double x, double y) { return (Vec(2) << x, y).finished(); }

bool near(const Vec& a, const Vec& b, double tol = 1e-12) { return (a - b).norm() <= tol; }

}  // namespace

TEST_CASE("space construction validates parameters") {
  CHECK_THROWS_AS(SpaceSpec::flat_torus({}), ValidationError);
  CHECK_THROWS_AS(SpaceSpec::flat_torus({1.0, -2.0}), ValidationError);
  CHECK_THROWS_AS(SpaceSpec::doubled_rectangle(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(SpaceSpec::product({SpaceSpec::flat_torus({1.0})}), ValidationError);
  const auto prod = SpaceSpec::product({SpaceSpec::flat_torus({1.0, 2.0}), SpaceSpec::doubled_rectangle(2, 1)});
  CHECK(prod.dimension() == 4);
  CHECK(prod.face_count() == 1);
  CHECK_FALSE(prod.flat_periods());
  CHECK(prod.min_scale() == doctest::Approx(1.0));
}

TEST_CASE("points are canonicalized and validated") {
  const auto t = SpaceSpec::flat_torus({1.0, 1.0});
  CHECK(near(t.point(v2(1.25, -0.25)).coords, v2(0.25, 0.75)));
  CHECK_THROWS_AS(t.point(Vec::Zero(3)), ValidationError);
  CHECK_THROWS_AS(t.point(v2(0.1, 0.1), {Face::top}), ValidationError);
  CHECK_THROWS_AS(t.point(v2(std::nan(""), 0.1)), ValidationError);

  const auto d = SpaceSpec::doubled_rectangle(2, 1);
  CHECK_THROWS_AS(d.point(v2(0.5, 0.5)), ValidationError);
  CHECK_THROWS_AS(d.point(v2(2.5, 0.5), {Face::top}), ValidationError);
  // Edge points belong to both faces and are stored on the top face.
  CHECK(d.point(v2(0.0, 0.5), {Face::bottom}).faces[0] == Face::top);
}

TEST_CASE("distance examples") {
  const auto t11 = SpaceSpec::flat_torus({1.0, 1.0});
  CHECK(distance(t11, t11.point(v2(0, 0)), t11.point(v2(0.5, 0))) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(distance(t11, t11.point(v2(0.3, 0.7)), t11.point(v2(0.3, 0.7))) == 0.0);
  const auto t21 = SpaceSpec::flat_torus({2.0, 1.0});
  const double d = distance(t21, t21.point(v2(0, 0)), t21.point(v2(1, 0.5)));
  CHECK(d == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
  CHECK(d == doctest::Approx(oracle::torus_distance({2.0, 1.0}, v2(0, 0), v2(1, 0.5))).epsilon(1e-15));
}

TEST_CASE("flat torus distance matches brute-force lattice search") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> periods;
      for (int i = 0; i < n; ++i) periods.push_back(0.5 + 2.0 * std::uniform_real_distribution<>(0, 1)(rng));
      const auto s = SpaceSpec::flat_torus(periods);
      const Vec p = oracle::uniform_in_box(rng, periods);
      const Vec q = oracle::uniform_in_box(rng, periods);
      CHECK(distance(s, s.point(p), s.point(q)) == doctest::Approx(oracle::torus_distance(periods, p, q)).epsilon(1e-13));
    }
  }
}

TEST_CASE("doubled rectangle distance matches reflection unfolding") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const double a = 0.5 + 2.0 * std::uniform_real_distribution<>(0, 1)(rng);
    const double b = 0.5 + 2.0 * std::uniform_real_distribution<>(0, 1)(rng);
    const auto s = SpaceSpec::doubled_rectangle(a, b);
    const Vec p = oracle::uniform_in_box(rng, {a, b});
    const Vec q = oracle::uniform_in_box(rng, {a, b});
    const Face pf = trial % 2 ? Face::top : Face::bottom;
    const Face qf = trial % 3 ? Face::top : Face::bottom;
    const double expect = oracle::pillow_distance(a, b, p, pf, q, qf);
    CHECK(distance(s, s.point(p, {pf}), s.point(q, {qf})) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("product distance is the Euclidean combination of factor distances") {
  std::mt19937_64 rng(3);
  const auto f1 = SpaceSpec::flat_torus({1.0, 1.5});
  const auto f2 = SpaceSpec::doubled_rectangle(2, 1);
  const auto f3 = SpaceSpec::flat_torus({0.7});
  const auto prod = SpaceSpec::product({f1, f2, f3});
  for (int trial = 0; trial < 100; ++trial) {
    const Vec a1 = oracle::uniform_in_box(rng, {1.0, 1.5}), b1 = oracle::uniform_in_box(rng, {1.0, 1.5});
    const Vec a2 = oracle::uniform_in_box(rng, {2.0, 1.0}), b2 = oracle::uniform_in_box(rng, {2.0, 1.0});
    const Vec a3 = oracle::uniform_in_box(rng, {0.7}), b3 = oracle::uniform_in_box(rng, {0.7});
    Vec pa(5), pb(5);
    pa << a1, a2, a3;
    pb << b1, b2, b3;
    const Face fa = trial % 2 ? Face::top : Face::bottom;
    const double d1 = oracle::torus_distance({1.0, 1.5}, a1, b1);
    const double d2 = oracle::pillow_distance(2, 1, a2, fa, b2, Face::top);
    const double d3 = oracle::torus_distance({0.7}, a3, b3);
    CHECK(distance(prod, prod.point(pa, {fa}), prod.point(pb, {Face::top})) ==
          doctest::Approx(std::sqrt(d1 * d1 + d2 * d2 + d3 * d3)).epsilon(1e-13));
  }
}

TEST_CASE("distance is a metric on sampled points") {
  std::mt19937_64 rng(5);
  const std::vector<SpaceSpec> spaces = {SpaceSpec::flat_torus({1.0, 2.0, 0.5}), SpaceSpec::doubled_rectangle(1.5, 1.0),
                                         SpaceSpec::product({SpaceSpec::doubled_rectangle(1, 1), SpaceSpec::flat_torus({1.0})})};
  for (const auto& s : spaces) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<Point> pts;
      for (int j = 0; j < 3; ++j) {
        Vec c(s.dimension());
        for (int i = 0; i < s.dimension(); ++i) c(i) = std::uniform_real_distribution<>(0, 1)(rng);
        std::vector<Face> faces(static_cast<std::size_t>(s.face_count()), (trial + j) % 2 ? Face::top : Face::bottom);
        pts.push_back(s.point(c, faces));
      }
      const double ab = distance(s, pts[0], pts[1]);
      CHECK(ab == doctest::Approx(distance(s, pts[1], pts[0])).epsilon(1e-14));
      CHECK(ab <= distance(s, pts[0], pts[2]) + distance(s, pts[2], pts[1]) + 1e-12);
      CHECK(distance(s, pts[0], pts[0]) == 0.0);
    }
  }
}

TEST_CASE("minimizing geodesic examples") {
  const auto t = SpaceSpec::flat_torus({1.0, 1.0});
  const auto four = minimizing_geodesics(t, t.point(v2(0, 0)), t.point(v2(0.5, 0.5)));
  REQUIRE(four.size() == 4);
  for (const auto& g : four) {
    CHECK(g.length == doctest::Approx(std::sqrt(0.5)));
    CHECK(std::abs(std::abs(g.v0(0) * g.length) - 0.5) < 1e-12);
    CHECK(std::abs(std::abs(g.v0(1) * g.length) - 0.5) < 1e-12);
  }
  const auto one = minimizing_geodesics(t, t.point(v2(0, 0)), t.point(v2(0.2, 0.1)));
  REQUIRE(one.size() == 1);
  CHECK(near(one[0].v0, v2(0.2, 0.1) / v2(0.2, 0.1).norm()));

  const auto d = SpaceSpec::doubled_rectangle(2, 1);
  const auto tied = minimizing_geodesics(d, d.point(v2(1, 0.5), {Face::top}), d.point(v2(1, 0.5), {Face::bottom}));
  REQUIRE(tied.size() >= 2);
  for (const auto& g : tied) CHECK(g.length == doctest::Approx(tied[0].length).epsilon(1e-12));
}

TEST_CASE("minimizing geodesics reach the target and are sorted by lift") {
  std::mt19937_64 rng(17);
  const std::vector<SpaceSpec> spaces = {SpaceSpec::flat_torus({1.0, 2.0}), SpaceSpec::doubled_rectangle(2, 1),
                                         SpaceSpec::product({SpaceSpec::flat_torus({1.0}), SpaceSpec::doubled_rectangle(1, 2)})};
  for (const auto& s : spaces) {
    for (int trial = 0; trial < 100; ++trial) {
      Vec c1(s.dimension()), c2(s.dimension());
      for (int i = 0; i < s.dimension(); ++i) {
        c1(i) = std::uniform_real_distribution<>(0.01, 0.99)(rng);
        c2(i) = std::uniform_real_distribution<>(0.01, 0.99)(rng);
      }
      std::vector<Face> f1(static_cast<std::size_t>(s.face_count()), Face::top);
      std::vector<Face> f2(static_cast<std::size_t>(s.face_count()), trial % 2 ? Face::top : Face::bottom);
      const Point p = s.point(c1, f1), q = s.point(c2, f2);
      const double dpq = distance(s, p, q);
      const auto gs = minimizing_geodesics(s, p, q);
      REQUIRE(!gs.empty());
      for (std::size_t j = 0; j < gs.size(); ++j) {
        CHECK(gs[j].length == doctest::Approx(dpq).epsilon(1e-12));
        CHECK(gs[j].v0.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(gs[j].v1.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(distance(s, exp_map(s, {p, gs[j].v0}, gs[j].length), q) < 1e-9);
        CHECK(distance(s, exp_map(s, {q, -gs[j].v1}, gs[j].length), p) < 1e-9);
        if (j > 0) CHECK(gs[j - 1].lift < gs[j].lift);
      }
    }
  }
}

TEST_CASE("minimizing geodesics reject coincident points and flag cone points") {
  const auto t = SpaceSpec::flat_torus({1.0, 1.0});
  CHECK_THROWS_AS(minimizing_geodesics(t, t.point(v2(0.1, 0.1)), t.point(v2(1.1, 0.1))), ValidationError);
  const auto d = SpaceSpec::doubled_rectangle(2, 1);
  const Point corner = d.point(v2(0, 0), {Face::top});
  const Point inner = d.point(v2(0.5, 0.5), {Face::top});
  CHECK_THROWS_AS(minimizing_geodesics(d, corner, inner), DegenerateGeodesicError);
  CHECK_FALSE(minimizing_geodesics(d, corner, inner, kTieTol, true).empty());
}

TEST_CASE("transport examples") {
  const auto t = SpaceSpec::flat_torus({1.0, 1.0});
  CHECK(near(transport(t, t.point(v2(0, 0)), v2(1, 0), 0.25).end.coords, v2(0.25, 0)));
  CHECK(near(transport(t, t.point(v2(0.9, 0)), v2(1, 0), 0.2).end.coords, v2(0.1, 0)));
  const auto d = SpaceSpec::doubled_rectangle(2, 1);
  const Transport over = transport(d, d.point(v2(1, 0.9), {Face::top}), v2(0, 1), 0.2);
  CHECK(near(over.end.coords, v2(1, 0.9)));
  CHECK(over.end.faces[0] == Face::bottom);
  // Crossing the top edge reverses the vertical chart direction.
  CHECK(near(over.frame, v2(1, -1)));
  CHECK_THROWS_AS(transport(t, t.point(v2(0, 0)), v2(1, 0), -0.1), ValidationError);
}

TEST_CASE("cut pair examples") {
  const auto t11 = SpaceSpec::flat_torus({1.0, 1.0});
  CHECK(is_cut_pair(t11, t11.point(v2(0, 0)), t11.point(v2(0.5, 0))));
  CHECK_FALSE(is_cut_pair(t11, t11.point(v2(0, 0)), t11.point(v2(0.2, 0))));
  const auto t21 = SpaceSpec::flat_torus({2.0, 1.0});
  CHECK(is_cut_pair(t21, t21.point(v2(0, 0)), t21.point(v2(0.5, 0.5))));
}
