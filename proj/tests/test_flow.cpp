#include "doctest.h"
#include "oracles.hpp"
#include "umorse/error.hpp"
#include "umorse/flow.hpp"
#include "umorse/geodesics.hpp"

using namespace umorse;

namespace {

Vec v2(double x, double y) { return (Vec(2) << x, y).finished(); }

ClosedGeodesic torus_geodesic(const std::vector<double>& periods, std::vector<int> w) {
  const auto s = SpaceSpec::flat_torus(periods);
  Vec base(static_cast<Eigen::Index>(periods.size()));
  for (Eigen::Index i = 0; i < base.size(); ++i) base(i) = 0.1 * static_cast<double>(i + 1);
  return ClosedGeodesic::torus_class(s, s.point(base), std::move(w));
}

std::vector<int> winding(const ClosedGeodesic& g) { return std::get<ClosedGeodesic::TorusClass>(g.descriptor()).winding; }

Configuration perturbed(const ClosedGeodesic& g, int k, double size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto x = sample_configuration(g, k);
  for (auto& p : x.points) p = x.space.point(p.coords + size * oracle::gaussian(rng, x.space.dimension()));
  return x;
}

void check_monotone(const FlowTrace& t) {
  for (std::size_t i = 1; i < t.energies.size(); ++i) CHECK(t.energies[i] <= t.energies[i - 1]);
}

}  // namespace

TEST_CASE("flow parameters are validated") {
  FlowParams p;
  CHECK_NOTHROW(p.validate());
  p.step = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.backtrack = 1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.perturb_eps = -1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  CHECK(p.perturbation(SpaceSpec::flat_torus({2.0, 3.0})) == doctest::Approx(0.1));
}

TEST_CASE("straight configurations are fixed points") {
  const auto x = sample_configuration(torus_geodesic({1, 1}, {1, 0}), 4);
  for (const auto& t : {descend(x), birkhoff_shorten(x)}) {
    CHECK(t.status == FlowStatus::converged);
    CHECK(t.iterations == 0);
    CHECK(t.iterates.size() == 1);
  }
}

TEST_CASE("descent from a perturbed (1,0) configuration returns to class (1,0)") {
  const auto g = torus_geodesic({1, 1}, {1, 0});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(seed);
    auto x = sample_configuration(g, 4);
    for (auto& p : x.points) p = x.space.point(p.coords + 0.05 * (2.0 * oracle::uniform_in_box(rng, {1, 1}) - Vec::Ones(2)));
    const FlowTrace t = descend(x);
    REQUIRE(t.status == FlowStatus::converged);
    check_monotone(t);
    CHECK(has_associated_geodesic(t.final_configuration(), 1e-6).associated);
    CHECK(winding(classify_limit(t.final_configuration(), 1e-6)) == std::vector<int>{1, 0});
  }
}

TEST_CASE("small noise around class (1,2) flows back to class (1,2)") {
  const auto g = torus_geodesic({1, 1}, {1, 2});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = perturbed(g, 6, 0.02, seed);
    const FlowTrace a = descend(x);
    const FlowTrace b = birkhoff_shorten(x);
    REQUIRE(a.status == FlowStatus::converged);
    REQUIRE(b.status == FlowStatus::converged);
    check_monotone(a);
    check_monotone(b);
    CHECK(winding(classify_limit(a.final_configuration(), 1e-6)) == std::vector<int>{1, 2});
    CHECK(winding(classify_limit(b.final_configuration(), 1e-6)) == std::vector<int>{1, 2});
  }
}

TEST_CASE("one midpoint sweep strictly lowers the energy away from critical points") {
  const auto g = torus_geodesic({1, 1.5}, {1, 1});
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const auto x = perturbed(g, 5, 0.03, seed);
    FlowParams p;
    p.max_iters = 1;
    const FlowTrace t = birkhoff_shorten(x, p);
    REQUIRE(t.energies.size() == 2);
    CHECK(t.energies[1] < t.energies[0]);
  }
}

TEST_CASE("trace stride thins iterates but keeps the final one") {
  const auto x = perturbed(torus_geodesic({1, 1}, {1, 0}), 5, 0.05, 3);
  FlowParams p;
  p.stride = 4;
  const FlowTrace t = descend(x, p);
  REQUIRE(t.status == FlowStatus::converged);
  CHECK(t.energies.size() == static_cast<std::size_t>(t.iterations + 1));
  CHECK(t.iterates.size() == static_cast<std::size_t>(t.iterations / 4 + 1 + (t.iterations % 4 != 0)));
  CHECK(uniform_energy(t.final_configuration()) == doctest::Approx(t.energies.back()).epsilon(1e-15));
}

TEST_CASE("max_iters stops the flow") {
  const auto x = perturbed(torus_geodesic({1, 1}, {1, 2}), 7, 0.05, 9);
  FlowParams p;
  p.max_iters = 2;
  const FlowTrace t = descend(x, p);
  CHECK(t.status == FlowStatus::max_iters);
  CHECK(t.iterations == 2);
}

TEST_CASE("restart improves the (1,2) geodesic to minimizing index 2") {
  for (const auto& periods : std::vector<std::vector<double>>{{1, 1}, {1, 2}}) {
    const auto g = torus_geodesic(periods, {1, 2});
    const RestartReport r = restart_step(g);
    CHECK(r.before_minind == 4);
    CHECK(r.outcome == RestartOutcome::restarted);
    REQUIRE(r.after);
    CHECK(winding(*r.after) == std::vector<int>{1, 0});
    CHECK(*r.after_minind == 2);
    REQUIRE(r.direction);
    CHECK(r.direction->magnitude > 0.0);
    check_monotone(r.trace);
    CHECK(r.reconnected_class == std::optional<std::vector<int>>{std::vector<int>{1, 0}});
  }
}

TEST_CASE("restart never raises the minimizing index on flat tori") {
  for (const auto& w : std::vector<std::vector<int>>{{1, 2, 3}, {2, 1, 0}, {1, 3}, {2, 3}, {1, -2}}) {
    const auto g = torus_geodesic(std::vector<double>(w.size(), 1.0), w);
    const RestartReport r = restart_step(g);
    if (r.after_minind) CHECK(*r.after_minind <= r.before_minind);
  }
  const RestartReport r = restart_step(torus_geodesic({1, 1, 1}, {1, 2, 3}));
  REQUIRE(r.after_minind);
  CHECK(*r.after_minind <= 6);
}

TEST_CASE("restarting a minimizing-index-2 geodesic shrinks the reconnected loop") {
  // At k = 2 both segments of the sampled pair are ties; every reconnection is
  // null-homotopic, so the flow collapses it and the geodesic stays the best one.
  const auto g = torus_geodesic({1, 1}, {1, 0});
  const RestartReport r = restart_step(g);
  CHECK(r.before_minind == 2);
  CHECK(r.outcome == RestartOutcome::collapsed);
  const RestartSequence seq = restart_until_stable(g);
  CHECK(seq.final_minind == 2);
  CHECK(winding(seq.final_geodesic) == std::vector<int>{1, 0});
}

TEST_CASE("restart rounds stop once the minimizing index stops improving") {
  const RestartSequence one = restart_until_stable(torus_geodesic({1, 1}, {1, 2}));
  CHECK(one.final_minind == 2);
  const RestartSequence flat = restart_until_stable(torus_geodesic({1, 1}, {1, 1}));
  CHECK(flat.final_minind == 2);
  CHECK(flat.reports.size() == 1);
  const RestartSequence three = restart_until_stable(torus_geodesic({1, 1, 1}, {1, 2, 3}));
  CHECK(three.final_minind <= 4);
  for (const auto& r : three.reports)
    if (r.after_minind) CHECK(*r.after_minind <= r.before_minind);
}

TEST_CASE("restart requires a flat backend") {
  const auto d = SpaceSpec::doubled_rectangle(2, 1);
  const auto g = ClosedGeodesic::segment_loop(d, d.point(v2(0.5, 0.5), {Face::top}), v2(0, 1), 2.0);
  CHECK_THROWS_AS(restart_step(g), ValidationError);
}

TEST_CASE("classify_limit rejects configurations off a closed geodesic") {
  const auto x = perturbed(torus_geodesic({1, 1}, {1, 0}), 4, 0.05, 1);
  CHECK_THROWS_AS(classify_limit(x, 1e-6), NumericalError);
  CHECK(winding(classify_limit(sample_configuration(torus_geodesic({1, 1}, {1, 0}), 4), 1e-9)) == std::vector<int>{1, 0});
}
