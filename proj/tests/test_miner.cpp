#include <cmath>
#include <numbers>

#include "doctest.h"

#include "artopen/error.hpp"
#include "artopen/miner.hpp"

using namespace artopen;

namespace {

Heatmap manual(int nx, int ny, std::vector<int> scores, std::vector<double> yaws = {}) {
  Heatmap h;
  h.grid.nx = nx;
  h.grid.ny = ny;
  h.grid.origin = Vec2(-0.1, -0.1);
  h.grid.spacing = 0.1;
  h.scores = std::move(scores);
  h.best_yaw = yaws.empty() ? std::vector<double>(h.scores.size(), 0.0) : std::move(yaws);
  return h;
}

}  // namespace

TEST_SUITE("miner") {
  TEST_CASE("navigation target tie-breaks") {
    SUBCASE("single cell") {
      const auto t = navigation_target(manual(1, 1, {4}));
      CHECK(t.score == 4);
      CHECK(t.ix == 0);
    }
    SUBCASE("score dominates distance") {
      // Cell (1,1) sits on the handle; cell (2,2) is farther but scores higher.
      const auto t = navigation_target(manual(3, 3, {0, 0, 0, 0, 9, 0, 0, 0, 10}));
      CHECK(t.ix == 2);
      CHECK(t.iy == 2);
    }
    SUBCASE("distance then yaw then index") {
      const auto t = navigation_target(manual(3, 3, {10, 0, 0, 0, 0, 0, 0, 0, 10}));
      CHECK(t.ix == 0);  // equidistant: (0,0) wins lexicographically
      const auto u = navigation_target(
          manual(3, 3, {10, 0, 0, 0, 0, 0, 0, 0, 10}, {0.5, 0, 0, 0, 0, 0, 0, 0, 0.1}));
      CHECK(u.ix == 2);  // smaller |yaw|
    }
    SUBCASE("empty heatmap") {
      Heatmap h;
      h.grid.nx = 0;
      CHECK_THROWS_AS(navigation_target(h), Error);
    }
  }

  TEST_CASE("cells beyond reach score zero") {
    const KinematicModel m;
    const auto d = make_drawer(Vec3(1, 0, 0.7), -Vec3::UnitX());
    PlacementGrid g;
    g.origin = Vec2(-3.0, 0.0);
    g.nx = 1;
    g.ny = 1;
    const Heatmap h = mine(d, make_scene(d), m, g);
    CHECK(h.score(0, 0) == 0);
  }

  TEST_CASE("drawer mining is worker-count independent and offset") {
    const KinematicModel m;
    const auto d = make_drawer(Vec3(1, 0, 0.7), -Vec3::UnitX());
    const Scene s = make_scene(d);
    MineOptions one, four;
    four.workers = 4;
    const Heatmap a = mine(d, s, m, {}, one);
    const Heatmap b = mine(d, s, m, {}, four);
    CHECK(a.scores == b.scores);
    CHECK(a.best_yaw == b.best_yaw);
    const auto t = navigation_target(a);
    CHECK(t.score == 10);
    CHECK(std::abs(t.y) > 0.05);  // lateral arm: not dead-centre
    CHECK(mine_max_score(d, s, m) == 10);
  }

  TEST_CASE("enlarging the grid never lowers the max score") {
    const KinematicModel m;
    const auto p = make_hinged(ArticulationType::CabinetRightHinge, Vec3(1, 0, 0.9), -Vec3::UnitX(), 0.45);
    const Scene s = make_scene(p);
    PlacementGrid small;
    small.origin = Vec2(-0.6, -0.3);
    small.nx = 6;
    small.ny = 6;
    PlacementGrid big;
    big.origin = Vec2(-0.8, -0.5);
    big.nx = 12;
    big.ny = 14;
    CHECK(mine(p, s, m, big).max_score() >= mine(p, s, m, small).max_score());
  }

  TEST_CASE("left hinge mirrors right hinge with a mirrored robot") {
    const KinematicModel m;
    const Vec3 h(1, 0, 0.85);
    const auto left = make_hinged(ArticulationType::CabinetLeftHinge, h, -Vec3::UnitX(), 0.35);
    const auto right = make_hinged(ArticulationType::CabinetRightHinge, h, -Vec3::UnitX(), 0.35);
    const Heatmap a = mine(left, make_scene(left), m);
    const Heatmap b = mine(right, make_scene(right), m.mirrored());
    int mismatches = 0;
    for (int iy = 0; iy < a.grid.ny; ++iy)
      for (int ix = 0; ix < a.grid.nx; ++ix)
        if (a.score(ix, iy) != b.score(ix, a.grid.ny - 1 - iy)) ++mismatches;
    CHECK(mismatches == 0);
    CHECK(a.max_score() == 10);
  }

  TEST_CASE("wide cabinet is infeasible everywhere") {
    const KinematicModel m;
    const auto p = make_hinged(ArticulationType::CabinetRightHinge, Vec3(1, 0, 0.9), -Vec3::UnitX(), 0.6);
    ObjectGeometry g;
    g.panel_width = 0.65;
    const Heatmap h = mine(p, make_scene(p, g), m);
    CHECK(h.max_score() < 10);
    CHECK(h.max_score() > 0);
  }

  TEST_CASE("target config reproduces the placement") {
    const KinematicModel m;
    const auto d = make_drawer(Vec3(1, 0.5, 0.7), Vec3(-1, -1, 0).normalized());
    NavigationTarget t;
    t.x = -0.4;
    t.y = 0.2;
    t.yaw = 0.3;
    const RobotConfig c = target_config(d, t, m);
    // Face normal points to -x-y, so the frame looks along (1,1)/sqrt2 and
    // the viewer's left is (-1,1)/sqrt2.
    const double r = 1.0 / std::sqrt(2.0);
    const Vec2 expect = Vec2(1, 0.5) + t.x * Vec2(r, r) + t.y * Vec2(-r, r);
    CHECK((c.base_xy - expect).norm() < 1e-12);
    CHECK(c.base_yaw == doctest::Approx(std::numbers::pi / 4 + 0.3));
    CHECK(c.arm_ext == 0.0);
  }
}
