#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>

#include "doctest.h"

#include "artopen/error.hpp"
#include "artopen/io.hpp"
#include "artopen/synthetic.hpp"

using namespace artopen;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("artopen_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

bool same(const ArticulationParams& a, const ArticulationParams& b) {
  bool ok = a.atype == b.atype && (a.handle - b.handle).norm() < 1e-12 &&
            (a.normal - b.normal).norm() < 1e-12 && a.handle_orientation == b.handle_orientation &&
            a.axis.has_value() == b.axis.has_value() && a.radius.has_value() == b.radius.has_value();
  if (ok && a.axis) ok = (a.axis->point - b.axis->point).norm() < 1e-12 &&
                         (a.axis->direction - b.axis->direction).norm() < 1e-12;
  if (ok && a.radius) ok = std::abs(*a.radius - *b.radius) < 1e-12;
  return ok;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("depth and mask PGM round trip") {
    const fs::path dir = scratch_dir("pgm");
    DepthImage d(7, 5);
    for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] = std::uint16_t(i * 977 % 65536);
    d.data[3] = 65535;
    write_depth_pgm(dir / "d.pgm", d);
    const DepthImage r = read_depth_pgm(dir / "d.pgm");
    CHECK(r.width == 7);
    CHECK(r.data == d.data);
    // Big-endian samples per the PGM format.
    std::ifstream raw(dir / "d.pgm", std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(raw)), {});
    CHECK(bytes.substr(0, 2) == "P5");
    const std::size_t body = bytes.size() - d.data.size() * 2;
    CHECK(std::uint8_t(bytes[body + 6]) == 0xFF);
    CHECK(std::uint8_t(bytes[body + 7]) == 0xFF);

    Mask2D m(4, 3);
    m.set(1, 1);
    m.set(3, 2);
    write_mask_pgm(dir / "m.pgm", m);
    const Mask2D rm = read_mask_pgm(dir / "m.pgm");
    CHECK(rm.count() == 2);
    CHECK(rm.at(3, 2));
  }

  TEST_CASE("bad rasters") {
    const fs::path dir = scratch_dir("bad");
    CHECK(code_of([&] { read_depth_pgm(dir / "missing.pgm"); }) == ErrorCode::Io);
    write_text(dir / "t.pgm", "P2\n2 2\n255\n0 0 0 0\n");
    CHECK(code_of([&] { read_depth_pgm(dir / "t.pgm"); }) == ErrorCode::Parse);
    write_text(dir / "short.pgm", std::string("P5\n4 4\n65535\n") + std::string(6, '\0'));
    CHECK(code_of([&] { read_depth_pgm(dir / "short.pgm"); }) == ErrorCode::Parse);
  }

  TEST_CASE("params JSON round trip") {
    const Vec3 n = Vec3(-1, 0.3, 0).normalized();
    for (const auto& p : {make_drawer(Vec3(1, 0, 0.7), n, HandleOrientation::Vertical),
                          make_hinged(ArticulationType::CabinetLeftHinge, Vec3(1, 0.2, 0.9), n, 0.35),
                          make_hinged(ArticulationType::CabinetRightHinge, Vec3(1, 0.2, 0.9), n, 0.45),
                          make_hinged(ArticulationType::BottomHinge, Vec3(1, 0.2, 0.9), n, 0.2)}) {
      const Json j = to_json(p);
      CHECK(same(params_from_json(j), p));
      CHECK(same(params_from_json(Json::parse(j.dump())), p));
    }
  }

  TEST_CASE("schema validation") {
    Json j = to_json(make_drawer(Vec3(1, 0, 0.7), -Vec3::UnitX()));
    j["colour"] = "red";
    CHECK(code_of([&] { params_from_json(j); }) == ErrorCode::Schema);
    Json h = {{"type", "left_hinge"}, {"handle", {1, 0, 1}}, {"normal", {-1, 0, 0}}};
    CHECK(code_of([&] { params_from_json(h); }) == ErrorCode::Schema);
    h["radius"] = -0.2;
    CHECK(code_of([&] { params_from_json(h); }) == ErrorCode::Schema);
    h["radius"] = 0.3;
    h["type"] = "window";
    CHECK(code_of([&] { params_from_json(h); }) == ErrorCode::Schema);
    CHECK(code_of([&] { parse_json("{ nope", "x"); }) == ErrorCode::Parse);
    const Json sc = {{"name", "x"}, {"experiment", {{"trails", 3}}}};
    CHECK(code_of([&] { scenario_from_json(sc); }) == ErrorCode::Schema);
  }

  TEST_CASE("camera and navigation round trips") {
    CameraModel c;
    c.fx = 612.5;
    c.cy = 250;
    c.pose_in_base = look_at(Vec3(0.1, 0.2, 1.3), Vec3(1.5, 0, 0.9));
    const CameraModel r = camera_from_json(Json::parse(to_json(c).dump()));
    CHECK(r.fx == c.fx);
    CHECK(r.cy == c.cy);
    CHECK((r.pose_in_base.translation - c.pose_in_base.translation).norm() < 1e-12);
    CHECK(r.pose_in_base.rotation.angularDistance(c.pose_in_base.rotation) < 1e-12);

    const Json la = {{"fx", 500}, {"fy", 500}, {"cx", 320}, {"cy", 240}, {"width", 640}, {"height", 480},
                     {"look_at", {{"eye", {0, 0, 1}}, {"target", {1, 0, 1}}}}};
    const CameraModel l = camera_from_json(la);
    CHECK(l.pose_in_base.rotate(Vec3::UnitZ()).isApprox(Vec3::UnitX(), 1e-12));

    NavigationTarget t{-0.35, 0.15, 0.7853981633974483, 17, 23, 10};
    const NavigationTarget u = target_from_json(Json::parse(to_json(t).dump()));
    CHECK(u.x == t.x);
    CHECK(u.yaw == doctest::Approx(t.yaw).epsilon(1e-15));
    CHECK(u.ix == 17);
    CHECK(u.score == 10);
  }

  TEST_CASE("execution result round trip in file units") {
    ExecutionResult r;
    r.grasped = true;
    r.corrections = 2;
    r.waypoints_executed = 7;
    r.final_opening.opening = 1.2;
    r.success = true;
    r.slip_step = 7;
    r.openings = {0.0, 0.2, 1.2};
    const Json j = to_json(r, ArticulationType::CabinetRightHinge);
    CHECK(j["final_opening"].get<double>() == doctest::Approx(1.2 * 180 / std::numbers::pi));
    const ExecutionResult b =
        execution_result_from_json(Json::parse(j.dump()), ArticulationType::CabinetRightHinge);
    CHECK(b.final_opening.opening == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(b.slip_step == r.slip_step);
    CHECK(b.waypoints_executed == 7);
    CHECK(b.openings.size() == 3);
  }

  TEST_CASE("CSV round trips") {
    MotionPlan p;
    RobotConfig a;
    a.base_xy = Vec2(0.25, -0.125);
    a.base_yaw = 0.3;
    a.lift = 0.812345678;
    a.arm_ext = 0.1;
    a.wrist_yaw = -0.4;
    RobotConfig b = a;
    b.gripper = Gripper::Closed;
    p.configs = {a, b};
    p.achieved = 2;
    const std::string csv = plan_csv(p);
    CHECK(csv.rfind("base_x,base_y,base_yaw,lift,arm_ext,wrist_yaw,wrist_pitch,gripper\n", 0) == 0);
    const auto back = read_plan_csv(csv);
    REQUIRE(back.size() == 2);
    CHECK(back[1].gripper == Gripper::Closed);
    CHECK(back[0].base_yaw == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(back[0].lift == doctest::Approx(0.812345678).epsilon(1e-9));
    CHECK(plan_csv(MotionPlan{back, 2, {}, 0}) == csv);

    Heatmap h;
    h.grid.nx = 3;
    h.grid.ny = 2;
    h.scores = {0, 3, 10, 10, 2, 0};
    h.best_yaw = {0, 0.785398163, -1.57079633, 3.14159265, 0, 0};
    const std::string hc = heatmap_csv(h);
    const Heatmap hb = read_heatmap_csv(hc, 10);
    CHECK(hb.scores == h.scores);
    CHECK(heatmap_csv(hb) == hc);

    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
  }

  TEST_CASE("scenario files load") {
    for (const auto& entry : fs::directory_iterator(ARTOPEN_SCENARIOS)) {
      CAPTURE(entry.path().string());
      const Scenario s = load_scenario(entry.path());
      CHECK(s.object.has_value());
      CHECK_FALSE(s.name.empty());
    }
    const Scenario oven = load_scenario(fs::path(ARTOPEN_SCENARIOS) / "oven.json");
    CHECK(oven.model.limits.pitch_enabled);
    CHECK(oven.obstacles.size() == 1);
    CHECK(oven.seqik().mode == ResidualMode::Position);
    CHECK_FALSE(oven.geometry.floor_standing);
  }

  TEST_CASE("hashing") {
    // FIPS 180-2 test vector.
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const fs::path dir = scratch_dir("hash");
    write_text(dir / "a", "hello");
    write_text(dir / "b", "world");
    const std::string h0 = hash_inputs({dir / "a", dir / "b"});
    CHECK(hash_inputs({dir / "a", dir / "b"}) == h0);
    write_text(dir / "b", "worle");
    CHECK(hash_inputs({dir / "a", dir / "b"}) != h0);
    // Length prefixes keep boundaries significant.
    write_text(dir / "a", "hellow");
    write_text(dir / "b", "orld");
    CHECK(hash_inputs({dir / "a", dir / "b"}) != h0);
  }

  TEST_CASE("manifest timestamp honours SOURCE_DATE_EPOCH") {
    ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
    CHECK(manifest_timestamp() == "1970-01-02T00:00:00Z");
    ::unsetenv("SOURCE_DATE_EPOCH");
    CHECK(manifest_timestamp().size() == 20);
  }
}
