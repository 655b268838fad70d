// Command-line front end. Exit codes: 0 ok, 1 I/O or parse, 2 precondition, 3 infeasible.
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>

#include "CLI11.hpp"

#include "artopen/error.hpp"
#include "artopen/io.hpp"
#include "artopen/synthetic.hpp"

using namespace artopen;

namespace {

constexpr int kInfeasible = 3;

struct Options {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<int> retries;
  bool replan = false;
  bool robust_plane = false;
  std::optional<int> workers;
  std::optional<int> trials;
  // perceive / render
  std::string detection, depth, mask, camera;
  double noise = 0.0;
  double distance = 1.5;
};

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::Io:
    case ErrorCode::Parse:
    case ErrorCode::Schema:
      return 1;
    default:
      return 2;
  }
}

void report_error(const std::string& name, const std::string& message, int code) {
  const Json j = {{"error", name}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << "\n";
}

/// Collects outputs and inputs of one command and writes the manifest.
class Run {
 public:
  Run(std::string command, const Options& opts) : command_(std::move(command)), opts_(opts) {
    std::error_code ec;
    fs::create_directories(opts.out, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + opts.out + "'");
  }

  void input(const fs::path& p) { inputs_.push_back(p); }
  fs::path output(const std::string& name) {
    outputs_.push_back(name);
    return fs::path(opts_.out) / name;
  }
  void text(const std::string& name, const std::string& body) { write_text(output(name), body); }
  void json(const std::string& name, const Json& j) { text(name, j.dump(2) + "\n"); }

  void finish(std::uint64_t seed) {
    RunManifest m;
    m.version = kVersion;
    m.command = command_;
    m.input_hash = hash_inputs(inputs_);
    m.seed = seed;
    m.timestamp = manifest_timestamp();
    m.outputs = outputs_;
    write_text(fs::path(opts_.out) / "manifest.json", to_json(m).dump(2) + "\n");
  }

 private:
  std::string command_;
  const Options& opts_;
  std::vector<fs::path> inputs_;
  std::vector<std::string> outputs_;
};

Scenario load(const Options& o, Run& run) {
  run.input(o.scenario);
  Scenario s = load_scenario(o.scenario);
  Experiment& e = s.experiment;
  if (o.seed) e.seed = *o.seed;
  if (o.retries) e.retries = *o.retries;
  if (o.replan) e.replan_after_correction = true;
  if (o.workers) e.workers = *o.workers;
  if (o.trials) e.trials = *o.trials;
  if (e.retries < 0) throw Error(ErrorCode::Schema, "--retries must be >= 0");
  if (e.trials < 1) throw Error(ErrorCode::Schema, "--trials must be >= 1");
  return s;
}

MineOptions mine_options(const Scenario& s) {
  MineOptions mo;
  mo.waypoints = s.experiment.waypoints;
  mo.seqik = s.seqik();
  mo.workers = s.experiment.workers;
  return mo;
}

Scene scene_of(const Scenario& s) {
  return make_scene(s.require_object(), s.geometry, s.obstacles);
}

/// Cached navigation target from the scenario, else mined on the spot.
NavigationTarget navigation(const Scenario& s) {
  if (s.experiment.navigation) return *s.experiment.navigation;
  return navigation_target(
      mine(s.require_object(), scene_of(s), s.model, s.experiment.grid, mine_options(s)));
}

TrialSetup setup_of(const Scenario& s) {
  TrialSetup t;
  t.truth = s.require_object();
  t.geometry = s.geometry;
  t.obstacles = s.obstacles;
  t.model = s.model;
  t.target = navigation(s);
  t.seqik = s.seqik();
  t.waypoints = s.experiment.waypoints;
  t.grasp = s.experiment.grasp;
  t.contact_correction = s.experiment.contact_correction;
  t.replan_after_correction = s.experiment.replan_after_correction;
  return t;
}

double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

int cmd_render(const Options& o) {
  Run run("render", o);
  const Scenario s = load(o, run);
  const ArticulationParams& truth = s.require_object();
  const CameraModel cam = s.detection && s.detection->camera ? *s.detection->camera
                                                             : frontal_camera(truth, o.distance);
  if (o.noise < 0.0) throw Error(ErrorCode::Schema, "--noise must be >= 0");
  const RenderedFace face = render_face(truth, s.geometry, cam, o.noise, s.experiment.seed);
  write_depth_pgm(run.output("depth.pgm"), face.depth);
  write_mask_pgm(run.output("mask.pgm"), face.detection.mask);
  run.json("camera.json", to_json(cam));
  run.json("detection.json",
           {{"depth", "depth.pgm"},
            {"mask", "mask.pgm"},
            {"camera", "camera.json"},
            {"handle_px", {face.detection.handle_px.x(), face.detection.handle_px.y()}},
            {"type", std::string(to_string(truth.atype))},
            {"handle_orientation", std::string(to_string(truth.handle_orientation))},
            {"score", 1.0}});
  run.finish(s.experiment.seed);
  std::printf("render: %zu mask pixels\n", face.detection.mask.count());
  return 0;
}

int cmd_perceive(const Options& o) {
  Run run("perceive", o);
  const Scenario s = load(o, run);
  DetectionRefs refs;
  if (!o.detection.empty()) {
    run.input(o.detection);
    const fs::path p(o.detection);
    refs = detection_from_json(parse_json(read_text(p), o.detection),
                               p.parent_path().empty() ? fs::path(".") : p.parent_path());
  } else if (s.detection) {
    refs = *s.detection;
  }
  if (!o.depth.empty()) refs.depth = o.depth;
  if (!o.mask.empty()) refs.mask = o.mask;
  if (!o.camera.empty()) {
    run.input(o.camera);
    refs.camera = camera_from_json(parse_json(read_text(o.camera), o.camera));
  }
  if (!refs.depth || !refs.mask || !refs.camera || !refs.handle_px)
    throw Error(ErrorCode::Schema, "perceive needs depth, mask, camera and handle_px");

  run.input(*refs.depth);
  run.input(*refs.mask);
  Detection2D det;
  det.mask = read_mask_pgm(*refs.mask);
  const DepthImage depth = read_depth_pgm(*refs.depth);
  det.handle_px = *refs.handle_px;
  det.score = refs.score;
  if (refs.atype) det.atype = *refs.atype;
  else if (s.object) det.atype = s.object->atype;
  else throw Error(ErrorCode::Schema, "perceive: detection type missing");
  det.handle_orientation = refs.handle_orientation.value_or(
      s.object ? s.object->handle_orientation : HandleOrientation::Horizontal);

  LiftOptions lo;
  lo.robust_plane = o.robust_plane;
  const LiftResult lift = lift_detection_full(det, depth, *refs.camera, lo);
  if (lift.handle_outside_mask)
    std::cerr << "warning: handle keypoint lies outside the mask\n";

  Json corners = Json::array();
  for (const auto& c : lift.corners) corners.push_back({c.x(), c.y(), c.z()});
  Json out = {{"params", to_json(lift.params)},
              {"diagnostics",
               {{"bbox_fallback", lift.bbox_fallback},
                {"handle_outside_mask", lift.handle_outside_mask},
                {"corners", corners}}}};
  if (s.object) {
    const ArticulationParams& t = *s.object;
    Json m = {{"handle_error_m", (lift.params.handle - t.handle).norm()},
              {"normal_error_deg",
               degrees(std::acos(std::clamp(lift.params.normal.dot(t.normal), -1.0, 1.0)))}};
    if (lift.params.radius && t.radius) m["radius_error_m"] = std::abs(*lift.params.radius - *t.radius);
    out["metrics"] = m;
  }
  run.json("params.json", out);
  run.finish(s.experiment.seed);
  std::printf("perceive: %s", std::string(to_string(det.atype)).c_str());
  if (lift.params.radius) std::printf(" radius %.4f m", *lift.params.radius);
  std::printf("\n");
  return 0;
}

int cmd_plan(const Options& o) {
  Run run("plan", o);
  const Scenario s = load(o, run);
  const ArticulationParams& truth = s.require_object();
  const NavigationTarget target = navigation(s);
  const RobotConfig theta0 = target_config(truth, target, s.model);
  const MotionPlan plan = seq_ik(theta0, generate_waypoints(truth, s.experiment.waypoints),
                                 scene_of(s), s.model, s.seqik());
  run.text("plan.csv", plan_csv(plan));
  run.json("target.json", to_json(target));
  run.finish(s.experiment.seed);
  std::printf("plan: %d/%zu waypoints\n", plan.achieved, plan.trajectory.size());
  return plan.complete() ? 0 : kInfeasible;
}

int cmd_mine(const Options& o) {
  Run run("mine", o);
  const Scenario s = load(o, run);
  const Heatmap hm = mine(s.require_object(), scene_of(s), s.model, s.experiment.grid, mine_options(s));
  const NavigationTarget target = navigation_target(hm);
  run.text("heatmap.csv", heatmap_csv(hm));
  write_heatmap_pgm(run.output("heatmap.pgm"), hm);
  run.json("target.json", to_json(target));
  run.finish(s.experiment.seed);
  std::printf("mine: max score %d/%d at (%.2f, %.2f, %.1f deg)\n", target.score, hm.waypoints,
              target.x, target.y, degrees(target.yaw));
  return target.score == hm.waypoints ? 0 : kInfeasible;
}

int cmd_simulate(const Options& o) {
  Run run("simulate", o);
  const Scenario s = load(o, run);
  const TrialSetup setup = setup_of(s);
  ErrorInjection error = s.experiment.injection;
  std::seed_seq seq{s.experiment.seed, std::uint64_t(0)};
  std::mt19937_64 rng(seq);
  const ErrorInjection sampled = s.experiment.errors.sample(rng, setup.truth.normal);
  error.handle_offset += sampled.handle_offset;
  error.base_offset += sampled.base_offset;

  const TrialRecord rec = run_trial(setup, error);
  run.json("result.json", {{"scenario", s.name},
                           {"type", std::string(to_string(setup.truth.atype))},
                           {"seed", s.experiment.seed},
                           {"target", to_json(setup.target)},
                           {"contact_correction", setup.contact_correction},
                           {"replan_after_correction", setup.replan_after_correction},
                           {"trial", to_json(rec, setup.truth.atype)}});
  run.finish(s.experiment.seed);
  std::printf("simulate: %s, executed %d, final opening %.3f%s\n",
              rec.result.success ? "success" : "failure", rec.result.waypoints_executed,
              is_hinged(setup.truth.atype) ? degrees(rec.result.final_opening.opening)
                                           : rec.result.final_opening.opening,
              is_hinged(setup.truth.atype) ? " deg" : " m");
  return rec.planned == 0 ? kInfeasible : 0;
}

int cmd_sweep(const Options& o) {
  Run run("sweep-radius", o);
  const Scenario s = load(o, run);
  const TrialSetup setup = setup_of(s);
  const auto sweep =
      radius_sweep(setup, s.experiment.radius_deltas,
                   s.experiment.remine ? std::optional<PlacementGrid>(s.experiment.grid)
                                       : std::nullopt);
  run.text("sweep.csv", sweep_csv(sweep, setup.truth.atype));
  run.finish(s.experiment.seed);
  for (const auto& p : sweep)
    std::printf("sweep: dr %+.2f -> %.1f deg\n", p.delta_radius,
                degrees(p.result.final_opening.opening));
  return 0;
}

int cmd_ablate(const Options& o) {
  Run run("ablate", o);
  const Scenario s = load(o, run);
  const TrialSetup setup = setup_of(s);
  const Ablation a = ablate_contact_correction({setup}, s.experiment.errors, s.experiment.trials,
                                               s.experiment.seed, s.experiment.workers);
  run.json("ablation.json", to_json(a, setup.truth.atype, s.experiment.seed));
  run.text("histogram.csv", histogram_csv(a));
  run.finish(s.experiment.seed);
  std::printf("ablate: with %.3f, without %.3f over %d trials\n", a.with_correction.rate(),
              a.without_correction.rate(), s.experiment.trials);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Articulated-object opening planner and simulator"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
    sub->add_option("--seed", o.seed, "Override the experiment seed");
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_option("--retries", o.retries, "Jittered IK reseeds per rejected waypoint");
    sub->add_flag("--replan-after-correction", o.replan,
                  "Regenerate waypoints after contact correction instead of shifting them");
    sub->add_flag("--robust-plane-fit", o.robust_plane, "Refit the face plane without outliers");
    sub->add_option("--workers", o.workers, "Worker threads for mining and ablation");
    return sub;
  };

  std::function<int()> action;
  auto bind = [&](CLI::App* sub, int (*fn)(const Options&)) {
    sub->callback([&action, fn, &o] { action = [fn, &o] { return fn(o); }; });
  };

  auto* render = common(app.add_subcommand("render", "Render a synthetic depth/mask fixture"));
  render->add_option("--noise", o.noise, "Depth noise sigma in meters");
  render->add_option("--distance", o.distance, "Camera distance from the face in meters");
  bind(render, cmd_render);

  auto* perceive = common(app.add_subcommand("perceive", "Lift a detection to articulation parameters"));
  perceive->add_option("--detection", o.detection, "Detection JSON (paths relative to it)");
  perceive->add_option("--depth", o.depth, "Depth PGM (16-bit, mm)");
  perceive->add_option("--mask", o.mask, "Mask PGM (8-bit)");
  perceive->add_option("--camera", o.camera, "Camera JSON");
  bind(perceive, cmd_perceive);

  bind(common(app.add_subcommand("plan", "Decode a motion plan at the navigation target")), cmd_plan);
  bind(common(app.add_subcommand("mine", "Mine base placements into a heatmap")), cmd_mine);
  bind(common(app.add_subcommand("simulate", "Simulate one trial")), cmd_simulate);
  bind(common(app.add_subcommand("sweep-radius", "Radius robustness sweep")), cmd_sweep);
  auto* ablate = common(app.add_subcommand("ablate", "Contact-correction ablation"));
  ablate->add_option("--trials", o.trials, "Number of paired trials");
  bind(ablate, cmd_ablate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("Usage", e.what(), 1);
    return 1;
  }

  try {
    return action();
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    report_error(std::string(e.name()), e.what(), code);
    return code;
  } catch (const fs::filesystem_error& e) {
    report_error("Io", e.what(), 1);
    return 1;
  } catch (const std::exception& e) {
    report_error("Internal", e.what(), 2);
    return 2;
  }
}
