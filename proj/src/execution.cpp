#include "artopen/execution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "artopen/error.hpp"

namespace artopen {

namespace {

constexpr double kContactSlack = 1e-9;

Pose planar_pose(double x, double y, double yaw) {
  return {Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ())), Vec3(x, y, 0.0)};
}

RobotConfig closed(RobotConfig c) {
  c.gripper = Gripper::Closed;
  return c;
}

/// Golden-section minimum of f over [lo, hi], endpoints included.
template <typename F>
double golden_min(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double best = 0.5 * (a + b);
  for (double x : {lo, hi})
    if (f(x) < f(best)) best = x;
  return best;
}

void step_joint(RobotConfig& c, Joint j, double step, const KinematicModel& model) {
  const double v = joint_value(c, j) + step;
  if (!joint_range(model.limits, j).contains(v))
    throw Error(ErrorCode::LimitViolation, "contact correction ran into a joint limit");
  set_joint(c, j, v);
}

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

ErrorInjection ErrorDistribution::sample(std::mt19937_64& rng, const Vec3& normal) const {
  auto uniform = [&](double half) {
    return std::uniform_real_distribution<double>(-half, half)(rng);
  };
  ErrorInjection e;
  e.handle_offset = uniform(depth) * normal;
  for (int k = 0; k < 3; ++k) e.handle_offset(k) += uniform(handle(k));
  for (int k = 0; k < 3; ++k) e.base_offset(k) = uniform(base(k));
  return e;
}

Pose base_error_transform(const RobotConfig& base, const Vec3& off) {
  const Pose commanded = planar_pose(base.base_xy.x(), base.base_xy.y(), base.base_yaw);
  const Pose delta = planar_pose(off.x(), off.y(), off.z());
  return commanded * delta.inverse() * commanded.inverse();
}

ArticulationParams believed_params(const ArticulationParams& truth, const ErrorInjection& error) {
  return truth.transformed(Pose::from_translation(error.handle_offset));
}

ArticulationParams with_radius(const ArticulationParams& params, double radius) {
  params.require_axis();
  if (!is_hinged(params.atype)) return params;
  if (!(radius > 0.0)) throw Error(ErrorCode::DegenerateInput, "with_radius: radius must be > 0");
  ArticulationParams out = params;
  const HingeAxis& axis = *params.axis;
  const Vec3 d = params.handle - axis.point;
  const Vec3 foot = axis.point + d.dot(axis.direction) * axis.direction;
  const Vec3 out_dir = foot - params.handle;
  if (out_dir.norm() < 1e-12) throw Error(ErrorCode::DegenerateInput, "with_radius: handle on axis");
  out.axis = HingeAxis{params.handle + radius * out_dir.normalized(), axis.direction};
  out.radius = radius;
  return out;
}

RobotConfig pre_grasp(const MotionPlan& plan) {
  if (plan.configs.empty()) throw Error(ErrorCode::EmptyPlan, "plan has no configurations");
  return plan.configs.front();
}

double surface_depth(const RobotConfig& c, const ArticulationParams& truth,
                     const KinematicModel& model) {
  return truth.normal.dot(truth.handle - fk(c, model).translation);
}

Correction contact_correct(const RobotConfig& pre, const ArticulationParams& believed,
                           const ArticulationParams& truth, const KinematicModel& model,
                           const CorrectionOptions& options) {
  check_limits(pre, model);
  Correction out;
  out.config = pre;
  RobotConfig& c = out.config;

  if (believed.handle_orientation == HandleOrientation::Vertical) {
    while (out.lift_steps < options.max_lift_steps) {
      const double dz = believed.handle.z() - fk(c, model).translation.z();
      if (std::abs(dz) <= 0.5 * options.lift_step) break;
      step_joint(c, Joint::Lift, std::copysign(options.lift_step, dz), model);
      ++out.lift_steps;
    }
  }

  Joint joint = Joint::ArmExt;
  double step = options.extend_step;
  if (believed.atype == ArticulationType::CabinetLeftHinge) {
    joint = Joint::BaseYaw;
    RobotConfig plus = c, minus = c;
    set_joint(plus, joint, joint_value(c, joint) + options.rotate_step);
    set_joint(minus, joint, joint_value(c, joint) - options.rotate_step);
    step = surface_depth(plus, truth, model) >= surface_depth(minus, truth, model)
               ? options.rotate_step
               : -options.rotate_step;
  }

  while (surface_depth(c, truth, model) < -kContactSlack) {
    if (out.steps == options.max_steps)
      throw Error(ErrorCode::NoContact,
                  "no contact after " + std::to_string(options.max_steps) + " increments");
    step_joint(c, joint, step, model);
    ++out.steps;
  }
  out.delta = fk(c, model) * fk(pre, model).inverse();
  return out;
}

MotionPlan update_plan(const MotionPlan& plan, const RobotConfig& corrected, const Pose& delta,
                       const Scene& scene, const KinematicModel& model,
                       const SeqIKOptions& options) {
  if (!delta.translation.allFinite() || !delta.rotation.coeffs().allFinite())
    throw Error(ErrorCode::DegenerateInput, "update_plan: non-finite correction");
  WaypointTrajectory shifted = plan.trajectory;
  for (auto& pose : shifted.poses) pose = delta * pose;

  MotionPlan out;
  out.trajectory = shifted;
  out.configs.push_back(corrected);
  if (shifted.size() > 1) {
    WaypointTrajectory rest;
    rest.poses.assign(shifted.poses.begin() + 1, shifted.poses.end());
    rest.openings.assign(shifted.openings.begin() + 1, shifted.openings.end());
    const MotionPlan tail = seq_ik(corrected, rest, scene, model, options);
    out.configs.insert(out.configs.end(), tail.configs.begin(), tail.configs.end());
    out.total_iterations = tail.total_iterations;
  }
  out.achieved = int(out.configs.size());
  return out;
}

ExecutionResult execute(const MotionPlan& plan, const ArticulationParams& truth,
                        const GraspModel& grasp, const KinematicModel& model) {
  if (plan.configs.empty()) throw Error(ErrorCode::EmptyPlan, "execute: empty plan");
  truth.require_axis();
  ExecutionResult out;

  const Vec3 tip0 = fk(closed(plan.configs.front()), model).translation;
  const Vec3 gap = truth.handle - tip0;
  out.grasped = gap.norm() <= grasp.tolerance && -truth.normal.dot(gap) <= grasp.capture_depth;
  if (!out.grasped) return out;

  const double goal = default_target(truth.atype);
  const double tol = truth.atype == ArticulationType::Drawer ? 1e-5 : 1e-4;
  double phi = 0.0;
  out.openings.push_back(phi);
  out.waypoints_executed = 1;
  for (std::size_t i = 1; i < plan.configs.size(); ++i) {
    const Vec3 tip = fk(closed(plan.configs[i]), model).translation;
    auto dist = [&](double x) { return (tip - handle_at(truth, {x})).norm(); };
    const double next = golden_min(dist, phi, goal, tol);
    if (dist(next) > grasp.tolerance) {
      out.slip_step = int(i);
      break;
    }
    phi = next;
    out.openings.push_back(phi);
    ++out.waypoints_executed;
  }
  out.final_opening = {phi};
  out.success = phi >= success_threshold(truth.atype);
  return out;
}

TrialRecord run_trial(const TrialSetup& s, const ErrorInjection& error) {
  TrialRecord rec;
  rec.error = error;
  try {
    const ArticulationParams believed = believed_params(s.truth, error);
    const RobotConfig theta0 = target_config(believed, s.target, s.model);
    const ArticulationParams truth =
        s.truth.transformed(base_error_transform(theta0, error.base_offset));

    const Scene scene = make_scene(believed, s.geometry, s.obstacles);
    MotionPlan plan =
        seq_ik(theta0, generate_waypoints(believed, s.waypoints), scene, s.model, s.seqik);
    rec.planned = plan.achieved;
    if (plan.configs.empty()) throw Error(ErrorCode::EmptyPlan, "no waypoint decoded");

    Correction corr;
    if (s.contact_correction) {
      corr = contact_correct(pre_grasp(plan), believed, truth, s.model, s.correction);
      const ArticulationParams moved = believed.transformed(corr.delta);
      const Scene corrected_scene = make_scene(moved, s.geometry, s.obstacles);
      plan = s.replan_after_correction
                 ? seq_ik(corr.config, generate_waypoints(moved, s.waypoints), corrected_scene,
                          s.model, s.seqik)
                 : update_plan(plan, corr.config, corr.delta, corrected_scene, s.model, s.seqik);
      if (plan.configs.empty()) throw Error(ErrorCode::EmptyPlan, "replan decoded nothing");
    }
    rec.replanned = plan.achieved;
    rec.result = execute(plan, truth, s.grasp, s.model);
    rec.result.corrections = corr.steps + corr.lift_steps;
    rec.result.delta = corr.delta;
  } catch (const Error& e) {
    rec.failure = std::string(e.name());
  }
  return rec;
}

std::vector<double> default_radius_deltas() {
  std::vector<double> out;
  for (int k = -5; k <= 5; ++k) out.push_back(0.02 * k);
  return out;
}

std::vector<SweepPoint> radius_sweep(const TrialSetup& s, const std::vector<double>& deltas,
                                     const std::optional<PlacementGrid>& remine) {
  s.truth.require_axis();
  if (!is_hinged(s.truth.atype))
    throw Error(ErrorCode::MissingAxis, "radius_sweep needs a hinged object");
  const double r = *s.truth.radius;
  if (!deltas.empty() && !(r + *std::min_element(deltas.begin(), deltas.end()) > 0.05))
    throw Error(ErrorCode::DegenerateInput, "radius_sweep: perturbed radius must stay above 5 cm");

  std::vector<SweepPoint> out;
  for (double dr : deltas) {
    SweepPoint p;
    p.delta_radius = dr;
    p.target = s.target;
    const ArticulationParams planned = with_radius(s.truth, r + dr);
    const Scene scene = make_scene(planned, s.geometry, s.obstacles);
    if (remine) {
      MineOptions mo;
      mo.waypoints = s.waypoints;
      mo.seqik = s.seqik;
      p.target = navigation_target(mine(planned, scene, s.model, *remine, mo));
    }
    const RobotConfig theta0 = target_config(planned, p.target, s.model);
    const MotionPlan plan =
        seq_ik(theta0, generate_waypoints(planned, s.waypoints), scene, s.model, s.seqik);
    p.planned = plan.achieved;
    if (!plan.configs.empty()) p.result = execute(plan, s.truth, s.grasp, s.model);
    out.push_back(p);
  }
  return out;
}

std::vector<int> histogram(const std::vector<TrialRecord>& trials, int n) {
  std::vector<int> h(std::size_t(n) + 1, 0);
  for (const auto& t : trials) h[std::size_t(std::clamp(t.result.waypoints_executed, 0, n))]++;
  return h;
}

Ablation ablate_contact_correction(const std::vector<TrialSetup>& setups,
                                   const ErrorDistribution& errors, int trials,
                                   std::uint64_t seed, int workers) {
  if (trials < 1) throw Error(ErrorCode::BadCount, "ablation needs at least one trial");
  if (setups.empty()) throw Error(ErrorCode::BadCount, "ablation needs at least one scenario");
  Ablation out;
  out.with_correction.trials.resize(std::size_t(trials));
  out.without_correction.trials.resize(std::size_t(trials));

  parallel_for(std::size_t(trials), workers, [&](std::size_t i) {
    TrialSetup setup = setups[i % setups.size()];
    std::seed_seq seq{seed, std::uint64_t(i)};
    std::mt19937_64 rng(seq);
    const ErrorInjection error = errors.sample(rng, setup.truth.normal);
    setup.contact_correction = true;
    out.with_correction.trials[i] = run_trial(setup, error);
    setup.contact_correction = false;
    out.without_correction.trials[i] = run_trial(setup, error);
  });

  int n = 0;
  for (const auto& s : setups) n = std::max(n, s.waypoints);
  for (AblationArm* arm : {&out.with_correction, &out.without_correction}) {
    for (const auto& t : arm->trials) arm->successes += t.result.success ? 1 : 0;
    arm->histogram = histogram(arm->trials, n);
  }
  return out;
}

}  // namespace artopen
