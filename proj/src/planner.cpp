#include "artopen/planner.hpp"

#include <cmath>
#include <random>

#include <Eigen/Cholesky>

namespace artopen {

namespace {

bool is_angular(Joint j) {
  return j == Joint::BaseYaw || j == Joint::WristYaw || j == Joint::WristPitch;
}

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;
using Gram = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

struct Residual {
  Vec r;
  double pos = 0.0;
  double yaw = 0.0;
};

Residual residual(const IKTarget& target, const RobotConfig& c, const KinematicModel& model) {
  const Pose tip = fk(c, model);
  Residual out;
  out.r.resize(residual_dim(target.mode()));
  const Vec3 dp = target.position - tip.translation;
  out.r.head<3>() = dp;
  out.pos = dp.norm();
  if (target.yaw) {
    const double e = wrap_angle(*target.yaw - gripper_heading(c, model));
    out.r(3) = e;
    out.yaw = std::abs(e);
  }
  return out;
}

}  // namespace

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

IKTarget ik_target(const Pose& waypoint, ResidualMode mode) {
  IKTarget t;
  t.position = waypoint.translation;
  if (mode == ResidualMode::PositionYaw) {
    const Vec3 approach = waypoint.rotate(Vec3::UnitX());
    t.yaw = std::atan2(approach.y(), approach.x());
  }
  return t;
}

IKResult solve_ik(const IKTarget& target, const RobotConfig& seed, const KinematicModel& model,
                  const IKOptions& options) {
  const auto joints = active_joints(model);
  const ResidualMode mode = target.mode();
  const double lambda2 = options.damping * options.damping;

  IKResult result;
  result.config = seed;
  check_limits(seed, model);

  for (int it = 0;; ++it) {
    const Residual res = residual(target, result.config, model);
    result.residual_pos = res.pos;
    result.residual_yaw = res.yaw;
    result.iterations = it;
    if (res.pos <= options.pos_tol && res.yaw <= options.yaw_tol) {
      result.converged = true;
      return result;
    }
    if (it >= options.max_iterations) return result;

    const JacobianMatrix jac = jacobian(result.config, model, mode);
    Gram jjt = jac * jac.transpose();
    jjt.diagonal().array() += lambda2;
    const Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 5, 1> dq =
        jac.transpose() * jjt.ldlt().solve(res.r);

    for (std::size_t k = 0; k < joints.size(); ++k) {
      const Joint j = joints[k];
      const double cap = is_angular(j) ? options.max_angular_step : options.max_linear_step;
      const double step = std::clamp(dq(Eigen::Index(k)), -cap, cap);
      set_joint(result.config, j,
                joint_range(model.limits, j).clamp(joint_value(result.config, j) + step));
    }
  }
}

SeqIKOptions seqik_options_for(ArticulationType t) {
  SeqIKOptions o;
  o.mode = residual_mode_for(t);
  return o;
}

MotionPlan seq_ik(const RobotConfig& theta0, const WaypointTrajectory& traj, const Scene& scene,
                  const KinematicModel& model, const SeqIKOptions& options) {
  check_limits(theta0, model);
  MotionPlan plan;
  plan.trajectory = traj;
  plan.configs.reserve(traj.size());

  RobotConfig seed = theta0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const IKTarget target = ik_target(traj.poses[i], options.mode);
    const ObjectState state{traj.openings[i]};
    const RobotConfig base_seed = options.warm_start ? seed : theta0;

    IKResult res = solve_ik(target, base_seed, model, options.ik);
    plan.total_iterations += res.iterations;
    bool ok = res.converged && !check_collision(res.config, scene, state, model);

    for (int attempt = 1; !ok && attempt <= options.retries; ++attempt) {
      std::seed_seq seq{options.retry_seed, std::uint64_t(i), std::uint64_t(attempt)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> jitter(-1.0, 1.0);
      RobotConfig reseed = base_seed;
      for (Joint j : active_joints(model)) {
        const double scale = is_angular(j) ? 0.3 : 0.1;
        set_joint(reseed, j,
                  joint_range(model.limits, j).clamp(joint_value(reseed, j) + scale * jitter(rng)));
      }
      res = solve_ik(target, reseed, model, options.ik);
      plan.total_iterations += res.iterations;
      ok = res.converged && !check_collision(res.config, scene, state, model);
    }
    if (!ok) break;

    res.config.base_xy = theta0.base_xy;
    plan.configs.push_back(res.config);
    seed = res.config;
  }
  plan.achieved = int(plan.configs.size());
  return plan;
}

}  // namespace artopen
