#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "artopen/articulation.hpp"
#include "artopen/robot.hpp"
#include "artopen/scene.hpp"

namespace artopen {

struct IKTarget {
  Vec3 position = Vec3::Zero();
  /// Approach heading about +z; absent for position-only targets.
  std::optional<double> yaw;

  ResidualMode mode() const { return yaw ? ResidualMode::PositionYaw : ResidualMode::Position; }
};

IKTarget ik_target(const Pose& waypoint, ResidualMode mode);

struct IKOptions {
  double damping = 0.05;
  double pos_tol = 0.005;
  double yaw_tol = 2.0 * std::numbers::pi / 180.0;
  int max_iterations = 100;
  double max_angular_step = 0.2;
  double max_linear_step = 0.1;
};

struct IKResult {
  RobotConfig config;
  double residual_pos = 0.0;
  double residual_yaw = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Wraps to (-pi, pi]; -pi maps to +pi.
double wrap_angle(double a);

/// Damped least squares with per-joint step clamps; joints are clamped to
/// their limits after every step and base_xy never moves.
IKResult solve_ik(const IKTarget& target, const RobotConfig& seed, const KinematicModel& model,
                  const IKOptions& options = {});

inline ResidualMode residual_mode_for(ArticulationType t) {
  return t == ArticulationType::BottomHinge ? ResidualMode::Position : ResidualMode::PositionYaw;
}

struct SeqIKOptions {
  IKOptions ik;
  ResidualMode mode = ResidualMode::PositionYaw;
  /// Jittered reseeds after a rejected waypoint.
  int retries = 0;
  std::uint64_t retry_seed = 0;
  /// When false, every waypoint is seeded from theta0 instead of the previous solution.
  bool warm_start = true;
};

SeqIKOptions seqik_options_for(ArticulationType t);

struct MotionPlan {
  std::vector<RobotConfig> configs;
  int achieved = 0;
  WaypointTrajectory trajectory;
  int total_iterations = 0;

  bool complete() const { return achieved == int(trajectory.size()); }
};

/// Decodes the waypoint trajectory into configurations, one IK call per
/// waypoint, each seeded from the previous solution. Stops at the first
/// waypoint that does not converge or collides.
MotionPlan seq_ik(const RobotConfig& theta0, const WaypointTrajectory& traj, const Scene& scene,
                  const KinematicModel& model, const SeqIKOptions& options = {});

}  // namespace artopen
