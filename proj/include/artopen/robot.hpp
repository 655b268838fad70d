#pragma once

#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "artopen/box.hpp"
#include "artopen/geometry.hpp"

namespace artopen {

enum class Gripper { Open, Closed };

/// Full configuration of the mobile manipulator. The base translates only
/// between plans; within a plan base_xy stays fixed.
struct RobotConfig {
  Vec2 base_xy = Vec2::Zero();
  double base_yaw = 0.0;
  double lift = 0.6;
  double arm_ext = 0.0;
  double wrist_yaw = 0.0;
  double wrist_pitch = 0.0;
  Gripper gripper = Gripper::Open;

  bool operator==(const RobotConfig&) const = default;
};

struct JointRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v, double tol = 1e-9) const { return v >= lo - tol && v <= hi + tol; }
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
  double mid() const { return 0.5 * (lo + hi); }
};

struct JointLimits {
  JointRange base_yaw{-2.0 * std::numbers::pi, 2.0 * std::numbers::pi};
  JointRange lift{0.10, 1.10};
  JointRange arm_ext{0.0, 0.52};
  JointRange wrist_yaw{-1.75, 4.00};
  JointRange wrist_pitch{-1.57, 0.56};
  /// Pitch is locked at zero unless enabled.
  bool pitch_enabled = false;
};

/// Joints the IK solver may move, in Jacobian column order.
enum class Joint { BaseYaw = 0, Lift = 1, ArmExt = 2, WristYaw = 3, WristPitch = 4 };

/// Geometry of a Stretch-like robot. Base frame: +x forward, +y left, +z up,
/// origin at the base rotation center on the floor. The telescoping arm
/// extends along the base's lateral axis (right by default); at zero wrist
/// yaw the gripper points along the arm.
struct KinematicModel {
  Vec3 mast_offset{-0.10, 0.12, 0.0};
  /// -1: arm extends to the right (-y); +1: to the left.
  double arm_side = -1.0;
  /// Horizontal distance from the mast to the wrist axis at zero extension.
  double arm_base_length = 0.10;
  /// Height of the wrist/fingertip above the lift reading.
  double wrist_height = 0.07;
  double finger_length = 0.22;
  double closure_shrink = 0.02;

  Vec3 chassis_half{0.17, 0.165, 0.125};
  double mast_half_width = 0.05;
  double mast_height = 1.30;
  double arm_half_width = 0.045;
  double arm_half_height = 0.03;
  double gripper_half_width = 0.035;
  double gripper_half_height = 0.04;

  JointLimits limits;

  void validate() const;
  /// Left/right mirror image of this robot.
  KinematicModel mirrored() const;
  double fingertip_length(Gripper g) const {
    return g == Gripper::Open ? finger_length : finger_length - closure_shrink;
  }
};

enum class ResidualMode { PositionYaw, Position };

inline int residual_dim(ResidualMode m) { return m == ResidualMode::PositionYaw ? 4 : 3; }

/// Documented neutral: base at origin facing +x, mid-range lift, arm
/// retracted, wrist straight, gripper open.
RobotConfig neutral_config(const KinematicModel& model);

std::vector<Joint> active_joints(const KinematicModel& model);
inline int active_joint_count(const KinematicModel& model) {
  return model.limits.pitch_enabled ? 5 : 4;
}
double joint_value(const RobotConfig& c, Joint j);
void set_joint(RobotConfig& c, Joint j, double v);
const JointRange& joint_range(const JointLimits& limits, Joint j);

bool within_limits(const RobotConfig& c, const KinematicModel& model);
/// Throws LimitViolation when any joint lies outside its range.
void check_limits(const RobotConfig& c, const KinematicModel& model);

/// Heading of the gripper approach axis about +z.
double gripper_heading(const RobotConfig& c, const KinematicModel& model);
Vec3 wrist_position(const RobotConfig& c, const KinematicModel& model);

/// Fingertip grasp frame in base coordinates: x = approach axis.
Pose fk(const RobotConfig& c, const KinematicModel& model);

/// Partials of [fingertip position; heading] (or position only) with
/// respect to active_joints(model).
using JacobianMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 5>;
JacobianMatrix jacobian(const RobotConfig& c, const KinematicModel& model, ResidualMode mode);

/// Chassis, mast, arm, gripper boxes, in that order.
std::vector<OrientedBox> link_shapes(const RobotConfig& c, const KinematicModel& model);

enum class Link { Chassis = 0, Mast = 1, Arm = 2, Gripper = 3 };

/// Upper bound on the horizontal distance from base origin to fingertip.
double max_horizontal_reach(const KinematicModel& model);

}  // namespace artopen
