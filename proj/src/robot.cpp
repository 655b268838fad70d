#include "artopen/robot.hpp"

#include <cmath>
#include <string>

#include "artopen/error.hpp"

namespace artopen {

namespace {

Vec3 base_origin(const RobotConfig& c) { return {c.base_xy.x(), c.base_xy.y(), 0.0}; }

Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

Vec3 approach_axis(double heading, double pitch) {
  return {std::cos(heading) * std::cos(pitch), std::sin(heading) * std::cos(pitch), -std::sin(pitch)};
}

}  // namespace

void KinematicModel::validate() const {
  if (!(finger_length > closure_shrink && closure_shrink > 0.0))
    throw Error(ErrorCode::Schema, "robot: need finger_length > closure_shrink > 0");
  for (const JointRange* r : {&limits.base_yaw, &limits.lift, &limits.arm_ext, &limits.wrist_yaw,
                              &limits.wrist_pitch})
    if (!(r->lo < r->hi)) throw Error(ErrorCode::Schema, "robot: joint limit with lo >= hi");
}

KinematicModel KinematicModel::mirrored() const {
  KinematicModel m = *this;
  m.mast_offset.y() = -mast_offset.y();
  m.arm_side = -arm_side;
  m.limits.wrist_yaw = {-limits.wrist_yaw.hi, -limits.wrist_yaw.lo};
  return m;
}

RobotConfig neutral_config(const KinematicModel& model) {
  RobotConfig c;
  c.lift = model.limits.lift.mid();
  c.arm_ext = model.limits.arm_ext.lo;
  c.wrist_yaw = 0.0;
  c.wrist_pitch = 0.0;
  return c;
}

std::vector<Joint> active_joints(const KinematicModel& model) {
  std::vector<Joint> j{Joint::BaseYaw, Joint::Lift, Joint::ArmExt, Joint::WristYaw};
  if (model.limits.pitch_enabled) j.push_back(Joint::WristPitch);
  return j;
}

double joint_value(const RobotConfig& c, Joint j) {
  switch (j) {
    case Joint::BaseYaw: return c.base_yaw;
    case Joint::Lift: return c.lift;
    case Joint::ArmExt: return c.arm_ext;
    case Joint::WristYaw: return c.wrist_yaw;
    case Joint::WristPitch: return c.wrist_pitch;
  }
  return 0.0;
}

void set_joint(RobotConfig& c, Joint j, double v) {
  switch (j) {
    case Joint::BaseYaw: c.base_yaw = v; break;
    case Joint::Lift: c.lift = v; break;
    case Joint::ArmExt: c.arm_ext = v; break;
    case Joint::WristYaw: c.wrist_yaw = v; break;
    case Joint::WristPitch: c.wrist_pitch = v; break;
  }
}

const JointRange& joint_range(const JointLimits& limits, Joint j) {
  switch (j) {
    case Joint::BaseYaw: return limits.base_yaw;
    case Joint::Lift: return limits.lift;
    case Joint::ArmExt: return limits.arm_ext;
    case Joint::WristYaw: return limits.wrist_yaw;
    case Joint::WristPitch: return limits.wrist_pitch;
  }
  return limits.lift;
}

bool within_limits(const RobotConfig& c, const KinematicModel& model) {
  const auto& l = model.limits;
  if (!l.base_yaw.contains(c.base_yaw) || !l.lift.contains(c.lift) ||
      !l.arm_ext.contains(c.arm_ext) || !l.wrist_yaw.contains(c.wrist_yaw))
    return false;
  if (l.pitch_enabled) return l.wrist_pitch.contains(c.wrist_pitch);
  return std::abs(c.wrist_pitch) <= 1e-12;
}

void check_limits(const RobotConfig& c, const KinematicModel& model) {
  if (!within_limits(c, model))
    throw Error(ErrorCode::LimitViolation, "robot configuration outside joint limits");
}

double gripper_heading(const RobotConfig& c, const KinematicModel& model) {
  return c.base_yaw + c.wrist_yaw + model.arm_side * std::numbers::pi / 2.0;
}

Vec3 wrist_position(const RobotConfig& c, const KinematicModel& model) {
  const Vec3 local(model.mast_offset.x(),
                   model.mast_offset.y() + model.arm_side * (model.arm_base_length + c.arm_ext), 0.0);
  Vec3 w = base_origin(c) + rot_z(c.base_yaw) * local;
  w.z() = c.lift + model.wrist_height;
  return w;
}

Pose fk(const RobotConfig& c, const KinematicModel& model) {
  check_limits(c, model);
  const double h = gripper_heading(c, model);
  Pose p;
  p.rotation = (Quat(Eigen::AngleAxisd(h, Vec3::UnitZ())) *
                Quat(Eigen::AngleAxisd(c.wrist_pitch, Vec3::UnitY())))
                   .normalized();
  p.translation = wrist_position(c, model) +
                  model.fingertip_length(c.gripper) * approach_axis(h, c.wrist_pitch);
  return p;
}

JacobianMatrix jacobian(const RobotConfig& c, const KinematicModel& model, ResidualMode mode) {
  const Vec3 tip = fk(c, model).translation;
  const Vec3 wrist = wrist_position(c, model);
  const int cols = active_joint_count(model);
  const int rows = residual_dim(mode);
  JacobianMatrix jac = JacobianMatrix::Zero(rows, cols);
  const double h = gripper_heading(c, model);
  const double len = model.fingertip_length(c.gripper);

  for (int k = 0; k < cols; ++k) {
    Vec3 dp = Vec3::Zero();
    double dh = 0.0;
    switch (Joint(k)) {
      case Joint::BaseYaw:
        dp = Vec3::UnitZ().cross(tip - base_origin(c));
        dh = 1.0;
        break;
      case Joint::Lift:
        dp = Vec3::UnitZ();
        break;
      case Joint::ArmExt:
        dp = rot_z(c.base_yaw) * Vec3(0.0, model.arm_side, 0.0);
        break;
      case Joint::WristYaw:
        dp = Vec3::UnitZ().cross(tip - wrist);
        dh = 1.0;
        break;
      case Joint::WristPitch: {
        const double p = c.wrist_pitch;
        dp = len * Vec3(-std::cos(h) * std::sin(p), -std::sin(h) * std::sin(p), -std::cos(p));
        break;
      }
    }
    jac.block<3, 1>(0, k) = dp;
    if (mode == ResidualMode::PositionYaw) jac(3, k) = dh;
  }
  return jac;
}

std::vector<OrientedBox> link_shapes(const RobotConfig& c, const KinematicModel& model) {
  const Pose base{Quat(Eigen::AngleAxisd(c.base_yaw, Vec3::UnitZ())), base_origin(c)};
  std::vector<OrientedBox> boxes;
  boxes.reserve(4);

  OrientedBox chassis;
  chassis.center = Vec3(0.0, 0.0, model.chassis_half.z());
  chassis.half_extents = model.chassis_half;
  boxes.push_back(chassis.transformed(base));

  OrientedBox mast;
  mast.center = Vec3(model.mast_offset.x(), model.mast_offset.y(), 0.5 * model.mast_height);
  mast.half_extents = Vec3(model.mast_half_width, model.mast_half_width, 0.5 * model.mast_height);
  boxes.push_back(mast.transformed(base));

  const Vec3 wrist = wrist_position(c, model);
  Vec3 shoulder = base.apply(Vec3(model.mast_offset.x(), model.mast_offset.y(), 0.0));
  shoulder.z() = wrist.z();
  boxes.push_back(
      OrientedBox::segment(shoulder, wrist, model.arm_half_width, model.arm_half_height));

  const Vec3 tip = fk(c, model).translation;
  boxes.push_back(OrientedBox::segment(wrist, tip, model.gripper_half_width,
                                       model.gripper_half_height));
  return boxes;
}

double max_horizontal_reach(const KinematicModel& model) {
  return std::hypot(model.mast_offset.x(), model.mast_offset.y()) + model.arm_base_length +
         model.limits.arm_ext.hi + model.finger_length;
}

}  // namespace artopen
