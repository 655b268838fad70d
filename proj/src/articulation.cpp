#include "artopen/articulation.hpp"

#include <cmath>
#include <string>

#include "artopen/error.hpp"

namespace artopen {

std::string_view to_string(ArticulationType t) {
  switch (t) {
    case ArticulationType::Drawer: return "drawer";
    case ArticulationType::CabinetLeftHinge: return "left_hinge";
    case ArticulationType::CabinetRightHinge: return "right_hinge";
    case ArticulationType::BottomHinge: return "bottom_hinge";
  }
  return "drawer";
}

std::string_view to_string(HandleOrientation o) {
  return o == HandleOrientation::Horizontal ? "horizontal" : "vertical";
}

ArticulationType parse_articulation_type(std::string_view s) {
  if (s == "drawer") return ArticulationType::Drawer;
  if (s == "left_hinge") return ArticulationType::CabinetLeftHinge;
  if (s == "right_hinge") return ArticulationType::CabinetRightHinge;
  if (s == "bottom_hinge") return ArticulationType::BottomHinge;
  throw Error(ErrorCode::Schema, "unknown articulation type '" + std::string(s) + "'");
}

HandleOrientation parse_handle_orientation(std::string_view s) {
  if (s == "horizontal") return HandleOrientation::Horizontal;
  if (s == "vertical") return HandleOrientation::Vertical;
  throw Error(ErrorCode::Schema, "unknown handle orientation '" + std::string(s) + "'");
}

Vec3 face_left(const Vec3& normal) {
  // Viewer looks along -normal; left = up x forward.
  Vec3 left = Vec3::UnitZ().cross(-normal);
  if (left.norm() < 1e-9) left = Vec3::UnitY();
  return left.normalized();
}

void ArticulationParams::require_axis() const {
  if (is_hinged(atype) && (!axis || !radius))
    throw Error(ErrorCode::MissingAxis, "hinged articulation without axis/radius");
}

double ArticulationParams::swing_sign() const {
  require_axis();
  const double s = axis->direction.cross(handle - axis->point).dot(normal);
  return s < 0.0 ? -1.0 : 1.0;
}

ArticulationParams ArticulationParams::transformed(const Pose& pose) const {
  ArticulationParams out = *this;
  out.handle = pose.apply(handle);
  out.normal = pose.rotate(normal).normalized();
  if (axis) out.axis = HingeAxis{pose.apply(axis->point), pose.rotate(axis->direction).normalized()};
  return out;
}

ArticulationParams make_hinged(ArticulationType atype, const Vec3& handle, const Vec3& normal,
                               double radius, HandleOrientation orientation) {
  ArticulationParams p;
  p.atype = atype;
  p.handle = handle;
  p.normal = normal.normalized();
  p.handle_orientation = orientation;
  p.radius = radius;
  const Vec3 left = face_left(p.normal);
  switch (atype) {
    case ArticulationType::CabinetLeftHinge:
      p.axis = HingeAxis{handle + radius * left, Vec3::UnitZ()};
      break;
    case ArticulationType::CabinetRightHinge:
      p.axis = HingeAxis{handle - radius * left, Vec3::UnitZ()};
      break;
    case ArticulationType::BottomHinge: {
      const Vec3 up = left.cross(p.normal).normalized();
      p.axis = HingeAxis{handle - radius * up, left};
      break;
    }
    case ArticulationType::Drawer:
      throw Error(ErrorCode::MissingAxis, "make_hinged: drawer has no hinge");
  }
  return p;
}

ArticulationParams make_drawer(const Vec3& handle, const Vec3& normal,
                               HandleOrientation orientation) {
  ArticulationParams p;
  p.atype = ArticulationType::Drawer;
  p.handle = handle;
  p.normal = normal.normalized();
  p.handle_orientation = orientation;
  return p;
}

Pose opening_motion(const ArticulationParams& params, double opening) {
  if (params.atype == ArticulationType::Drawer)
    return Pose::from_translation(opening * params.normal);
  params.require_axis();
  return Pose::about_axis(params.axis->point, params.axis->direction,
                          params.swing_sign() * opening);
}

Vec3 handle_at(const ArticulationParams& params, ObjectState state) {
  if (state.opening < 0.0) throw Error(ErrorCode::DegenerateInput, "handle_at: negative opening");
  if (state.opening == 0.0) {
    params.require_axis();
    return params.handle;
  }
  return opening_motion(params, state.opening).apply(params.handle);
}

Quat grasp_orientation(const ArticulationParams& params) {
  const Vec3 x = -params.normal.normalized();
  Vec3 y;
  if (params.handle_orientation == HandleOrientation::Horizontal) {
    y = Vec3::UnitZ() - Vec3::UnitZ().dot(x) * x;
    if (y.norm() < 1e-9) y = face_left(params.normal);
  } else {
    y = face_left(params.normal);
    y -= y.dot(x) * x;
  }
  y.normalize();
  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = x.cross(y);
  return Quat(r);
}

WaypointTrajectory generate_waypoints(const ArticulationParams& params, int n,
                                      std::optional<double> target) {
  if (n < 2) throw Error(ErrorCode::BadCount, "generate_waypoints: need n >= 2");
  params.require_axis();
  const double goal = target.value_or(default_target(params.atype));
  if (!(goal > 0.0)) throw Error(ErrorCode::DegenerateInput, "generate_waypoints: target must be > 0");

  const Quat closed = grasp_orientation(params);
  WaypointTrajectory traj;
  traj.poses.reserve(n);
  traj.openings.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double opening = goal * double(i) / double(n - 1);
    const Pose motion = opening_motion(params, opening);
    traj.openings.push_back(opening);
    traj.poses.push_back({(motion.rotation * closed).normalized(), motion.apply(params.handle)});
  }
  return traj;
}

}  // namespace artopen
