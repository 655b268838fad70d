#pragma once

#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "artopen/geometry.hpp"

namespace artopen {

enum class ArticulationType { Drawer, CabinetLeftHinge, CabinetRightHinge, BottomHinge };
enum class HandleOrientation { Horizontal, Vertical };

std::string_view to_string(ArticulationType t);
std::string_view to_string(HandleOrientation o);
ArticulationType parse_articulation_type(std::string_view s);
HandleOrientation parse_handle_orientation(std::string_view s);

inline bool is_hinged(ArticulationType t) { return t != ArticulationType::Drawer; }

struct HingeAxis {
  Vec3 point = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();
};

/// Everything needed to open an object: where the handle is, which way the
/// face points (toward the robot) and, for doors, the hinge.
struct ArticulationParams {
  ArticulationType atype = ArticulationType::Drawer;
  Vec3 handle = Vec3::Zero();
  Vec3 normal = -Vec3::UnitX();
  HandleOrientation handle_orientation = HandleOrientation::Horizontal;
  std::optional<HingeAxis> axis;
  std::optional<double> radius;

  /// Throws MissingAxis when a hinged type lacks axis or radius.
  void require_axis() const;
  /// Signed rotation rate (+1 or -1) that swings the handle toward the robot.
  double swing_sign() const;
  ArticulationParams transformed(const Pose& pose) const;
};

/// Hinged params whose axis lies in the face plane at `radius` from the
/// handle. For side hinges the axis is vertical; for BottomHinge it runs
/// horizontally below the handle.
ArticulationParams make_hinged(ArticulationType atype, const Vec3& handle, const Vec3& normal,
                               double radius,
                               HandleOrientation orientation = HandleOrientation::Horizontal);
ArticulationParams make_drawer(const Vec3& handle, const Vec3& normal,
                               HandleOrientation orientation = HandleOrientation::Horizontal);

/// Face-plane horizontal unit vector pointing to the viewer's left.
Vec3 face_left(const Vec3& normal);

/// Opening amount: meters for drawers, radians for hinged objects.
struct ObjectState {
  double opening = 0.0;
};

inline constexpr double kDrawerTravel = 0.35;
inline constexpr double kHingeTravel = std::numbers::pi / 2.0;

inline double default_target(ArticulationType t) {
  return t == ArticulationType::Drawer ? kDrawerTravel : kHingeTravel;
}

/// Rigid motion that carries the closed object to `opening`.
Pose opening_motion(const ArticulationParams& params, double opening);

Vec3 handle_at(const ArticulationParams& params, ObjectState state);

/// Gripper orientation at the closed state: x = approach (into the face),
/// y = grip closing axis, z = x cross y.
Quat grasp_orientation(const ArticulationParams& params);

struct WaypointTrajectory {
  std::vector<Pose> poses;
  std::vector<double> openings;

  std::size_t size() const { return poses.size(); }
};

WaypointTrajectory generate_waypoints(const ArticulationParams& params, int n = 10,
                                      std::optional<double> target = std::nullopt);

}  // namespace artopen
