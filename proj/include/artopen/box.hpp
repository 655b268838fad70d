#pragma once

#include "artopen/geometry.hpp"

namespace artopen {

struct OrientedBox {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Constant(0.5);
  Quat rotation = Quat::Identity();

  /// Box spanning `from` to `to` along its local x axis, with the given
  /// half extents across (y, z). `up` fixes the roll of the local frame.
  static OrientedBox segment(const Vec3& from, const Vec3& to, double half_y, double half_z,
                             const Vec3& up = Vec3::UnitZ());

  OrientedBox transformed(const Pose& pose) const;
  bool contains(const Vec3& p, double tol = 0.0) const;
  double distance(const Vec3& p) const;
  Mat3 axes() const { return rotation.toRotationMatrix(); }
};

/// Separating-axis test over the 15 candidate axes. Boxes that merely touch
/// within `slack` meters are not reported as intersecting.
bool intersects(const OrientedBox& a, const OrientedBox& b, double slack = 1e-9);

}  // namespace artopen
