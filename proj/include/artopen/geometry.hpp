#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace artopen {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

/// Rigid transform: p_parent = rotation * p_child + translation.
struct Pose {
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return {}; }
  static Pose from_translation(const Vec3& t) { return {Quat::Identity(), t}; }
  /// Rotation by `angle` about the line through `point` with direction `axis`.
  static Pose about_axis(const Vec3& point, const Vec3& axis, double angle);

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 rotate(const Vec3& v) const { return rotation * v; }
  Pose inverse() const;
  Pose operator*(const Pose& rhs) const;
  Mat3 matrix() const { return rotation.toRotationMatrix(); }
};

struct CameraModel {
  double fx = 500.0;
  double fy = 500.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;
  /// Camera frame (+Z forward, +X right, +Y down) expressed in the base frame.
  Pose pose_in_base;

  void validate() const;
};

/// 16-bit depth raster in millimeters; 0 marks an invalid sample.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> data;

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), data(std::size_t(w) * h, 0) {}

  std::uint16_t at(int u, int v) const { return data[std::size_t(v) * width + u]; }
  std::uint16_t& at(int u, int v) { return data[std::size_t(v) * width + u]; }
  bool inside(int u, int v) const { return u >= 0 && v >= 0 && u < width && v < height; }
  /// Depth in meters, or nullopt when out of bounds or invalid.
  std::optional<double> meters(int u, int v) const;
};

/// {p : normal . p = offset}
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;

  double signed_distance(const Vec3& p) const { return normal.dot(p) - offset; }
  Vec3 project(const Vec3& p) const { return p - signed_distance(p) * normal; }
};

/// Convex polygon in pixel coordinates, counter-clockwise in the (u, v) plane.
struct Polygon2D {
  std::vector<Vec2> vertices;

  double area() const;
  bool contains(const Vec2& p, double tol = 1e-6) const;
};

using Quad = std::array<Vec2, 4>;

Vec3 backproject(const Vec2& pixel, double depth_m, const CameraModel& camera);
/// Inverse of backproject for camera-frame points with z > 0.
Vec2 project(const Vec3& p_camera, const CameraModel& camera);
/// Unit ray direction in the camera frame through a pixel.
Vec3 pixel_ray(const Vec2& pixel, const CameraModel& camera);
std::optional<Vec3> intersect_ray_plane(const Vec3& origin, const Vec3& dir, const Plane& plane);

struct PlaneFitOptions {
  /// Drop points with residual beyond 3 sigma and refit once.
  bool reject_outliers = false;
};

Plane fit_plane(std::span<const Vec3> points, const Vec3& view_origin,
                const PlaneFitOptions& options = {});

Polygon2D convex_hull(std::span<const Vec2> points);

/// Reduces a convex polygon to a containing quadrilateral by repeatedly
/// collapsing the edge whose removal adds the least area. Throws
/// ErrorCode::Triangle for 3-vertex input.
Quad simplify_to_quad(const Polygon2D& hull);

/// Minimum-area enclosing rectangle (rotating calipers over hull edges).
Quad min_area_rect(std::span<const Vec2> points);

/// Area of the quad, vertices in order.
double quad_area(const Quad& q);

}  // namespace artopen
