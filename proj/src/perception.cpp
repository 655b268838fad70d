#include "artopen/perception.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "artopen/error.hpp"

namespace artopen {

namespace {

struct Lifter {
  const DepthImage& depth;
  const CameraModel& camera;
  const Mask2D& mask;
  Plane plane;
  Vec3 eye;

  Vec3 to_base(const Vec3& p_cam) const { return camera.pose_in_base.apply(p_cam); }

  std::optional<Vec3> from_depth(const Vec2& px, double d) const {
    const Vec2 clamped(std::clamp(px.x(), 0.0, double(camera.width - 1)),
                       std::clamp(px.y(), 0.0, double(camera.height - 1)));
    return to_base(backproject(clamped, d, camera));
  }

  std::optional<Vec3> from_plane(const Vec2& px) const {
    const Vec3 dir = camera.pose_in_base.rotate(pixel_ray(px, camera));
    return intersect_ray_plane(eye, dir, plane);
  }

  std::optional<double> masked_depth(int u, int v) const {
    if (!mask.at(u, v)) return std::nullopt;
    return depth.meters(u, v);
  }

  /// Depth at the pixel, else median of the valid 5x5 neighborhood, else plane.
  Vec3 lift_keypoint(const Vec2& px) const {
    const int u = int(std::lround(px.x())), v = int(std::lround(px.y()));
    if (auto d = depth.meters(u, v)) return *from_depth(px, *d);
    std::vector<double> window;
    for (int dv = -2; dv <= 2; ++dv)
      for (int du = -2; du <= 2; ++du)
        if (auto d = depth.meters(u + du, v + dv)) window.push_back(*d);
    if (!window.empty()) {
      auto mid = window.begin() + std::ptrdiff_t(window.size() / 2);
      std::nth_element(window.begin(), mid, window.end());
      return *from_depth(px, *mid);
    }
    if (auto p = from_plane(px)) return *p;
    throw Error(ErrorCode::DegeneratePlane, "handle ray does not meet the fitted plane");
  }

  Vec3 lift_corner(const Vec2& px, bool plane_only) const {
    if (!plane_only) {
      const int u = int(std::lround(px.x())), v = int(std::lround(px.y()));
      if (auto d = masked_depth(u, v)) return *from_depth(px, *d);
    }
    if (auto p = from_plane(px)) return *p;
    throw Error(ErrorCode::DegeneratePlane, "corner ray does not meet the fitted plane");
  }
};

HingeAxis axis_through(const Vec3& a, const Vec3& b, const Vec3& preferred) {
  if ((a - b).norm() < 0.02)
    throw Error(ErrorCode::DegenerateQuad, "hinge corners closer than 2 cm");
  Vec3 dir = (b - a).normalized();
  if (dir.dot(preferred) < 0.0) dir = -dir;
  return {a, dir};
}

double distance_to_line(const Vec3& p, const HingeAxis& axis) {
  const Vec3 d = p - axis.point;
  return (d - d.dot(axis.direction) * axis.direction).norm();
}

}  // namespace

std::size_t Mask2D::count() const {
  return std::size_t(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

LiftResult lift_detection_full(const Detection2D& det, const DepthImage& depth,
                               const CameraModel& camera, const LiftOptions& options) {
  camera.validate();
  const Mask2D& mask = det.mask;
  if (mask.width != depth.width || mask.height != depth.height || depth.width != camera.width ||
      depth.height != camera.height)
    throw Error(ErrorCode::OutOfBounds, "mask, depth and camera dimensions differ");

  std::vector<Vec3> points;
  std::vector<Vec2> pixels;
  for (int v = 0; v < mask.height; ++v) {
    for (int u = 0; u < mask.width; ++u) {
      if (!mask.at(u, v)) continue;
      pixels.emplace_back(u, v);
      if (auto d = depth.meters(u, v))
        points.push_back(camera.pose_in_base.apply(backproject(Vec2(u, v), *d, camera)));
    }
  }
  if (points.size() < std::max<std::size_t>(options.min_valid_pixels, 3))
    throw Error(ErrorCode::InsufficientDepth,
                "only " + std::to_string(points.size()) + " masked pixels with valid depth");

  const Vec3 eye = camera.pose_in_base.translation;
  LiftResult out;
  try {
    out.plane = fit_plane(points, eye, {options.robust_plane});
  } catch (const Error& e) {
    throw Error(ErrorCode::DegeneratePlane, e.what());
  }
  const Lifter lifter{depth, camera, mask, out.plane, eye};

  ArticulationParams& params = out.params;
  params.atype = det.atype;
  params.normal = out.plane.normal;
  params.handle_orientation = det.handle_orientation;
  params.handle = lifter.lift_keypoint(det.handle_px);
  out.handle_outside_mask =
      !mask.at(int(std::lround(det.handle_px.x())), int(std::lround(det.handle_px.y())));

  Quad quad;
  try {
    quad = simplify_to_quad(convex_hull(pixels));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Triangle) throw Error(ErrorCode::DegenerateQuad, e.what());
    quad = min_area_rect(pixels);
    out.bbox_fallback = true;
  }
  for (std::size_t i = 0; i < 4; ++i) out.corners[i] = lifter.lift_corner(quad[i], options.plane_corners);

  if (!is_hinged(det.atype)) return out;

  const Vec3 left = face_left(params.normal);
  const Vec3 up = left.cross(params.normal).normalized();
  std::array<Vec3, 4> sorted = out.corners;
  HingeAxis axis;
  switch (det.atype) {
    case ArticulationType::CabinetLeftHinge:
      std::sort(sorted.begin(), sorted.end(),
                [&](const Vec3& a, const Vec3& b) { return a.dot(left) > b.dot(left); });
      axis = axis_through(sorted[0], sorted[1], up);
      break;
    case ArticulationType::CabinetRightHinge:
      std::sort(sorted.begin(), sorted.end(),
                [&](const Vec3& a, const Vec3& b) { return a.dot(left) < b.dot(left); });
      axis = axis_through(sorted[0], sorted[1], up);
      break;
    case ArticulationType::BottomHinge:
      std::sort(sorted.begin(), sorted.end(),
                [&](const Vec3& a, const Vec3& b) { return a.dot(up) < b.dot(up); });
      axis = axis_through(sorted[0], sorted[1], left);
      break;
    case ArticulationType::Drawer:
      break;
  }
  params.axis = axis;
  params.radius = distance_to_line(params.handle, axis);
  return out;
}

HandleOrientation orientation_from_points(std::span<const Vec3> pts, const Vec3& face_normal) {
  if (pts.size() < 10)
    throw Error(ErrorCode::InsufficientPoints, "orientation_from_points: need >= 10 points");
  const Vec3 vertical = Vec3::UnitZ();
  Vec3 horizontal = face_normal.cross(vertical);
  if (horizontal.norm() < 1e-9) horizontal = Vec3::UnitY();
  horizontal.normalize();

  auto variance = [&](const Vec3& axis) {
    double mean = 0.0, sq = 0.0;
    for (const auto& p : pts) mean += p.dot(axis);
    mean /= double(pts.size());
    for (const auto& p : pts) sq += std::pow(p.dot(axis) - mean, 2);
    return sq / double(pts.size());
  };
  return variance(horizontal) >= variance(vertical) ? HandleOrientation::Horizontal
                                                    : HandleOrientation::Vertical;
}

}  // namespace artopen
