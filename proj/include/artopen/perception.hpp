#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "artopen/articulation.hpp"
#include "artopen/geometry.hpp"

namespace artopen {

struct Mask2D {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  Mask2D() = default;
  Mask2D(int w, int h) : width(w), height(h), bits(std::size_t(w) * h, 0) {}

  bool at(int u, int v) const {
    return u >= 0 && v >= 0 && u < width && v < height && bits[std::size_t(v) * width + u] != 0;
  }
  void set(int u, int v, bool on = true) { bits[std::size_t(v) * width + u] = on ? 1 : 0; }
  std::size_t count() const;
};

/// Output of the 2D detector for one articulated part.
struct Detection2D {
  Mask2D mask;
  ArticulationType atype = ArticulationType::Drawer;
  Vec2 handle_px = Vec2::Zero();
  HandleOrientation handle_orientation = HandleOrientation::Horizontal;
  double score = 1.0;
};

struct LiftOptions {
  std::size_t min_valid_pixels = 50;
  /// Lift quad corners by ray-plane intersection instead of depth lookup.
  bool plane_corners = false;
  bool robust_plane = false;
};

struct LiftResult {
  ArticulationParams params;
  Plane plane;
  /// Quad corners in the base frame, in image order.
  std::array<Vec3, 4> corners;
  bool bbox_fallback = false;
  bool handle_outside_mask = false;
};

/// Turns a detection plus depth into articulation parameters in the base
/// frame: plane fit for the normal, keypoint lift for the handle, hull to
/// quad for the hinge line, and handle-to-axis distance for the radius.
LiftResult lift_detection_full(const Detection2D& det, const DepthImage& depth,
                               const CameraModel& camera, const LiftOptions& options = {});

inline ArticulationParams lift_detection(const Detection2D& det, const DepthImage& depth,
                                         const CameraModel& camera,
                                         const LiftOptions& options = {}) {
  return lift_detection_full(det, depth, camera, options).params;
}

/// Horizontal iff the handle points spread more along the in-face horizontal
/// axis than along gravity.
HandleOrientation orientation_from_points(std::span<const Vec3> handle_points_base,
                                          const Vec3& face_normal = -Vec3::UnitX());

}  // namespace artopen
