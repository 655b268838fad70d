#pragma once

#include <cstdint>

#include "artopen/articulation.hpp"
#include "artopen/geometry.hpp"
#include "artopen/perception.hpp"
#include "artopen/scene.hpp"

namespace artopen {

/// Camera pose at `eye` looking at `target`, image rows pointing down.
Pose look_at(const Vec3& eye, const Vec3& target);

/// Default intrinsics, placed `distance` in front of the handle's face and
/// looking straight at the handle.
CameraModel frontal_camera(const ArticulationParams& params, double distance = 1.5);

struct RenderedFace {
  DepthImage depth;
  Detection2D detection;
};

/// Pinhole render of the closed front face (the panel of make_scene) with
/// optional Gaussian depth noise. Pixels off the face have depth 0.
RenderedFace render_face(const ArticulationParams& truth, const ObjectGeometry& geometry,
                         const CameraModel& camera, double noise_sigma = 0.0,
                         std::uint64_t seed = 0);

}  // namespace artopen
