#include "artopen/synthetic.hpp"

#include <cmath>
#include <random>

#include "artopen/error.hpp"

namespace artopen {

Pose look_at(const Vec3& eye, const Vec3& target) {
  const Vec3 z = (target - eye).normalized();
  Vec3 x = Vec3(0.0, 0.0, -1.0).cross(z);
  if (x.norm() < 1e-9) x = Vec3::UnitY().cross(z);
  x.normalize();
  Mat3 r;
  r.col(0) = x;
  r.col(1) = z.cross(x);
  r.col(2) = z;
  return {Quat(r).normalized(), eye};
}

CameraModel frontal_camera(const ArticulationParams& params, double distance) {
  CameraModel cam;
  cam.pose_in_base = look_at(params.handle + distance * params.normal, params.handle);
  return cam;
}

RenderedFace render_face(const ArticulationParams& truth, const ObjectGeometry& geometry,
                         const CameraModel& camera, double noise_sigma, std::uint64_t seed) {
  camera.validate();
  const Scene scene = make_scene(truth, geometry);
  const OrientedBox& panel = scene.panel;
  const Mat3 axes = panel.axes();
  const Plane face{truth.normal, truth.normal.dot(truth.handle)};
  const Pose cam_from_base = camera.pose_in_base.inverse();
  const Vec3 eye = camera.pose_in_base.translation;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);

  RenderedFace out;
  out.depth = DepthImage(camera.width, camera.height);
  Detection2D& det = out.detection;
  det.mask = Mask2D(camera.width, camera.height);
  det.atype = truth.atype;
  det.handle_orientation = truth.handle_orientation;

  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) {
      const Vec3 dir = camera.pose_in_base.rotate(pixel_ray(Vec2(u, v), camera));
      const auto hit = intersect_ray_plane(eye, dir, face);
      if (!hit) continue;
      const Vec3 local = axes.transpose() * (*hit - panel.center);
      if (std::abs(local.y()) > panel.half_extents.y() || std::abs(local.z()) > panel.half_extents.z())
        continue;
      double z = cam_from_base.apply(*hit).z();
      if (noise_sigma > 0.0) z += noise(rng);
      const long mm = std::lround(z * 1000.0);
      if (mm <= 0 || mm > 65535) continue;
      out.depth.at(u, v) = std::uint16_t(mm);
      det.mask.set(u, v);
    }
  }
  const Vec3 handle_cam = cam_from_base.apply(truth.handle);
  if (handle_cam.z() <= 0.0) throw Error(ErrorCode::OutOfBounds, "handle behind the camera");
  det.handle_px = project(handle_cam, camera);
  return out;
}

}  // namespace artopen
