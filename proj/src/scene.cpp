#include "artopen/scene.hpp"

#include <algorithm>

namespace artopen {

namespace {

struct Extent {
  double lo;
  double hi;
  double mid() const { return 0.5 * (lo + hi); }
  double half() const { return 0.5 * (hi - lo); }
};

/// Box aligned with the object's face frame: x into the object, y left, z up.
OrientedBox face_box(const ArticulationParams& p, Extent lateral, Extent vertical, Extent depth) {
  const Vec3 in = -p.normal;
  const Vec3 left = face_left(p.normal);
  const Vec3 up = left.cross(p.normal).normalized();
  Mat3 r;
  r.col(0) = in;
  r.col(1) = left;
  r.col(2) = up;
  OrientedBox box;
  box.rotation = Quat(r).normalized();
  box.center = p.handle + depth.mid() * in + lateral.mid() * left + vertical.mid() * up;
  box.half_extents = Vec3(depth.half(), lateral.half(), vertical.half());
  return box;
}

}  // namespace

OrientedBox Scene::panel_at(ObjectState state) const {
  if (state.opening == 0.0) return panel;
  return panel.transformed(opening_motion(articulation, state.opening));
}

Scene make_scene(const ArticulationParams& params, const ObjectGeometry& g,
                 std::vector<OrientedBox> obstacles) {
  params.require_axis();
  const double r = params.radius.value_or(0.0);
  const Extent centered_w{-0.5 * g.panel_width, 0.5 * g.panel_width};
  const Extent centered_h{-0.5 * g.panel_height - g.handle_offset,
                          0.5 * g.panel_height - g.handle_offset};
  Extent lateral = centered_w, vertical = centered_h;
  Extent depth{0.0, g.panel_thickness};
  switch (params.atype) {
    case ArticulationType::CabinetRightHinge:
      lateral = {-r, g.edge_margin};
      break;
    case ArticulationType::CabinetLeftHinge:
      lateral = {-g.edge_margin, r};
      break;
    case ArticulationType::BottomHinge:
      vertical = {-r, g.edge_margin};
      break;
    case ArticulationType::Drawer:
      depth = {0.0, g.panel_thickness + g.drawer_depth};
      break;
  }

  Scene scene;
  scene.obstacles = std::move(obstacles);
  scene.articulation = params;
  scene.panel = face_box(params, lateral, vertical, depth);
  Extent body_vertical{vertical.lo - g.frame_margin, vertical.hi + g.frame_margin};
  if (g.floor_standing) body_vertical.lo = std::min(body_vertical.lo, -params.handle.z());
  scene.body = face_box(params, {lateral.lo - g.frame_margin, lateral.hi + g.frame_margin},
                        body_vertical,
                        {g.panel_thickness, g.panel_thickness + g.body_depth});
  return scene;
}

bool check_collision(const RobotConfig& config, const Scene& scene, ObjectState state,
                     const KinematicModel& model) {
  const auto links = link_shapes(config, model);
  const OrientedBox panel = scene.panel_at(state);
  const Vec3 handle = handle_at(scene.articulation, state);
  for (std::size_t i = 0; i < links.size(); ++i) {
    const OrientedBox& link = links[i];
    if (intersects(link, scene.body)) return true;
    for (const auto& obstacle : scene.obstacles)
      if (intersects(link, obstacle)) return true;
    const bool exempt =
        i == std::size_t(Link::Gripper) && link.distance(handle) <= kGraspExemptionRadius;
    if (!exempt && intersects(link, panel)) return true;
  }
  return false;
}

bool chassis_collides(const RobotConfig& config, const Scene& scene, const KinematicModel& model) {
  const OrientedBox chassis = link_shapes(config, model)[std::size_t(Link::Chassis)];
  if (intersects(chassis, scene.body) || intersects(chassis, scene.panel)) return true;
  for (const auto& obstacle : scene.obstacles)
    if (intersects(chassis, obstacle)) return true;
  return false;
}

}  // namespace artopen
