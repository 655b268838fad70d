#pragma once

#include <vector>

#include "artopen/articulation.hpp"
#include "artopen/box.hpp"
#include "artopen/robot.hpp"

namespace artopen {

/// Physical extent of the articulated object around its handle. Door panels
/// span from the hinge line to `edge_margin` past the handle; drawer fronts
/// are `panel_width` x `panel_height` centered on the handle.
struct ObjectGeometry {
  double panel_width = 0.45;
  double panel_height = 0.6;
  double edge_margin = 0.05;
  /// Handle height above the panel's vertical center (side hinges, drawers).
  double handle_offset = 0.0;
  double panel_thickness = 0.02;
  double body_depth = 0.45;
  double drawer_depth = 0.35;
  double frame_margin = 0.02;
  /// Extend the body down to the floor (base cabinets, tall units).
  bool floor_standing = true;
};

/// Static world plus the moving part of the articulated object.
struct Scene {
  std::vector<OrientedBox> obstacles;
  OrientedBox body;
  /// Door or drawer at opening 0; moves with opening_motion(articulation).
  OrientedBox panel;
  ArticulationParams articulation;

  OrientedBox panel_at(ObjectState state) const;
};

Scene make_scene(const ArticulationParams& params, const ObjectGeometry& geometry = {},
                 std::vector<OrientedBox> obstacles = {});

inline constexpr double kGraspExemptionRadius = 0.05;

/// True iff any robot link overlaps any scene box. The gripper may touch the
/// panel while the current handle point is within 5 cm of the gripper box.
bool check_collision(const RobotConfig& config, const Scene& scene, ObjectState state,
                     const KinematicModel& model);

/// Chassis-only variant used to discard base placements up front.
bool chassis_collides(const RobotConfig& config, const Scene& scene, const KinematicModel& model);

}  // namespace artopen
