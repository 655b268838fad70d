#pragma once

#include <numbers>
#include <vector>

#include "artopen/articulation.hpp"
#include "artopen/planner.hpp"
#include "artopen/robot.hpp"
#include "artopen/scene.hpp"

namespace artopen {

/// Candidate base placements in the handle frame: x points into the object
/// (negative values are in front of it), y to the viewer's left.
struct PlacementGrid {
  Vec2 origin{-1.2, -1.0};
  double spacing = 0.05;
  int nx = 25;
  int ny = 41;
  std::vector<double> yaws = default_yaws();

  static std::vector<double> default_yaws(int count = 8);

  Vec2 cell(int ix, int iy) const { return origin + spacing * Vec2(double(ix), double(iy)); }
  std::size_t size() const { return std::size_t(nx) * std::size_t(ny); }
};

/// Horizontal frame attached to the closed handle.
struct HandleFrame {
  Vec3 origin;
  Vec2 x_axis;
  Vec2 y_axis;
  double heading;

  static HandleFrame of(const ArticulationParams& params);
  Vec2 to_world(const Vec2& local) const;
};

/// Neutral arm at the given handle-frame base pose.
RobotConfig placement_config(const HandleFrame& frame, const Vec2& cell, double yaw,
                             const KinematicModel& model);

struct Heatmap {
  PlacementGrid grid;
  int waypoints = 10;
  std::vector<int> scores;
  std::vector<double> best_yaw;

  int score(int ix, int iy) const { return scores[std::size_t(iy) * grid.nx + ix]; }
  double yaw(int ix, int iy) const { return best_yaw[std::size_t(iy) * grid.nx + ix]; }
  int max_score() const;
};

struct NavigationTarget {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  int ix = 0;
  int iy = 0;
  int score = 0;
};

struct MineOptions {
  int waypoints = 10;
  SeqIKOptions seqik;
  /// Worker threads; results do not depend on this.
  int workers = 1;
};

/// Scores every (cell, yaw) by how many waypoints SeqIK decodes from a
/// neutral arm there; each cell keeps its best yaw.
Heatmap mine(const ArticulationParams& params, const Scene& scene, const KinematicModel& model,
             const PlacementGrid& grid = {}, const MineOptions& options = {});

/// Best score over the grid; stops as soon as a full plan is found.
int mine_max_score(const ArticulationParams& params, const Scene& scene,
                   const KinematicModel& model, const PlacementGrid& grid = {},
                   const MineOptions& options = {});

/// Argmax score; ties by distance to the handle, then |yaw|, then (ix, iy).
NavigationTarget navigation_target(const Heatmap& heatmap);

/// Base configuration (neutral arm) at a mined target.
RobotConfig target_config(const ArticulationParams& params, const NavigationTarget& target,
                          const KinematicModel& model);

}  // namespace artopen
