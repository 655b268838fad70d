#include "artopen/miner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "artopen/error.hpp"

namespace artopen {

namespace {

/// Yaw visiting order for tie-breaks: smallest |yaw| first, positive before negative.
bool yaw_precedes(double a, double b) {
  if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
  return a > b;
}

struct PlacementJob {
  const ArticulationParams& params;
  const Scene& scene;
  const KinematicModel& model;
  const PlacementGrid& grid;
  const MineOptions& options;
  HandleFrame frame;
  WaypointTrajectory traj;
  double reach;

  PlacementJob(const ArticulationParams& p, const Scene& s, const KinematicModel& m,
               const PlacementGrid& g, const MineOptions& o)
      : params(p), scene(s), model(m), grid(g), options(o), frame(HandleFrame::of(p)),
        traj(generate_waypoints(p, o.waypoints)), reach(max_horizontal_reach(m)) {}

  /// True when no configuration at this base can touch the first waypoint.
  bool out_of_reach(const RobotConfig& c) const {
    const Vec3& w = traj.poses.front().translation;
    const double horizontal = std::hypot(w.x() - c.base_xy.x(), w.y() - c.base_xy.y());
    if (horizontal > reach + options.seqik.ik.pos_tol) return true;
    if (model.limits.pitch_enabled) return false;
    const double lo = model.limits.lift.lo + model.wrist_height - options.seqik.ik.pos_tol;
    const double hi = model.limits.lift.hi + model.wrist_height + options.seqik.ik.pos_tol;
    return w.z() < lo || w.z() > hi;
  }

  int score(const Vec2& cell, double yaw) const {
    const RobotConfig theta0 = placement_config(frame, cell, yaw, model);
    if (chassis_collides(theta0, scene, model)) return 0;
    if (out_of_reach(theta0)) return 0;
    return seq_ik(theta0, traj, scene, model, options.seqik).achieved;
  }
};

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

std::vector<double> ordered_yaws(const PlacementGrid& grid) {
  std::vector<double> yaws = grid.yaws;
  std::stable_sort(yaws.begin(), yaws.end(), yaw_precedes);
  return yaws;
}

}  // namespace

std::vector<double> PlacementGrid::default_yaws(int count) {
  std::vector<double> yaws;
  for (int k = 0; k < count; ++k)
    yaws.push_back(wrap_angle(2.0 * std::numbers::pi * double(k) / double(count)));
  return yaws;
}

HandleFrame HandleFrame::of(const ArticulationParams& params) {
  Vec2 x(-params.normal.x(), -params.normal.y());
  if (x.norm() < 1e-9) x = Vec2::UnitX();
  x.normalize();
  const Vec2 y(-x.y(), x.x());
  return {params.handle, x, y, std::atan2(x.y(), x.x())};
}

Vec2 HandleFrame::to_world(const Vec2& local) const {
  return origin.head<2>() + local.x() * x_axis + local.y() * y_axis;
}

RobotConfig placement_config(const HandleFrame& frame, const Vec2& cell, double yaw,
                             const KinematicModel& model) {
  RobotConfig c = neutral_config(model);
  c.base_xy = frame.to_world(cell);
  c.base_yaw = wrap_angle(frame.heading + yaw);
  return c;
}

int Heatmap::max_score() const {
  if (scores.empty()) throw Error(ErrorCode::EmptyHeatmap, "heatmap has no cells");
  return *std::max_element(scores.begin(), scores.end());
}

Heatmap mine(const ArticulationParams& params, const Scene& scene, const KinematicModel& model,
             const PlacementGrid& grid, const MineOptions& options) {
  if (grid.nx < 1 || grid.ny < 1 || grid.yaws.empty() || !(grid.spacing > 0.0))
    throw Error(ErrorCode::EmptyHeatmap, "mine: empty placement grid");
  const PlacementJob job(params, scene, model, grid, options);
  const std::vector<double> yaws = ordered_yaws(grid);

  Heatmap map;
  map.grid = grid;
  map.waypoints = options.waypoints;
  map.scores.assign(grid.size(), 0);
  map.best_yaw.assign(grid.size(), yaws.front());

  parallel_for(grid.size(), options.workers, [&](std::size_t idx) {
    const int ix = int(idx % std::size_t(grid.nx));
    const int iy = int(idx / std::size_t(grid.nx));
    const Vec2 cell = grid.cell(ix, iy);
    int best = -1;
    for (double yaw : yaws) {
      const int s = job.score(cell, yaw);
      if (s > best) {
        best = s;
        map.best_yaw[idx] = yaw;
      }
      if (best == options.waypoints) break;
    }
    map.scores[idx] = best;
  });
  return map;
}

int mine_max_score(const ArticulationParams& params, const Scene& scene,
                   const KinematicModel& model, const PlacementGrid& grid,
                   const MineOptions& options) {
  const PlacementJob job(params, scene, model, grid, options);
  const std::vector<double> yaws = ordered_yaws(grid);
  std::atomic<int> best{0};
  parallel_for(grid.size() * yaws.size(), options.workers, [&](std::size_t idx) {
    if (best.load() == options.waypoints) return;
    const std::size_t cell_idx = idx / yaws.size();
    const Vec2 cell = grid.cell(int(cell_idx % std::size_t(grid.nx)),
                                int(cell_idx / std::size_t(grid.nx)));
    const int s = job.score(cell, yaws[idx % yaws.size()]);
    int cur = best.load();
    while (s > cur && !best.compare_exchange_weak(cur, s)) {
    }
  });
  return best.load();
}

NavigationTarget navigation_target(const Heatmap& heatmap) {
  if (heatmap.scores.empty()) throw Error(ErrorCode::EmptyHeatmap, "navigation_target: empty heatmap");
  const auto& g = heatmap.grid;
  NavigationTarget best;
  bool have = false;
  double best_dist = 0.0;
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      const int s = heatmap.score(ix, iy);
      const Vec2 c = g.cell(ix, iy);
      const double yaw = heatmap.yaw(ix, iy);
      const double dist = c.norm();
      bool better = !have || s > best.score;
      if (have && s == best.score) {
        if (dist != best_dist) better = dist < best_dist;
        else if (yaw != best.yaw) better = yaw_precedes(yaw, best.yaw);
        else better = false;  // scan order already visits smaller (ix, iy) first
      }
      if (better) {
        best = {c.x(), c.y(), yaw, ix, iy, s};
        best_dist = dist;
        have = true;
      }
    }
  }
  return best;
}

RobotConfig target_config(const ArticulationParams& params, const NavigationTarget& target,
                          const KinematicModel& model) {
  return placement_config(HandleFrame::of(params), Vec2(target.x, target.y), target.yaw, model);
}

}  // namespace artopen
