#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "artopen/articulation.hpp"
#include "artopen/miner.hpp"
#include "artopen/planner.hpp"
#include "artopen/robot.hpp"
#include "artopen/scene.hpp"

namespace artopen {

/// Concrete perception and navigation error for one trial.
struct ErrorInjection {
  /// Believed minus true handle position; the whole object shifts with it.
  Vec3 handle_offset = Vec3::Zero();
  /// Actual minus commanded base pose, in the commanded base frame (dx, dy, dyaw).
  Vec3 base_offset = Vec3::Zero();
};

/// Uniform ranges sampled per trial. `depth` is along the face normal and is
/// added on top of the per-axis handle range.
struct ErrorDistribution {
  double depth = 0.0;
  Vec3 handle = Vec3::Zero();
  Vec3 base = Vec3::Zero();

  ErrorInjection sample(std::mt19937_64& rng, const Vec3& normal) const;
};

struct GraspModel {
  /// Slip tolerance: largest fingertip-to-handle distance that keeps the grasp.
  double tolerance = 0.04;
  /// Largest shortfall of the closed fingertip along the approach axis that
  /// still gets the fingers around the handle.
  double capture_depth = 0.025;
};

struct CorrectionOptions {
  double extend_step = 0.01;
  double rotate_step = std::numbers::pi / 180.0;
  int max_steps = 15;
  double lift_step = 0.01;
  int max_lift_steps = 5;
};

struct Correction {
  RobotConfig config;
  Pose delta;
  int steps = 0;
  int lift_steps = 0;
};

struct ExecutionResult {
  bool grasped = false;
  int corrections = 0;
  Pose delta;
  int waypoints_executed = 0;
  ObjectState final_opening;
  bool success = false;
  std::optional<int> slip_step;
  std::vector<double> openings;
};

inline double success_threshold(ArticulationType t) {
  return t == ArticulationType::Drawer ? 0.24 : std::numbers::pi / 3.0;
}

/// Rigid transform that realizes `error` for a robot commanded to `base`:
/// maps true world coordinates into the robot's believed frame.
Pose base_error_transform(const RobotConfig& base, const Vec3& base_offset);

/// True params shifted by the handle error.
ArticulationParams believed_params(const ArticulationParams& truth, const ErrorInjection& error);

/// Hinged params with the axis moved so the radius becomes `radius`.
ArticulationParams with_radius(const ArticulationParams& params, double radius);

RobotConfig pre_grasp(const MotionPlan& plan);

/// Signed depth of the fingertip past the true face plane (positive inside).
double surface_depth(const RobotConfig& c, const ArticulationParams& truth,
                     const KinematicModel& model);

/// Creeps toward the true surface until the fingertip crosses it. Drawers,
/// right hinges and ovens extend the arm; left hinges rotate the base.
/// Vertical handles first step the lift toward the believed handle height.
Correction contact_correct(const RobotConfig& pre, const ArticulationParams& believed,
                           const ArticulationParams& truth, const KinematicModel& model,
                           const CorrectionOptions& options = {});

/// Moves the remaining waypoints by `delta` and re-decodes them from the
/// corrected configuration, which becomes the first config of the result.
MotionPlan update_plan(const MotionPlan& plan, const RobotConfig& corrected, const Pose& delta,
                       const Scene& scene, const KinematicModel& model,
                       const SeqIKOptions& options = {});

/// Closes the gripper at configs[0] and drives the true object quasi-statically.
ExecutionResult execute(const MotionPlan& plan, const ArticulationParams& truth,
                        const GraspModel& grasp, const KinematicModel& model);

/// Everything fixed across the trials of one experiment.
struct TrialSetup {
  ArticulationParams truth;
  ObjectGeometry geometry;
  std::vector<OrientedBox> obstacles;
  KinematicModel model;
  /// Base placement relative to the believed handle.
  NavigationTarget target;
  SeqIKOptions seqik;
  int waypoints = 10;
  GraspModel grasp;
  CorrectionOptions correction;
  bool contact_correction = true;
  bool replan_after_correction = false;
};

struct TrialRecord {
  ErrorInjection error;
  int planned = 0;
  int replanned = 0;
  ExecutionResult result;
  /// Name of the error that aborted the trial, if any.
  std::string failure;
};

TrialRecord run_trial(const TrialSetup& setup, const ErrorInjection& error);

struct SweepPoint {
  double delta_radius = 0.0;
  int planned = 0;
  NavigationTarget target;
  ExecutionResult result;
};

std::vector<double> default_radius_deltas();

/// Plans with radius + delta (all else true) and executes against the truth.
/// With `remine`, each perturbed object gets its own mined base placement;
/// otherwise setup.target is used throughout.
std::vector<SweepPoint> radius_sweep(const TrialSetup& setup, const std::vector<double>& deltas,
                                     const std::optional<PlacementGrid>& remine = std::nullopt);

struct AblationArm {
  int successes = 0;
  std::vector<int> histogram;
  std::vector<TrialRecord> trials;

  double rate() const { return trials.empty() ? 0.0 : double(successes) / double(trials.size()); }
};

struct Ablation {
  AblationArm with_correction;
  AblationArm without_correction;
};

/// Paired trials: trial i draws one error from (seed, i) and runs both arms
/// on it, cycling through `setups`.
Ablation ablate_contact_correction(const std::vector<TrialSetup>& setups,
                                   const ErrorDistribution& errors, int trials,
                                   std::uint64_t seed, int workers = 1);

/// Count of trials per number of executed waypoints, 0..n.
std::vector<int> histogram(const std::vector<TrialRecord>& trials, int n);

}  // namespace artopen
