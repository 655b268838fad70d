#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "artopen/execution.hpp"
#include "artopen/miner.hpp"
#include "artopen/perception.hpp"
#include "artopen/planner.hpp"
#include "artopen/scene.hpp"

namespace artopen {

namespace fs = std::filesystem;
using Json = nlohmann::json;

// Rasters: binary PGM, 16-bit samples big-endian.
DepthImage read_depth_pgm(const fs::path& path);
void write_depth_pgm(const fs::path& path, const DepthImage& depth);
Mask2D read_mask_pgm(const fs::path& path);
void write_mask_pgm(const fs::path& path, const Mask2D& mask);
/// 8-bit render of a heatmap, score scaled to 0..255, +y up, +x right.
void write_heatmap_pgm(const fs::path& path, const Heatmap& heatmap);

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);
Json parse_json(const std::string& text, const std::string& what);

// JSON in file units (meters, degrees).
Json to_json(const ArticulationParams& p);
ArticulationParams params_from_json(const Json& j);
Json to_json(const CameraModel& c);
CameraModel camera_from_json(const Json& j);
Json to_json(const NavigationTarget& t);
NavigationTarget target_from_json(const Json& j);
Json to_json(const ExecutionResult& r, ArticulationType type);
ExecutionResult execution_result_from_json(const Json& j, ArticulationType type);
Json to_json(const TrialRecord& r, ArticulationType type);
Json to_json(const Ablation& a, ArticulationType type, std::uint64_t seed);

// CSV with a header row and 9 significant digits.
std::string format_number(double v);
std::string plan_csv(const MotionPlan& plan);
std::vector<RobotConfig> read_plan_csv(const std::string& text);
std::string heatmap_csv(const Heatmap& heatmap);
Heatmap read_heatmap_csv(const std::string& text, int waypoints);
std::string sweep_csv(const std::vector<SweepPoint>& sweep, ArticulationType type);
std::string histogram_csv(const Ablation& ablation);

struct DetectionRefs {
  std::optional<fs::path> depth;
  std::optional<fs::path> mask;
  std::optional<CameraModel> camera;
  std::optional<Vec2> handle_px;
  std::optional<ArticulationType> atype;
  std::optional<HandleOrientation> handle_orientation;
  double score = 1.0;
};

/// Detection block: file paths resolve against `base_dir`; `camera` is a
/// path to a camera JSON or an inline camera object.
DetectionRefs detection_from_json(const Json& j, const fs::path& base_dir);

struct Experiment {
  std::uint64_t seed = 0;
  int trials = 200;
  int waypoints = 10;
  int workers = 1;
  int retries = 0;
  PlacementGrid grid;
  std::optional<NavigationTarget> navigation;
  GraspModel grasp;
  ErrorDistribution errors;
  ErrorInjection injection;
  std::vector<double> radius_deltas = default_radius_deltas();
  bool remine = true;
  bool contact_correction = true;
  bool replan_after_correction = false;
};

struct Scenario {
  std::string name;
  fs::path base_dir;
  std::optional<ArticulationParams> object;
  ObjectGeometry geometry;
  std::optional<DetectionRefs> detection;
  KinematicModel model;
  std::vector<OrientedBox> obstacles;
  Experiment experiment;

  const ArticulationParams& require_object() const;
  SeqIKOptions seqik() const;
};

/// Validates against the schema; unknown keys are rejected.
Scenario scenario_from_json(const Json& j, const fs::path& base_dir = ".");
Scenario load_scenario(const fs::path& path);

std::string sha256_hex(const std::string& bytes);

struct RunManifest {
  std::string tool = "artopen";
  std::string version;
  std::string command;
  std::string input_hash;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::vector<std::string> outputs;
};

/// Hash over the bytes of every input file, in order.
std::string hash_inputs(const std::vector<fs::path>& inputs);
/// UTC ISO-8601; honours SOURCE_DATE_EPOCH for reproducible manifests.
std::string manifest_timestamp();
Json to_json(const RunManifest& m);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace artopen
