#ifndef VIZPLAN_CLI_CONFIG_H_
#define VIZPLAN_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vizplan/dynamic.h"
#include "vizplan/localplan.h"
#include "vizplan/simworld.h"

// Scenario files: parsing, validation and the resolved echo.
namespace vizplan::cli {

// A plan endpoint given either as a roadmap node or as a configuration.
struct Endpoint {
  std::optional<graph::NodeId> node;
  std::optional<simworld::JointVector> config;
};

// Scripted obstacle motion: obstacle `obstacle` moves by `delta` per step
// during steps [start, start + steps).
struct Motion {
  std::size_t obstacle = 0;
  std::size_t start = 0;
  std::size_t steps = 0;
  Point2 delta;
};

enum class EmbedMethod { kIsomap, kMds };

struct ScenarioConfig {
  std::uint64_t seed = 0;
  simworld::RobotModel robot;
  simworld::Canvas canvas;
  simworld::Scene scene;
  std::size_t samples = 1000;
  std::size_t k = 10;
  std::string metric = "img-l2";
  std::size_t projector_dim = 2000;
  localplan::PlannerKind planner = localplan::PlannerKind::kNone;
  localplan::PlannerOptions planner_options;
  double gold_eps = localplan::kDefaultGoldEps;

  std::optional<Endpoint> start;
  std::optional<Endpoint> goal;

  std::vector<std::string> eval_metrics{"img-l2", "theta-g", "itp-l2", "st-h"};
  std::vector<localplan::PlannerKind> eval_planners{
      localplan::PlannerKind::kNone, localplan::PlannerKind::kLtsIntersection,
      localplan::PlannerKind::kLtsUnion, localplan::PlannerKind::kItp,
      localplan::PlannerKind::kJnst};

  EmbedMethod embed_method = EmbedMethod::kIsomap;
  int embed_dims = 3;
  std::size_t embed_k = 8;

  dynamic::UpdatePolicy policy;
  double max_displacement = 5.0;
  std::vector<Motion> motions;
  std::size_t max_steps = 200;
  bool audit = false;

  std::filesystem::path output_dir = "out";

  // Scenes per time step: the static scene followed by one scene per
  // scripted step. A single scene when there are no motions.
  dynamic::ObstacleTrack track() const;
};

struct ValidationResult {
  std::optional<ScenarioConfig> config;
  std::vector<std::string> violations;  // "path: message", every problem found
  bool ok() const { return config.has_value(); }
};

// Parses and checks a scenario. Every violation is collected rather than
// stopping at the first.
ValidationResult validate_config_text(std::string_view text);
ValidationResult validate_config(const std::filesystem::path& path);

// Fully resolved scenario with every default filled in; keys sorted.
std::string resolved_json(const ScenarioConfig& config);

}  // namespace vizplan::cli

#endif  // VIZPLAN_CLI_CONFIG_H_
