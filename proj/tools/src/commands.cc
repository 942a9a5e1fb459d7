#include "vizplan_cli/commands.h"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "vizplan/io.h"
#include "vizplan/manifold.h"
#include "vizplan/random.h"

namespace vizplan::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint8_t kObstacleShade = 80;
constexpr std::uint8_t kTrailShade = 150;
constexpr std::uint8_t kRobotShade = 255;

fs::path output_root(const ScenarioConfig& config, const CommandOptions& options) {
  return options.output_dir.empty() ? config.output_dir : options.output_dir;
}

metrics::MetricPtr scenario_metric(const ScenarioConfig& config, const std::string& name) {
  metrics::MetricOptions opts;
  opts.projector_seed = derive_seed(config.seed, "projector");
  opts.projector_dim = config.projector_dim;
  opts.input_dim = static_cast<std::size_t>(config.canvas.width) *
                   static_cast<std::size_t>(config.canvas.height) * config.canvas.views.size();
  return metrics::make_metric(name, opts);
}

std::vector<simworld::JointVector> scenario_configs(const ScenarioConfig& config) {
  return simworld::sample_configs(config.robot, config.samples, derive_seed(config.seed, "sampling"));
}

std::vector<simworld::RecordPtr> scenario_records(const ScenarioConfig& config, const metrics::Metric& metric,
                                                  int threads) {
  const auto configs = scenario_configs(config);
  return vrm::render_records(config.robot, configs, config.canvas, &metric, true, threads);
}

std::vector<rle::IntervalRle> rles_of(const simworld::ObstacleField& field) {
  return {field.rles().begin(), field.rles().end()};
}

// Pixels of `mask` with at least one 4-neighbor outside it.
BinaryImage outline(const BinaryImage& mask) {
  BinaryImage out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.get(x, y)) continue;
      const bool edge = x == 0 || y == 0 || x + 1 == mask.width() || y + 1 == mask.height() ||
                        !mask.get(x - 1, y) || !mask.get(x + 1, y) || !mask.get(x, y - 1) ||
                        !mask.get(x, y + 1);
      if (edge) out.set(x, y);
    }
  }
  return out;
}

std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu.pgm", i);
  return buf;
}

void print_summary(std::ostream& out, const std::string& command, const std::vector<fs::path>& artifacts,
                   json extra = json::object()) {
  extra["command"] = command;
  json list = json::array();
  for (const auto& p : artifacts) list.push_back(p.generic_string());
  extra["artifacts"] = list;
  out << extra.dump() << "\n";
}

struct Roadmap {
  metrics::MetricPtr metric;
  vrm::Vrm graph;
  simworld::ObstacleField field;
  std::vector<rle::IntervalRle> rles;
};

// Samples, renders and links the roadmap, then marks collision nodes
// against the static scene.
Roadmap build_roadmap(const ScenarioConfig& config, int threads) {
  Roadmap r;
  r.metric = scenario_metric(config, config.metric);
  r.graph = vrm::Vrm::build(scenario_records(config, *r.metric, threads), config.k, r.metric, threads);
  r.field = simworld::ObstacleField(config.scene, config.canvas);
  r.rles = rles_of(r.field);
  vrm::mark_collision_nodes(r.graph, r.rles, threads);
  return r;
}

simworld::RecordPtr endpoint_record(const ScenarioConfig& config, const metrics::Metric& metric,
                                    const simworld::JointVector& q) {
  auto record = std::make_shared<simworld::PoseRecord>(
      simworld::fk_render(config.robot, simworld::normalize_config(config.robot, q), config.canvas));
  record->features = metrics::extract_features(*record);
  metric.prepare(*record);
  return record;
}

const Endpoint& require_endpoint(const std::optional<Endpoint>& e, const char* name, const char* command) {
  if (!e) throw UsageError(std::string(command) + " needs '" + name + "' in the scenario");
  return *e;
}

// Nearest base node under the roadmap metric; ties go to the smaller id.
graph::NodeId nearest_node(const vrm::Vrm& g, const simworld::PoseRecord& record) {
  graph::NodeId best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.base_size(); ++i) {
    const double d = g.metric().distance(record, g.record(static_cast<graph::NodeId>(i)));
    if (d < best_d) {
      best_d = d;
      best = static_cast<graph::NodeId>(i);
    }
  }
  return best;
}

}  // namespace

int run_sample(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out) {
  const auto metric = scenario_metric(config, config.metric);
  const auto records = scenario_records(config, *metric, options.threads);
  const fs::path dir = output_root(config, options) / "dataset";
  io::write_dataset(dir, records);
  print_summary(out, "sample", {dir / "manifest.json"}, {{"count", records.size()}});
  return kExitOk;
}

int run_build(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out) {
  Roadmap r = build_roadmap(config, options.threads);
  localplan::GoldOracle gold(config.robot, config.canvas, r.field, config.gold_eps);
  const std::size_t pruned =
      localplan::prune_edges(r.graph, config.planner, r.rles, gold, config.planner_options, options.threads);
  const fs::path file = output_root(config, options) / "vrm.json";
  io::write_file(file, io::vrm_to_json(r.graph));
  print_summary(out, "build", {file},
                {{"nodes", r.graph.base_size()}, {"edges", r.graph.edges().size()}, {"pruned", pruned}});
  return kExitOk;
}

int run_plan(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out) {
  const Endpoint& start = require_endpoint(config.start, "start", "plan");
  const Endpoint& goal = require_endpoint(config.goal, "goal", "plan");
  Roadmap r = build_roadmap(config, options.threads);
  localplan::GoldOracle gold(config.robot, config.canvas, r.field, config.gold_eps);
  localplan::prune_edges(r.graph, config.planner, r.rles, gold, config.planner_options, options.threads);

  auto resolve = [&](const Endpoint& e) -> graph::NodeId {
    if (e.node) {
      if (!r.graph.is_free(*e.node)) {
        throw EndpointBlockedError("node " + std::to_string(*e.node) + " collides with the obstacles");
      }
      return *e.node;
    }
    return r.graph.insert_endpoint(endpoint_record(config, *r.metric, *e.config), r.rles);
  };
  const graph::NodeId s = resolve(start);
  const graph::NodeId t = resolve(goal);
  localplan::prune_edges(r.graph, config.planner, r.rles, gold, config.planner_options, options.threads,
                         /*temporary_only=*/true);

  const fs::path root = output_root(config, options);
  vrm::PathResult path = vrm::shortest_path(r.graph, s, t);
  if (!path.found) {
    const std::string doc = io::no_path_json(s, t);
    io::write_file(root / "path.json", doc);
    out << doc;
    return kExitNoPath;
  }
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    const auto& qu = r.graph.record(path.nodes[i]).config;
    const auto& qv = r.graph.record(path.nodes[i + 1]).config;
    path.edge_safe.push_back(gold.check(qu, qv).safe);
  }
  std::vector<fs::path> artifacts{root / "path.json"};
  io::write_file(root / "path.json", io::path_json(r.graph, path));

  // One frame per path node: obstacles, outlines of the poses already
  // visited, and the current pose.
  const simworld::Canvas& canvas = config.canvas;
  GrayImage trail(canvas.width, canvas.height);
  trail.paint(r.field.mask(0), kObstacleShade);
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    const BinaryImage& pose = r.graph.record(path.nodes[i]).views[0];
    GrayImage frame = trail;
    frame.paint(pose, kRobotShade);
    const fs::path file = root / "frames" / frame_name(i);
    io::write_file(file, io::encode_pgm(frame));
    artifacts.push_back(file);
    trail.paint(outline(pose), kTrailShade);
  }
  io::write_file(root / "path.pgm", io::encode_pgm(trail));
  artifacts.push_back(root / "path.pgm");
  print_summary(out, "plan", artifacts,
                {{"found", true}, {"length", path.nodes.size()}, {"weight", path.weight}});
  return kExitOk;
}

int run_eval(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out) {
  const simworld::ObstacleField field(config.scene, config.canvas);
  const auto rles = rles_of(field);
  // Node ids denote the same configurations under every metric, so one
  // oracle cache serves the whole sweep.
  localplan::GoldOracle gold(config.robot, config.canvas, field, config.gold_eps);
  std::vector<localplan::PruneStats> rows;
  for (const std::string& name : config.eval_metrics) {
    const auto metric = scenario_metric(config, name);
    vrm::Vrm g = vrm::Vrm::build(scenario_records(config, *metric, options.threads), config.k, metric,
                                 options.threads);
    vrm::mark_collision_nodes(g, rles, options.threads);
    for (localplan::PlannerKind planner : config.eval_planners) {
      g.clear_pruning();
      rows.push_back(
          localplan::prune_and_score(g, planner, rles, gold, config.planner_options, options.threads));
    }
  }
  const fs::path file = output_root(config, options) / "stats.csv";
  io::write_file(file, io::stats_csv(rows));
  print_summary(out, "eval", {file}, {{"rows", rows.size()}});
  return kExitOk;
}

int run_embed(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out) {
  const auto metric = scenario_metric(config, config.metric);
  const auto records = scenario_records(config, *metric, options.threads);
  manifold::Embedding embedding;
  std::vector<graph::NodeId> ids;
  if (config.embed_method == EmbedMethod::kIsomap) {
    manifold::IsomapResult result =
        manifold::isomap(records, config.embed_k, config.embed_dims, *metric, options.threads);
    embedding = std::move(result.embedding);
    ids = std::move(result.kept);
  } else {
    const auto distances = graph::PairwiseDistances::compute(
        records.size(), options.threads,
        [&](std::size_t i, std::size_t j) { return metric->distance(*records[i], *records[j]); });
    const manifold::Matrix d = manifold::to_matrix(distances);
    embedding = manifold::mds(d, config.embed_dims);
    std::vector<int> dims(static_cast<std::size_t>(config.embed_dims));
    for (int i = 0; i < config.embed_dims; ++i) dims[static_cast<std::size_t>(i)] = i + 1;
    embedding.residual_variances = manifold::residual_variance(d, embedding, dims);
    for (std::size_t i = 0; i < records.size(); ++i) ids.push_back(static_cast<graph::NodeId>(i));
  }
  const fs::path root = output_root(config, options);
  io::write_file(root / "embedding.csv", io::embedding_csv(embedding, ids));
  io::write_file(root / "residuals.csv", io::residual_csv(embedding.residual_variances));
  print_summary(out, "embed", {root / "embedding.csv", root / "residuals.csv"},
                {{"points", ids.size()}, {"dropped", records.size() - ids.size()}});
  return kExitOk;
}

int run_dynamic(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out) {
  const Endpoint& start = require_endpoint(config.start, "start", "dynamic");
  const Endpoint& goal = require_endpoint(config.goal, "goal", "dynamic");
  const auto metric = scenario_metric(config, config.metric);
  vrm::Vrm g = vrm::Vrm::build(scenario_records(config, *metric, options.threads), config.k, metric,
                               options.threads);
  auto resolve = [&](const Endpoint& e) {
    return e.node ? *e.node : nearest_node(g, *endpoint_record(config, *metric, *e.config));
  };
  const graph::NodeId s = resolve(start);
  const graph::NodeId t = resolve(goal);
  const dynamic::ObstacleTrack track = config.track();

  dynamic::RunOptions run_options;
  run_options.policy = config.policy;
  run_options.max_steps = config.max_steps;
  run_options.audit = config.audit;
  run_options.threads = options.threads;
  const dynamic::SimTrace trace = dynamic::run(g, config.canvas, track, s, t, run_options);

  const fs::path root = output_root(config, options);
  std::vector<fs::path> artifacts{root / "trace.json"};
  io::write_file(root / "trace.json", io::trace_json(trace));
  std::map<std::size_t, BinaryImage> scene_masks;
  for (std::size_t i = 0; i < trace.frames.size(); ++i) {
    const dynamic::Frame& f = trace.frames[i];
    auto it = scene_masks.find(f.scene);
    if (it == scene_masks.end()) {
      it = scene_masks.emplace(f.scene, simworld::render_obstacles(track.scenes[f.scene], config.canvas, 0)).first;
    }
    GrayImage frame(config.canvas.width, config.canvas.height);
    frame.paint(it->second, kObstacleShade);
    frame.paint(g.record(f.node).views[0], kRobotShade);
    const fs::path file = root / "dynamic_frames" / frame_name(i);
    io::write_file(file, io::encode_pgm(frame));
    artifacts.push_back(file);
  }
  print_summary(out, "dynamic", artifacts,
                {{"reached", trace.reached}, {"steps", trace.frames.size()}, {"start", s}, {"goal", t}});
  return trace.reached ? kExitOk : kExitNoPath;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vision-only motion planning on rendered pose images"};
  app.require_subcommand(1);
  std::string config_path;
  CommandOptions options;
  std::string output_dir;

  using Runner = std::function<int(const ScenarioConfig&, const CommandOptions&, std::ostream&)>;
  const std::vector<std::tuple<const char*, const char*, Runner>> commands{
      {"validate", "Check a scenario and print it with defaults filled in",
       [](const ScenarioConfig& c, const CommandOptions&, std::ostream& o) {
         o << resolved_json(c);
         return kExitOk;
       }},
      {"sample", "Render sampled poses to a PBM dataset with a manifest", run_sample},
      {"build", "Build the roadmap and write vrm.json", run_build},
      {"plan", "Plan from start to goal; write path.json and frames", run_plan},
      {"eval", "Score metrics x local planners against the gold oracle", run_eval},
      {"embed", "Export a low-dimensional embedding and residual variances", run_embed},
      {"dynamic", "Simulate replanning while obstacles move", run_dynamic},
  };
  std::map<std::string, Runner> runners;
  for (const auto& [name, help, runner] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "Scenario file (JSON)")->required();
    sub->add_option("--threads,-j", options.threads, "Worker cap (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--output-dir,-o", output_dir, "Override the scenario output directory");
    runners[name] = runner;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << io::error_json("usage", e.what()) << "\n";
    return kExitBadConfig;
  }
  options.output_dir = output_dir;

  const ValidationResult validated = validate_config(config_path);
  if (!validated.ok()) {
    json doc;
    doc["error"] = "config";
    doc["violations"] = validated.violations;
    err << doc.dump() << "\n";
    return kExitBadConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return runners.at(command)(*validated.config, options, out);
  } catch (const UsageError& e) {
    err << io::error_json(e.kind(), e.what()) << "\n";
    return kExitBadConfig;
  } catch (const Error& e) {
    err << io::error_json(e.kind(), e.what()) << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << io::error_json("internal", e.what()) << "\n";
    return kExitError;
  }
}

}  // namespace vizplan::cli
