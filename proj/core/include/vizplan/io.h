#ifndef VIZPLAN_IO_H_
#define VIZPLAN_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vizplan/dynamic.h"
#include "vizplan/localplan.h"
#include "vizplan/manifold.h"
#include "vizplan/vrm.h"

// File formats: PBM/PGM rasters, dataset manifests, roadmap JSON, CSV and
// JSON run artifacts. All writers are byte-deterministic.
namespace vizplan::io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

// Binary PBM (P4) and PGM (P5, maxval 255).
std::string encode_pbm(const BinaryImage& image);
BinaryImage decode_pbm(std::string_view bytes);
std::string encode_pgm(const GrayImage& image);
GrayImage decode_pgm(std::string_view bytes);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

struct DatasetEntry {
  simworld::JointVector config;
  std::vector<Point2> tracked;
  std::vector<BinaryImage> views;
};

// Writes pose_NNNNN[_vV].pbm files and manifest.json (index -> config,
// tracked points, per-view RLE text) under `dir`.
void write_dataset(const std::filesystem::path& dir, std::span<const simworld::RecordPtr> records);
// Reads a dataset back; the PBM files must agree with the manifest RLEs.
std::vector<DatasetEntry> read_dataset(const std::filesystem::path& dir);

// Base nodes only: {k, metric, nodes: [{id, status, config, category}],
// edges: [{i, j, w, pruned}]}.
std::string vrm_to_json(const vrm::Vrm& vrm);

struct VrmImportOptions {
  bool verify_knn = true;  // recompute the k-NN edge set and compare
  int threads = 1;
};

// Re-renders the stored configurations and rebuilds the roadmap. Throws
// FormatError when any stored invariant is violated (ids, statuses, edge
// order, weights that disagree with the metric, k-NN rule).
vrm::Vrm vrm_from_json(std::string_view text, const simworld::RobotModel& model,
                       const simworld::Canvas& canvas, metrics::MetricPtr metric,
                       const VrmImportOptions& options = {});

// metric,planner,n,k,edges_total,edges_pruned,bad_remaining_pct,conservative_discards
std::string stats_csv(std::span<const localplan::PruneStats> rows);

// node_id,y1..yp
std::string embedding_csv(const manifold::Embedding& embedding, std::span<const graph::NodeId> ids);
// dim,residual
std::string residual_csv(std::span<const double> residuals);

std::string path_json(const vrm::Vrm& vrm, const vrm::PathResult& path);
std::string no_path_json(graph::NodeId s, graph::NodeId t);
std::string trace_json(const dynamic::SimTrace& trace);
// {"error": kind, "message": what}
std::string error_json(std::string_view kind, std::string_view message);

}  // namespace vizplan::io

#endif  // VIZPLAN_IO_H_
