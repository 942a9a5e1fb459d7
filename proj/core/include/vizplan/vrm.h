#ifndef VIZPLAN_VRM_H_
#define VIZPLAN_VRM_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vizplan/graph.h"
#include "vizplan/metrics.h"
#include "vizplan/rle.h"
#include "vizplan/simworld.h"

// Visual roadmap: a k-NN graph over rendered poses.
namespace vizplan::vrm {

using graph::NodeId;
using simworld::RecordPtr;

enum class NodeStatus { kFree, kCollision };

struct Node {
  NodeId id = 0;
  RecordPtr record;
  NodeStatus status = NodeStatus::kFree;
  std::optional<std::string> category;
  bool temporary = false;
};

struct EdgeState {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  double w = 0.0;
  bool pruned = false;    // rejected by a local planner
  bool temporary = false;  // touches an endpoint node
};

// Renders every configuration and attaches what `metric` needs (and corner
// features when `with_features` is set). Order follows `configs`.
std::vector<RecordPtr> render_records(const simworld::RobotModel& model,
                                      std::span<const simworld::JointVector> configs,
                                      const simworld::Canvas& canvas,
                                      const metrics::Metric* metric, bool with_features,
                                      int threads = 1);

// Collision under the multi-view rule: the robot overlaps the obstacle in
// every view. Throws DomainError when the view counts differ.
bool in_collision(const simworld::PoseRecord& record,
                  std::span<const rle::IntervalRle> obstacle_rles);

class Vrm {
 public:
  Vrm() = default;

  // Symmetric k-NN graph over the records. Requires n > k >= 1.
  static Vrm build(std::vector<RecordPtr> records, std::size_t k, metrics::MetricPtr metric,
                   int threads = 1);
  // Reassembles a graph from stored parts (used by import); validates the
  // structural invariants.
  static Vrm assemble(std::vector<RecordPtr> records, std::size_t k, metrics::MetricPtr metric,
                      std::vector<graph::Edge> edges);

  std::size_t size() const { return nodes_.size(); }
  std::size_t base_size() const { return base_count_; }
  std::size_t k() const { return k_; }
  const metrics::Metric& metric() const { return *metric_; }
  const metrics::MetricPtr& metric_ptr() const { return metric_; }

  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const EdgeState> edges() const { return edges_; }
  const simworld::PoseRecord& record(NodeId id) const { return *nodes_.at(id).record; }

  bool is_free(NodeId id) const { return nodes_.at(id).status == NodeStatus::kFree; }
  // Not pruned and both endpoints free.
  bool is_active(const EdgeState& e) const {
    return !e.pruned && is_free(e.u) && is_free(e.v);
  }
  std::size_t active_edge_count() const;

  // Pre-pruning adjacency over base nodes, independent of node status.
  const graph::Adjacency& base_adjacency() const { return base_adj_; }
  // Adjacency over active edges (base and temporary).
  graph::Adjacency active_adjacency() const;
  // Neighbors over every edge regardless of pruning and node status,
  // excluding `id` itself.
  std::vector<NodeId> structural_neighbors(NodeId id) const;

  void set_status(NodeId id, NodeStatus status) { nodes_.at(id).status = status; }
  void set_pruned(std::size_t edge_index, bool pruned) { edges_.at(edge_index).pruned = pruned; }
  void clear_pruning();
  void set_category(NodeId id, std::optional<std::string> label) {
    nodes_.at(id).category = std::move(label);
  }

  // Adds a temporary node joined to its k nearest free base nodes. Throws
  // EndpointBlockedError when the record collides with the obstacles.
  NodeId insert_endpoint(RecordPtr record, std::span<const rle::IntervalRle> obstacle_rles);
  // Drops every temporary node and edge.
  void remove_temporary();

 private:
  std::vector<Node> nodes_;
  std::vector<EdgeState> edges_;
  std::size_t base_count_ = 0;
  std::size_t base_edge_count_ = 0;
  std::size_t k_ = 0;
  metrics::MetricPtr metric_;
  graph::Adjacency base_adj_;
};

// Sets every base node's status from the obstacle and returns the nodes
// marked collision, ascending.
std::vector<NodeId> mark_collision_nodes(Vrm& vrm, std::span<const rle::IntervalRle> obstacle_rles,
                                         int threads = 1);

struct PathResult {
  bool found = false;
  std::vector<NodeId> nodes;
  double weight = 0.0;
  std::vector<bool> edge_safe;  // per consecutive pair, filled by callers that score paths
};

// Shortest path over active edges. Throws DomainError if s or t is not free.
PathResult shortest_path(const Vrm& vrm, NodeId s, NodeId t);

// Majority label among the k_c nearest exemplars (ties: lower node id for
// neighbors, lexicographically smaller label for votes). Exemplars keep
// their own label. Stores the labels on the nodes and returns them.
std::vector<std::string> assign_categories(Vrm& vrm,
                                           const std::map<std::string, std::vector<NodeId>>& exemplars,
                                           std::size_t k_c);

// Fraction of nodes per label. Throws DomainError on an unlabeled node.
std::map<std::string, double> category_distribution(std::span<const std::optional<std::string>> labels);
std::map<std::string, double> category_distribution(std::span<const std::string> labels);

}  // namespace vizplan::vrm

#endif  // VIZPLAN_VRM_H_
