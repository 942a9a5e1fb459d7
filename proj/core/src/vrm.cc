#include "vizplan/vrm.h"

#include <algorithm>
#include <set>
#include <tuple>
#include <utility>

#include "vizplan/errors.h"
#include "vizplan/parallel.h"

namespace vizplan::vrm {

std::vector<RecordPtr> render_records(const simworld::RobotModel& model,
                                      std::span<const simworld::JointVector> configs,
                                      const simworld::Canvas& canvas,
                                      const metrics::Metric* metric, bool with_features,
                                      int threads) {
  std::vector<RecordPtr> out(configs.size());
  parallel_for(configs.size(), threads, [&](std::size_t i) {
    auto record = std::make_shared<simworld::PoseRecord>(
        simworld::fk_render(model, configs[i], canvas));
    if (with_features) record->features = metrics::extract_features(*record);
    if (metric != nullptr) metric->prepare(*record);
    out[i] = std::move(record);
  });
  return out;
}

bool in_collision(const simworld::PoseRecord& record,
                  std::span<const rle::IntervalRle> obstacle_rles) {
  if (record.view_rles.size() != obstacle_rles.size()) {
    throw DomainError("robot and obstacle view counts differ");
  }
  for (std::size_t v = 0; v < obstacle_rles.size(); ++v) {
    if (!rle::collide(record.view_rles[v], obstacle_rles[v])) return false;
  }
  return !obstacle_rles.empty();
}

Vrm Vrm::build(std::vector<RecordPtr> records, std::size_t k, metrics::MetricPtr metric,
               int threads) {
  if (!metric) throw DomainError("roadmap needs a metric");
  const std::size_t n = records.size();
  if (k == 0 || n <= k) throw DomainError("roadmap needs n > k >= 1");
  const auto distances = graph::PairwiseDistances::compute(
      n, threads, [&](std::size_t i, std::size_t j) { return metric->distance(*records[i], *records[j]); });
  return assemble(std::move(records), k, std::move(metric), graph::symmetric_knn_edges(distances, k));
}

Vrm Vrm::assemble(std::vector<RecordPtr> records, std::size_t k, metrics::MetricPtr metric,
                  std::vector<graph::Edge> edges) {
  if (!metric) throw DomainError("roadmap needs a metric");
  const std::size_t n = records.size();
  if (k == 0 || n <= k) throw DomainError("roadmap needs n > k >= 1");
  Vrm g;
  g.k_ = k;
  g.metric_ = std::move(metric);
  g.base_count_ = n;
  g.nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!records[i]) throw DomainError("missing pose record");
    g.nodes_[i].id = static_cast<NodeId>(i);
    g.nodes_[i].record = std::move(records[i]);
  }
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const graph::Edge& edge = edges[e];
    if (edge.u >= edge.v || edge.v >= n) throw DomainError("edge endpoints invalid or unordered");
    if (e > 0 && std::tie(edges[e - 1].u, edges[e - 1].v) >= std::tie(edge.u, edge.v)) {
      throw DomainError("edges duplicated or not sorted");
    }
    if (!(edge.w >= 0)) throw DomainError("edge weight must be non-negative");
    ++degree[edge.u];
    ++degree[edge.v];
    g.edges_.push_back({edge.u, edge.v, edge.w, false, false});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] < k) throw DomainError("node " + std::to_string(i) + " has degree below k");
  }
  g.base_edge_count_ = g.edges_.size();
  g.base_adj_ = graph::make_adjacency(n, edges);
  return g;
}

std::size_t Vrm::active_edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [&](const EdgeState& e) { return is_active(e); }));
}

graph::Adjacency Vrm::active_adjacency() const {
  std::vector<graph::Edge> active;
  active.reserve(edges_.size());
  for (const EdgeState& e : edges_) {
    if (is_active(e)) active.push_back({e.u, e.v, e.w});
  }
  return graph::make_adjacency(nodes_.size(), active);
}

std::vector<NodeId> Vrm::structural_neighbors(NodeId id) const {
  std::vector<NodeId> out;
  if (id < base_count_) {
    for (const graph::Neighbor& nb : base_adj_[id]) out.push_back(nb.node);
  }
  for (std::size_t e = base_edge_count_; e < edges_.size(); ++e) {
    const EdgeState& edge = edges_[e];
    if (edge.u == id) out.push_back(edge.v);
    if (edge.v == id) out.push_back(edge.u);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Vrm::clear_pruning() {
  for (EdgeState& e : edges_) e.pruned = false;
}

NodeId Vrm::insert_endpoint(RecordPtr record, std::span<const rle::IntervalRle> obstacle_rles) {
  if (!record) throw DomainError("missing pose record");
  if (in_collision(*record, obstacle_rles)) {
    throw EndpointBlockedError("endpoint pose collides with the obstacles");
  }
  std::vector<std::pair<double, NodeId>> candidates;
  for (std::size_t i = 0; i < base_count_; ++i) {
    if (nodes_[i].status != NodeStatus::kFree) continue;
    candidates.emplace_back(metric_->distance(*record, *nodes_[i].record), static_cast<NodeId>(i));
  }
  const std::size_t take = std::min(k_, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end());
  const auto id = static_cast<NodeId>(nodes_.size());
  Node node;
  node.id = id;
  node.record = std::move(record);
  node.temporary = true;
  nodes_.push_back(std::move(node));
  for (std::size_t r = 0; r < take; ++r) {
    edges_.push_back({candidates[r].second, id, candidates[r].first, false, true});
  }
  return id;
}

void Vrm::remove_temporary() {
  nodes_.resize(base_count_);
  edges_.resize(base_edge_count_);
}

std::vector<NodeId> mark_collision_nodes(Vrm& vrm, std::span<const rle::IntervalRle> obstacle_rles,
                                         int threads) {
  const std::size_t n = vrm.base_size();
  std::vector<char> hit(n, 0);
  parallel_for(n, threads, [&](std::size_t i) {
    hit[i] = in_collision(vrm.record(static_cast<NodeId>(i)), obstacle_rles) ? 1 : 0;
  });
  std::vector<NodeId> marked;
  for (std::size_t i = 0; i < n; ++i) {
    vrm.set_status(static_cast<NodeId>(i), hit[i] ? NodeStatus::kCollision : NodeStatus::kFree);
    if (hit[i]) marked.push_back(static_cast<NodeId>(i));
  }
  return marked;
}

PathResult shortest_path(const Vrm& vrm, NodeId s, NodeId t) {
  if (s >= vrm.size() || t >= vrm.size()) throw DomainError("path endpoint out of range");
  if (!vrm.is_free(s) || !vrm.is_free(t)) throw DomainError("path endpoints must be free");
  const graph::Path path = graph::shortest_path(vrm.active_adjacency(), s, t);
  PathResult result;
  result.found = !path.nodes.empty();
  result.nodes = path.nodes;
  result.weight = path.weight;
  return result;
}

std::vector<std::string> assign_categories(Vrm& vrm,
                                           const std::map<std::string, std::vector<NodeId>>& exemplars,
                                           std::size_t k_c) {
  if (exemplars.empty()) throw DomainError("no category exemplars");
  if (k_c == 0) throw DomainError("k_c must be positive");
  const std::size_t n = vrm.base_size();
  std::vector<std::optional<std::string>> own(n);
  std::vector<std::pair<NodeId, const std::string*>> pool;
  for (const auto& [label, ids] : exemplars) {
    if (ids.empty()) throw DomainError("category '" + label + "' has no exemplars");
    for (NodeId id : ids) {
      if (id >= n) throw DomainError("exemplar node out of range");
      if (!own[id]) own[id] = label;  // map order: the smaller label wins
      pool.emplace_back(id, &label);
    }
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end(),
                         [](const auto& a, const auto& b) { return a.first == b.first; }),
             pool.end());

  std::vector<std::string> labels(n);
  std::vector<std::tuple<double, NodeId, const std::string*>> ranked;
  for (std::size_t i = 0; i < n; ++i) {
    if (own[i]) {
      labels[i] = *own[i];
    } else {
      ranked.clear();
      for (const auto& [id, label] : pool) {
        ranked.emplace_back(vrm.metric().distance(vrm.record(static_cast<NodeId>(i)), vrm.record(id)),
                            id, label);
      }
      const std::size_t take = std::min(k_c, ranked.size());
      std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end());
      std::map<std::string, std::size_t> votes;
      for (std::size_t r = 0; r < take; ++r) ++votes[*std::get<2>(ranked[r])];
      auto best = votes.begin();
      for (auto it = votes.begin(); it != votes.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      labels[i] = best->first;
    }
    vrm.set_category(static_cast<NodeId>(i), labels[i]);
  }
  return labels;
}

std::map<std::string, double> category_distribution(std::span<const std::optional<std::string>> labels) {
  std::vector<std::string> plain;
  plain.reserve(labels.size());
  for (const auto& l : labels) {
    if (!l) throw DomainError("unlabeled node in category distribution");
    plain.push_back(*l);
  }
  return category_distribution(std::span<const std::string>(plain));
}

std::map<std::string, double> category_distribution(std::span<const std::string> labels) {
  if (labels.empty()) throw DomainError("category distribution of an empty labeling");
  std::map<std::string, std::size_t> counts;
  for (const std::string& l : labels) ++counts[l];
  std::map<std::string, double> out;
  for (const auto& [label, c] : counts) {
    out[label] = static_cast<double>(c) / static_cast<double>(labels.size());
  }
  return out;
}

}  // namespace vizplan::vrm
