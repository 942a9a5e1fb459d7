#ifndef VIZPLAN_GRAPH_H_
#define VIZPLAN_GRAPH_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

// Shared graph machinery: pairwise distances, k-NN graphs, shortest paths.
namespace vizplan::graph {

using NodeId = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Symmetric distances with zero diagonal, stored as the strict upper
// triangle.
class PairwiseDistances {
 public:
  PairwiseDistances() = default;
  explicit PairwiseDistances(std::size_t n) : n_(n), values_(n * (n > 0 ? n - 1 : 0) / 2, 0.0) {}

  // Evaluates dist(i, j) for every i < j on up to `threads` workers. The
  // result does not depend on the worker count.
  static PairwiseDistances compute(std::size_t n, int threads,
                                   const std::function<double(std::size_t, std::size_t)>& dist);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    return values_[index(i, j)];
  }
  void set(std::size_t i, std::size_t j, double d) { values_[index(i, j)] = d; }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

  std::size_t n_ = 0;
  std::vector<double> values_;
};

// The k nearest other nodes of every node, nearest first; equal distances
// are ordered by lower index. Requires n > k.
std::vector<std::vector<NodeId>> knn_lists(const PairwiseDistances& d, std::size_t k);

struct Edge {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  double w = 0.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected edges {i, j} with j in kNN(i) or i in kNN(j), sorted by (u, v).
std::vector<Edge> symmetric_knn_edges(const PairwiseDistances& d, std::size_t k);

struct Neighbor {
  NodeId node = 0;
  double w = 0.0;
};

using Adjacency = std::vector<std::vector<Neighbor>>;

// Adjacency lists sorted by neighbor id.
Adjacency make_adjacency(std::size_t n, std::span<const Edge> edges);

// Single-source shortest path lengths; unreachable nodes get kInfinity.
std::vector<double> dijkstra(const Adjacency& adj, NodeId source);

// Connected components, labelled 0.. in order of their smallest node.
std::vector<int> connected_components(const Adjacency& adj);

// Nodes within `hops` edges of any seed (seeds included), ascending.
std::vector<NodeId> hop_ball(const Adjacency& adj, std::span<const NodeId> seeds, std::size_t hops);

struct Path {
  std::vector<NodeId> nodes;
  double weight = 0.0;
};

// Minimum-weight path; among equal-weight paths the lexicographically
// smallest node sequence. Returns an empty path when t is unreachable.
Path shortest_path(const Adjacency& adj, NodeId s, NodeId t);

}  // namespace vizplan::graph

#endif  // VIZPLAN_GRAPH_H_
