#include "vizplan/graph.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

#include "vizplan/errors.h"
#include "vizplan/parallel.h"

namespace vizplan::graph {

PairwiseDistances PairwiseDistances::compute(
    std::size_t n, int threads, const std::function<double(std::size_t, std::size_t)>& dist) {
  PairwiseDistances out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) out.values_[out.index(i, j)] = dist(i, j);
  });
  return out;
}

std::vector<std::vector<NodeId>> knn_lists(const PairwiseDistances& d, std::size_t k) {
  const std::size_t n = d.size();
  if (k == 0 || n <= k) throw DomainError("k-NN requires n > k >= 1");
  std::vector<std::vector<NodeId>> lists(n);
  std::vector<std::pair<double, NodeId>> row;
  row.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.emplace_back(d(i, j), static_cast<NodeId>(j));
    }
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    lists[i].reserve(k);
    for (std::size_t r = 0; r < k; ++r) lists[i].push_back(row[r].second);
  }
  return lists;
}

std::vector<Edge> symmetric_knn_edges(const PairwiseDistances& d, std::size_t k) {
  const auto lists = knn_lists(d, k);
  std::vector<Edge> edges;
  edges.reserve(lists.size() * k);
  for (std::size_t i = 0; i < lists.size(); ++i) {
    for (NodeId j : lists[i]) {
      const NodeId u = std::min<NodeId>(static_cast<NodeId>(i), j);
      const NodeId v = std::max<NodeId>(static_cast<NodeId>(i), j);
      edges.push_back({u, v, d(u, v)});
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }),
              edges.end());
  return edges;
}

Adjacency make_adjacency(std::size_t n, std::span<const Edge> edges) {
  Adjacency adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
  return adj;
}

std::vector<double> dijkstra(const Adjacency& adj, NodeId source) {
  std::vector<double> dist(adj.size(), kInfinity);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const Neighbor& nb : adj[u]) {
      const double nd = d + nb.w;
      if (nd < dist[nb.node]) {
        dist[nb.node] = nd;
        queue.emplace(nd, nb.node);
      }
    }
  }
  return dist;
}

std::vector<int> connected_components(const Adjacency& adj) {
  std::vector<int> label(adj.size(), -1);
  int next = 0;
  std::vector<NodeId> stack;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.assign(1, static_cast<NodeId>(s));
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : adj[u]) {
        if (label[nb.node] < 0) {
          label[nb.node] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return label;
}

std::vector<NodeId> hop_ball(const Adjacency& adj, std::span<const NodeId> seeds, std::size_t hops) {
  std::vector<std::size_t> depth(adj.size(), static_cast<std::size_t>(-1));
  std::vector<NodeId> frontier;
  for (NodeId s : seeds) {
    if (depth[s] != 0) {
      depth[s] = 0;
      frontier.push_back(s);
    }
  }
  for (std::size_t level = 0; level < hops && !frontier.empty(); ++level) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (const Neighbor& nb : adj[u]) {
        if (depth[nb.node] == static_cast<std::size_t>(-1)) {
          depth[nb.node] = level + 1;
          next.push_back(nb.node);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (depth[i] != static_cast<std::size_t>(-1)) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

namespace {

bool tight(double lhs, double rhs) {
  return std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs));
}

Path predecessor_path(const Adjacency& adj, NodeId s, NodeId t) {
  std::vector<double> dist(adj.size(), kInfinity);
  std::vector<NodeId> pred(adj.size(), s);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[s] = 0.0;
  queue.emplace(0.0, s);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const Neighbor& nb : adj[u]) {
      if (d + nb.w < dist[nb.node]) {
        dist[nb.node] = d + nb.w;
        pred[nb.node] = u;
        queue.emplace(dist[nb.node], nb.node);
      }
    }
  }
  Path path;
  if (dist[t] == kInfinity) return path;
  for (NodeId c = t; c != s; c = pred[c]) path.nodes.push_back(c);
  path.nodes.push_back(s);
  std::reverse(path.nodes.begin(), path.nodes.end());
  path.weight = dist[t];
  return path;
}

}  // namespace

Path shortest_path(const Adjacency& adj, NodeId s, NodeId t) {
  if (s >= adj.size() || t >= adj.size()) throw DomainError("path endpoint out of range");
  Path path;
  if (s == t) {
    path.nodes = {s};
    return path;
  }
  const std::vector<double> to_t = dijkstra(adj, t);
  if (to_t[s] == kInfinity) return path;

  // Greedy walk along tight edges, smallest id first, yields the
  // lexicographically smallest shortest path.
  std::vector<char> visited(adj.size(), 0);
  NodeId c = s;
  visited[c] = 1;
  path.nodes.push_back(c);
  while (c != t) {
    bool advanced = false;
    for (const Neighbor& nb : adj[c]) {
      if (visited[nb.node] || to_t[nb.node] == kInfinity) continue;
      if (tight(nb.w + to_t[nb.node], to_t[c])) {
        path.weight += nb.w;
        c = nb.node;
        visited[c] = 1;
        path.nodes.push_back(c);
        advanced = true;
        break;
      }
    }
    // Only reachable through zero-weight cycles; fall back to plain Dijkstra.
    if (!advanced) return predecessor_path(adj, s, t);
  }
  return path;
}

}  // namespace vizplan::graph
