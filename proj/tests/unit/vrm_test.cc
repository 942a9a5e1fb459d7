#include <gtest/gtest.h>

#include <numeric>

#include "oracles.h"
#include "vizplan/errors.h"
#include "vizplan/vrm.h"

namespace vizplan::vrm {
namespace {

using simworld::Canvas;
using simworld::RobotModel;

struct Fixture {
  RobotModel model = RobotModel::arm({20, 14}, {3, 3}, {50, 50});
  Canvas canvas;
  metrics::MetricPtr metric = metrics::make_metric("theta-g");
  std::vector<RecordPtr> records;

  explicit Fixture(std::size_t n) {
    const auto configs = simworld::sample_configs(model, n, 21);
    records = render_records(model, configs, canvas, metric.get(), false);
  }
  std::vector<rle::IntervalRle> obstacle(const simworld::Scene& scene) const {
    const simworld::ObstacleField f(scene, canvas);
    return {f.rles().begin(), f.rles().end()};
  }
};

simworld::Scene wall() {
  simworld::Scene s;
  s.obstacles.push_back(simworld::Shape::rect(70, 30, 74, 70));
  return s;
}

TEST(Vrm, BuildMatchesKnnOracle) {
  Fixture f(50);
  const Vrm g = Vrm::build(f.records, 4, f.metric);
  std::vector<std::vector<double>> d(50, std::vector<double>(50));
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t j = 0; j < 50; ++j) d[i][j] = f.metric->distance(*f.records[i], *f.records[j]);
  }
  const auto expected = oracle::knn_pairs(d, 4);
  ASSERT_EQ(g.edges().size(), expected.size());
  for (std::size_t e = 0; e < expected.size(); ++e) {
    EXPECT_EQ(g.edges()[e].u, expected[e].first);
    EXPECT_EQ(g.edges()[e].v, expected[e].second);
  }
  EXPECT_EQ(g.active_edge_count(), expected.size());
}

TEST(Vrm, AssembleRejectsBrokenStructure) {
  Fixture f(5);
  std::vector<graph::Edge> full;
  for (graph::NodeId u = 0; u < 5; ++u) {
    for (graph::NodeId v = u + 1; v < 5; ++v) full.push_back({u, v, 1.0});
  }
  EXPECT_NO_THROW(Vrm::assemble(f.records, 2, f.metric, full));
  auto unsorted = full;
  std::swap(unsorted[0], unsorted[1]);
  EXPECT_THROW(Vrm::assemble(f.records, 2, f.metric, unsorted), DomainError);
  auto negative = full;
  negative[3].w = -1;
  EXPECT_THROW(Vrm::assemble(f.records, 2, f.metric, negative), DomainError);
  const std::vector<graph::Edge> sparse{{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}};
  EXPECT_THROW(Vrm::assemble(f.records, 2, f.metric, sparse), DomainError);
  EXPECT_THROW(Vrm::build(f.records, 5, f.metric), DomainError);
}

TEST(Vrm, CollisionNeedsEveryView) {
  const BinaryImage robot = [] {
    BinaryImage b(10, 10);
    b.fill_span(5, 0, 10);
    return b;
  }();
  BinaryImage hit(10, 10), miss(10, 10);
  hit.set(3, 5);
  miss.set(3, 2);
  simworld::PoseRecord rec;
  rec.view_rles = {rle::encode(robot), rle::encode(robot)};
  const std::vector<rle::IntervalRle> both{rle::encode(hit), rle::encode(hit)};
  const std::vector<rle::IntervalRle> one{rle::encode(hit), rle::encode(miss)};
  EXPECT_TRUE(in_collision(rec, both));
  EXPECT_FALSE(in_collision(rec, one));
  EXPECT_THROW(in_collision(rec, std::span<const rle::IntervalRle>(both).first(1)), DomainError);
  simworld::PoseRecord none;
  EXPECT_FALSE(in_collision(none, {}));
}

TEST(Vrm, MarkingMatchesPerNodeCheckAndThreads) {
  Fixture f(120);
  const auto rles = f.obstacle(wall());
  Vrm a = Vrm::build(f.records, 5, f.metric, 1);
  Vrm b = Vrm::build(f.records, 5, f.metric, 3);
  const auto marked_a = mark_collision_nodes(a, rles, 1);
  const auto marked_b = mark_collision_nodes(b, rles, 3);
  EXPECT_EQ(marked_a, marked_b);
  EXPECT_FALSE(marked_a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto id = static_cast<NodeId>(i);
    EXPECT_EQ(a.is_free(id), oracle::and_count(a.record(id).views[0], simworld::ObstacleField(wall(), f.canvas).mask(0)) == 0);
  }
  for (const auto& e : a.edges()) {
    EXPECT_EQ(a.is_active(e), a.is_free(e.u) && a.is_free(e.v));
  }
  const auto adj = a.active_adjacency();
  for (NodeId id : marked_a) EXPECT_TRUE(adj[id].empty());
  EXPECT_THROW(shortest_path(a, marked_a.front(), 0), DomainError);
}

TEST(Vrm, StructuralNeighborsIgnoreStatusAndPruning) {
  Fixture f(40);
  Vrm g = Vrm::build(f.records, 4, f.metric);
  const auto before = g.structural_neighbors(0);
  g.set_status(before.front(), NodeStatus::kCollision);
  for (std::size_t e = 0; e < g.edges().size(); ++e) g.set_pruned(e, true);
  EXPECT_EQ(g.structural_neighbors(0), before);
  EXPECT_EQ(g.active_edge_count(), 0u);
  g.clear_pruning();
  EXPECT_GT(g.active_edge_count(), 0u);
}

TEST(Vrm, EndpointInsertionAndRemoval) {
  Fixture f(80);
  const auto rles = f.obstacle(wall());
  Vrm g = Vrm::build(f.records, 5, f.metric);
  mark_collision_nodes(g, rles);
  const std::size_t edges = g.edges().size();
  const auto rec = std::make_shared<simworld::PoseRecord>(
      simworld::fk_render(f.model, simworld::JointVector{3.0, 0.2}, f.canvas));
  const NodeId t = g.insert_endpoint(rec, rles);
  EXPECT_EQ(t, 80u);
  EXPECT_TRUE(g.node(t).temporary);
  EXPECT_EQ(g.edges().size(), edges + 5);

  // The k nearest free base nodes, by brute force.
  std::vector<std::pair<double, NodeId>> free;
  for (NodeId i = 0; i < 80; ++i) {
    if (g.is_free(i)) free.emplace_back(f.metric->distance(*rec, g.record(i)), i);
  }
  std::sort(free.begin(), free.end());
  for (std::size_t r = 0; r < 5; ++r) EXPECT_EQ(g.edges()[edges + r].u, free[r].second);

  const auto blocked = std::make_shared<simworld::PoseRecord>(
      simworld::fk_render(f.model, simworld::JointVector{0.0, 0.0}, f.canvas));
  EXPECT_THROW(g.insert_endpoint(blocked, rles), EndpointBlockedError);

  g.remove_temporary();
  EXPECT_EQ(g.size(), 80u);
  EXPECT_EQ(g.edges().size(), edges);
}

TEST(Vrm, CategoriesByMajorityVote) {
  Fixture f(30);
  Vrm g = Vrm::build(f.records, 3, f.metric);
  const std::map<std::string, std::vector<NodeId>> exemplars{{"a", {0, 1, 2}}, {"b", {3, 4}}};
  const auto labels = assign_categories(g, exemplars, 3);
  EXPECT_EQ(labels[0], "a");
  EXPECT_EQ(labels[4], "b");
  for (std::size_t i = 5; i < 30; ++i) {
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& [label, ids] : exemplars) {
      for (NodeId id : ids) ranked.emplace_back(f.metric->distance(g.record(static_cast<NodeId>(i)), g.record(id)), label);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    int a = 0;
    for (int r = 0; r < 3; ++r) a += ranked[r].second == "a" ? 1 : 0;
    EXPECT_EQ(labels[i], a >= 2 ? "a" : "b") << i;
    EXPECT_EQ(g.node(static_cast<NodeId>(i)).category, labels[i]);
  }
  const auto dist = category_distribution(std::span<const std::string>(labels));
  double total = 0;
  for (const auto& [label, p] : dist) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
  const std::vector<std::optional<std::string>> partial{"a", std::nullopt};
  EXPECT_THROW(category_distribution(std::span<const std::optional<std::string>>(partial)), DomainError);
}

}  // namespace
}  // namespace vizplan::vrm
