// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "oracles.h"
#include "vizplan/dynamic.h"
#include "vizplan/io.h"
#include "vizplan/localplan.h"
#include "vizplan/manifold.h"
#include "vizplan/vrm.h"
#include "vizplan_cli/commands.h"

namespace {

using namespace vizplan;
namespace fs = std::filesystem;
using simworld::Canvas;
using simworld::RobotModel;
using simworld::Scene;
using simworld::Shape;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
      pass = false;
      detail += " [violated]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Multi-view rule evaluated pixel by pixel.
bool oracle_collides(const simworld::PoseRecord& r, const simworld::ObstacleField& field) {
  for (int v = 0; v < field.view_count(); ++v) {
    if (oracle::and_count(r.views[v], field.mask(v)) == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Outcome rle_oracle_equivalence() {
  Outcome out;
  Rng rng(101);
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t collide_ok = 0, pen_ok = 0, trip_ok = 0;
  constexpr int kPairs = 1000;
  for (int i = 0; i < kPairs; ++i) {
    const BinaryImage a = oracle::random_image(64, 64, rng.uniform(0.01, 0.90), rng);
    const BinaryImage b = oracle::random_image(64, 64, rng.uniform(0.01, 0.90), rng);
    const rle::IntervalRle ra = rle::encode(a), rb = rle::encode(b);
    const std::uint64_t both = oracle::and_count(a, b);
    collide_ok += rle::collide(ra, rb) == (both > 0) ? 1 : 0;
    pen_ok += rle::penetration(ra, rb) == both ? 1 : 0;
    trip_ok += (rle::decode(ra) == a && rle::decode(rb) == b) ? 1 : 0;
  }
  // Sparse pairs make the collide/no-collide split non-trivial.
  std::size_t disjoint = 0;
  for (int i = 0; i < kPairs; ++i) {
    const BinaryImage a = oracle::random_image(64, 64, 0.0005, rng);
    const BinaryImage b = oracle::random_image(64, 64, 0.0005, rng);
    const std::uint64_t both = oracle::and_count(a, b);
    disjoint += both == 0 ? 1 : 0;
    collide_ok += rle::collide(rle::encode(a), rle::encode(b)) == (both > 0) ? 1 : 0;
  }
  const double dt = seconds_since(t0);
  out.require(collide_ok == 2 * kPairs, "collide agrees %zu/%d (%zu disjoint)", collide_ok, 2 * kPairs, disjoint);
  out.require(pen_ok == kPairs, "penetration exact %zu/%d", pen_ok, kPairs);
  out.require(trip_ok == kPairs, "round trip %zu/%d", trip_ok, kPairs);
  out.require(dt < 5.0, "%.2f s < 5 s", dt);
  return out;
}

Outcome worked_example() {
  Outcome out;
  const char* rows[10] = {"0000000000", "0001111000", "0010000100", "0010000100", "0001111100",
                          "0000000100", "0000000100", "0010000100", "0001111000", "0000000000"};
  BinaryImage figure(10, 10);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) figure.set(x, y, rows[y][x] == '1');
  }
  const std::vector<rle::Interval> expected{{13, 17}, {22, 23}, {27, 28}, {32, 33}, {37, 38}, {43, 48},
                                            {57, 58}, {67, 68}, {72, 73}, {77, 78}, {83, 87}};
  const rle::IntervalRle enc = rle::encode(figure);
  out.require(std::equal(enc.intervals().begin(), enc.intervals().end(), expected.begin(), expected.end()),
              "interval list (%zu intervals)", enc.size());

  const std::vector<std::uint64_t> rowwise{10, 3, 4, 3, 2, 1, 4, 1, 2, 2, 1, 4, 1, 2, 3, 5,
                                           2, 7, 1, 2, 7, 1, 2, 2, 1, 4, 1, 2, 3, 4, 3, 10};
  const std::vector<std::uint64_t> flat{13, 4, 5, 1, 4, 1, 4, 1, 4, 1, 5, 5, 9, 1, 9, 1, 4, 1, 4, 1, 5, 4, 13};
  out.require(rle::internal::row_run_lengths(figure) == rowwise, "row-wise runs");
  out.require(rle::internal::flat_run_lengths(figure) == flat, "flattened runs");
  out.require(rle::internal::intervals_from_runs(10, 10, flat) == enc, "runs to intervals");

  const std::string bits = "00000000001111111111111110000000000001111111111";
  BinaryImage strip(static_cast<int>(bits.size()), 1);
  for (std::size_t i = 0; i < bits.size(); ++i) strip.set(static_cast<int>(i), 0, bits[i] == '1');
  const auto runs = rle::internal::row_run_lengths(strip);
  out.require(runs == std::vector<std::uint64_t>{10, 15, 12, 10}, "string runs <10,15,12,10>");
  out.require(rle::internal::decode_row_runs(strip.width(), 1, runs) == strip, "string decodes back");
  return out;
}

Outcome metric_axioms() {
  Outcome out;
  const RobotModel model = RobotModel::arm({20, 14, 8}, {3, 3, 3}, {50, 50});
  const Canvas canvas;
  metrics::MetricOptions opts;
  opts.input_dim = 100 * 100;
  opts.projector_dim = 256;
  opts.projector_seed = 9;
  std::vector<metrics::MetricPtr> all;
  for (const char* name : {"img-l2", "rp-l2", "theta-g", "itp-l2", "st-h", "combined:1,2,5"}) {
    all.push_back(metrics::make_metric(name, opts));
  }
  const auto configs = simworld::sample_configs(model, 400, 33);
  std::vector<simworld::PoseRecord> pool;
  for (const auto& q : configs) {
    simworld::PoseRecord r = simworld::fk_render(model, q, canvas);
    r.features = metrics::extract_features(r);
    for (const auto& m : all) m->prepare(r);
    pool.push_back(std::move(r));
  }
  Rng rng(34);
  constexpr int kTrials = 10000;
  for (const auto& m : all) {
    const bool triangle = m->kind() != metrics::MetricKind::kLinkHausdorff;
    std::size_t bad_axiom = 0, bad_triangle = 0;
    for (int t = 0; t < kTrials; ++t) {
      const auto& a = pool[rng.below(pool.size())];
      const auto& b = pool[rng.below(pool.size())];
      const auto& c = pool[rng.below(pool.size())];
      const double ab = m->distance(a, b);
      if (ab != m->distance(b, a) || !(ab >= 0) || m->distance(a, a) != 0.0) ++bad_axiom;
      if (triangle && m->distance(a, c) > ab + m->distance(b, c) + 1e-9) ++bad_triangle;
    }
    out.require(bad_axiom == 0, "%s sym/id/nonneg %zu bad", m->name().c_str(), bad_axiom);
    if (triangle) out.require(bad_triangle == 0, "%s triangle %zu bad", m->name().c_str(), bad_triangle);
  }
  return out;
}

Outcome mds_recovery() {
  Outcome out;
  Rng rng(44);
  manifold::Matrix pts(3, 50);
  for (int c = 0; c < 50; ++c) {
    for (int r = 0; r < 3; ++r) pts(r, c) = rng.uniform(-5, 5);
  }
  manifold::Matrix d(50, 50);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) d(i, j) = (pts.col(i) - pts.col(j)).norm();
  }
  const manifold::Embedding e = manifold::mds(d, 3);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    for (int j = i + 1; j < 50; ++j) {
      const double back = (e.points.col(i) - e.points.col(j)).norm();
      worst = std::max(worst, std::abs(back - d(i, j)) / d(i, j));
    }
  }
  const manifold::Matrix a = pts.colwise() - pts.rowwise().mean();
  const manifold::Matrix b = e.points.colwise() - e.points.rowwise().mean();
  Eigen::JacobiSVD<manifold::Matrix> svd(b * a.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const manifold::Matrix rot = svd.matrixV() * svd.matrixU().transpose();
  const double procrustes = (rot * b - a).norm() / a.norm();
  out.require(worst <= 1e-6, "max relative distance error %.2e <= 1e-6", worst);
  out.require(procrustes <= 1e-6, "Procrustes residual %.2e <= 1e-6", procrustes);
  return out;
}

Outcome pca_checks() {
  Outcome out;
  Rng rng(55);
  const int d = 20, n = 200, p = 5;
  manifold::Matrix basis(d, p), coeff(p, n);
  for (int c = 0; c < p; ++c) {
    for (int r = 0; r < d; ++r) basis(r, c) = rng.gaussian();
  }
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < p; ++r) coeff(r, c) = rng.gaussian() * (p - r);
  }
  manifold::Matrix x = basis * coeff;
  for (int r = 0; r < d; ++r) x.row(r).array() += rng.uniform(-3, 3);
  const manifold::PcaFit fit = manifold::pca_fit(x, p);
  const manifold::Matrix& w = fit.model.basis;
  const double ortho = (w.transpose() * w - manifold::Matrix::Identity(p, p)).cwiseAbs().maxCoeff();
  double recon = 0;
  for (int c = 0; c < n; ++c) {
    const manifold::Vector back = manifold::pca_reconstruct(fit.model, manifold::pca_project(fit.model, x.col(c)));
    recon = std::max(recon, (back - x.col(c)).cwiseAbs().maxCoeff());
  }
  bool descending = true;
  for (int i = 0; i + 1 < p; ++i) descending &= fit.model.eigenvalues(i) >= fit.model.eigenvalues(i + 1);
  out.require(ortho <= 1e-8, "|W^T W - I|inf %.2e <= 1e-8", ortho);
  out.require(recon <= 1e-6, "reconstruction %.2e <= 1e-6", recon);
  out.require(descending, "eigenvalues descending");
  return out;
}

Outcome isomap_knee() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const RobotModel model = RobotModel::arm({18, 10}, {4, 4}, {32, 32});
  const Canvas canvas{64, 64};
  const auto metric = metrics::make_metric("img-l2");
  const auto configs = simworld::sample_configs(model, 2000, 7);
  const auto records = vrm::render_records(model, configs, canvas, metric.get(), false);
  const auto result = manifold::isomap(records, 8, 4, *metric);
  const auto& r = result.embedding.residual_variances;
  const double dt = seconds_since(t0);
  out.require(true, "residuals %.4f %.4f %.4f %.4f (kept %zu)", r[0], r[1], r[2], r[3], result.kept.size());
  out.require(r[1] <= 0.15, "res(2) %.4f <= 0.15", r[1]);
  out.require(r[0] - r[1] >= 3 * (r[1] - r[2]), "res(1)-res(2) %.4f >= 3*(res(2)-res(3)) %.4f", r[0] - r[1],
              3 * (r[1] - r[2]));
  out.require(dt < 300, "%.1f s < 300 s", dt);
  return out;
}

// Three thin radial walls around the arm base.
Scene radial_walls() {
  Scene scene;
  for (double deg : {20.0, 140.0, 260.0}) {
    const double a = deg * std::numbers::pi / 180, c = std::cos(a), s = std::sin(a);
    const Point2 p0{50 + 28 * c, 50 + 28 * s}, p1{50 + 48 * c, 50 + 48 * s};
    const Point2 nrm{-s * 1.5, c * 1.5};
    scene.obstacles.push_back(Shape::polygon({p0 - nrm, p1 - nrm, p1 + nrm, p0 + nrm}));
  }
  return scene;
}

Outcome planner_ordering() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const RobotModel model = RobotModel::arm({20, 14, 8}, {1, 1, 1}, {50, 50});
  const Canvas canvas;
  const simworld::ObstacleField field(radial_walls(), canvas);
  const std::vector<rle::IntervalRle> obstacle(field.rles().begin(), field.rles().end());
  const auto configs = simworld::sample_configs(model, 3000, 11);
  const auto records = vrm::render_records(model, configs, canvas, nullptr, true);
  localplan::GoldOracle gold(model, canvas, field);

  const std::vector<std::string> metric_names{"img-l2", "theta-g", "itp-l2", "st-h"};
  const std::vector<std::string> planners{"lts", "lts-union", "lts-pca", "itp", "jnst"};
  std::map<std::string, std::map<std::string, double>> pct;
  for (const auto& name : metric_names) {
    vrm::Vrm g = vrm::Vrm::build(records, 10, metrics::make_metric(name));
    vrm::mark_collision_nodes(g, obstacle);
    pct[name]["none"] = localplan::prune_and_score(g, localplan::PlannerKind::kNone, obstacle, gold).bad_remaining_pct();
    for (const auto& p : planners) {
      g.clear_pruning();
      pct[name][p] = localplan::prune_and_score(g, localplan::parse_planner(p), obstacle, gold).bad_remaining_pct();
    }
    std::string row;
    for (const auto& [p, v] : pct[name]) {
      char cell[64];
      std::snprintf(cell, sizeof(cell), " %s=%.3f", p.c_str(), v);
      row += cell;
    }
    std::printf("    %-8s%s\n", name.c_str(), row.c_str());
  }
  const double img = pct["img-l2"]["none"], theta = pct["theta-g"]["none"];
  const double itp = pct["itp-l2"]["none"], sth = pct["st-h"]["none"];
  out.require(img > theta && theta > std::max(itp, sth), "none: img %.3f > theta %.3f > max(itp %.3f, st-h %.3f)",
              img, theta, itp, sth);
  out.require(img >= 3 * theta, "img/theta %.2f >= 3", img / theta);
  std::size_t reductions = 0, checked = 0;
  for (const char* m : {"theta-g", "itp-l2", "st-h"}) {
    for (const auto& p : planners) {
      ++checked;
      if (pct[m][p] < pct[m]["none"]) {
        ++reductions;
      } else {
        out.require(false, "%s/%s %.3f not below none %.3f", m, p.c_str(), pct[m][p], pct[m]["none"]);
      }
    }
  }
  out.require(reductions == checked, "strict reductions %zu/%zu", reductions, checked);
  for (const auto& m : metric_names) {
    out.require(pct[m]["jnst"] <= 2 * pct[m]["itp"], "%s jnst %.3f <= 2*itp %.3f", m.c_str(), pct[m]["jnst"],
                2 * pct[m]["itp"]);
  }
  const double dt = seconds_since(t0);
  out.require(dt < 900, "%.1f s < 900 s", dt);
  return out;
}

// Steps of at most eps per joint, endpoints included. Arm joints take the
// shortest arc; disc coordinates are plain pixel offsets.
std::vector<simworld::JointVector> oracle_interpolate(const simworld::JointVector& a,
                                                      const simworld::JointVector& b, double eps, bool wrap) {
  std::vector<double> delta(a.size());
  double widest = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    delta[j] = wrap ? std::remainder(b[j] - a[j], 2 * std::numbers::pi) : b[j] - a[j];
    widest = std::max(widest, std::abs(delta[j]));
  }
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(widest / eps)));
  std::vector<simworld::JointVector> out;
  for (std::size_t s = 0; s <= steps; ++s) {
    std::vector<double> q(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) q[j] = a[j] + delta[j] * static_cast<double>(s) / steps;
    out.emplace_back(std::move(q));
  }
  return out;
}

struct SoundnessTally {
  std::size_t queries = 0, found = 0, no_path = 0, wrong_reach = 0, bad_nodes = 0, bad_edges = 0;
};

// Gold-prunes a roadmap, then checks random queries plus cross-component ones
// against union-find reachability and the pixel oracle.
SoundnessTally check_soundness(const RobotModel& model, const simworld::Scene& scene, std::size_t n,
                               std::uint64_t seed, std::size_t k, double eps, std::size_t random_queries,
                               std::size_t cross_queries) {
  const Canvas canvas;
  const simworld::ObstacleField field(scene, canvas);
  const std::vector<rle::IntervalRle> obstacle(field.rles().begin(), field.rles().end());
  const auto metric = metrics::make_metric("theta-g");
  vrm::Vrm g = vrm::Vrm::build(
      vrm::render_records(model, simworld::sample_configs(model, n, seed), canvas, metric.get(), false), k, metric);
  vrm::mark_collision_nodes(g, obstacle);
  localplan::GoldOracle gold(model, canvas, field, eps);
  localplan::prune_edges(g, localplan::PlannerKind::kGold, obstacle, gold);

  // Components over active edges, by union-find.
  std::vector<std::size_t> parent(g.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& e : g.edges()) {
    if (g.is_active(e)) parent[find(e.u)] = find(e.v);
  }
  std::vector<graph::NodeId> free;
  for (graph::NodeId i = 0; i < g.size(); ++i) {
    if (g.is_free(i)) free.push_back(i);
  }

  Rng rng(seed + 1);
  std::vector<std::pair<graph::NodeId, graph::NodeId>> queries;
  for (std::size_t q = 0; q < random_queries; ++q) {
    queries.emplace_back(free[rng.below(free.size())], free[rng.below(free.size())]);
  }
  for (std::size_t tries = 0, added = 0; tries < 10000 && added < cross_queries; ++tries) {
    const graph::NodeId s = free[rng.below(free.size())], t = free[rng.below(free.size())];
    if (find(s) != find(t)) {
      queries.emplace_back(s, t);
      ++added;
    }
  }

  SoundnessTally tally;
  tally.queries = queries.size();
  const bool wrap = model.kind == simworld::RobotKind::kArm;
  for (const auto& [s, t] : queries) {
    const vrm::PathResult path = vrm::shortest_path(g, s, t);
    if (path.found != (find(s) == find(t))) ++tally.wrong_reach;
    if (!path.found) {
      tally.no_path += path.nodes.empty() ? 1 : 0;
      continue;
    }
    ++tally.found;
    for (graph::NodeId id : path.nodes) {
      const auto& rec = g.record(id);
      if (vrm::in_collision(rec, obstacle) || oracle_collides(rec, field)) ++tally.bad_nodes;
    }
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
      for (const auto& q :
           oracle_interpolate(g.record(path.nodes[i]).config, g.record(path.nodes[i + 1]).config, eps, wrap)) {
        if (oracle_collides(simworld::fk_render(model, q, canvas), field)) {
          ++tally.bad_edges;
          break;
        }
      }
    }
  }
  return tally;
}

Outcome planning_soundness() {
  Outcome out;
  const SoundnessTally arm = check_soundness(RobotModel::arm({20, 14, 8}, {2, 2, 2}, {50, 50}), radial_walls(), 800,
                                             81, 8, localplan::kDefaultGoldEps, 50, 5);
  // A full-height wall splits the disc's free space in two, so cross-side
  // queries have no path by construction.
  simworld::Scene split;
  split.obstacles.push_back(simworld::Shape::rect(46, 0, 54, 99));
  const SoundnessTally disc =
      check_soundness(RobotModel::disc(3, {4, 96}, {4, 96}), split, 300, 83, 8, 0.5, 20, 10);
  for (const auto& [name, t] : {std::pair{"arm", arm}, std::pair{"disc", disc}}) {
    out.require(true, "%s: %zu queries, %zu paths, %zu no-path", name, t.queries, t.found, t.no_path);
    out.require(t.wrong_reach == 0, "%s reachability matches components (%zu wrong)", name, t.wrong_reach);
    out.require(t.bad_nodes == 0, "%s colliding path nodes %zu", name, t.bad_nodes);
    out.require(t.bad_edges == 0, "%s unsafe path edges %zu", name, t.bad_edges);
    out.require(t.found + t.no_path == t.queries, "%s every query answered explicitly", name);
  }
  out.require(disc.no_path >= 10, "disc cross-wall queries report no-path (%zu >= 10)", disc.no_path);
  return out;
}

Outcome multi_view_rule() {
  Outcome out;
  const RobotModel model = RobotModel::arm({20, 14}, {3, 3}, {50, 50});
  Canvas canvas;
  canvas.views.push_back({1.0, 0.0, {100, 0}, true});  // mirror image of the workspace
  const simworld::JointVector q{0.0, 0.0};  // arm along +x
  const auto record = std::make_shared<simworld::PoseRecord>(simworld::fk_render(model, q, canvas));

  Scene one;  // on the arm in view 0, elsewhere in view 1
  Shape a = Shape::rect(70, 48, 74, 52);
  a.views = {0};
  Shape b = Shape::rect(70, 10, 74, 14);
  b.views = {1};
  one.obstacles = {a, b};
  Scene both;
  both.obstacles = {Shape::rect(70, 48, 74, 52)};

  const simworld::ObstacleField f1(one, canvas), f2(both, canvas);
  out.require(oracle::and_count(record->views[0], f1.mask(0)) > 0 &&
                  oracle::and_count(record->views[1], f1.mask(1)) == 0,
              "fixture overlaps in exactly one view");
  out.require(oracle::and_count(record->views[0], f2.mask(0)) > 0 &&
                  oracle::and_count(record->views[1], f2.mask(1)) > 0,
              "fixture overlaps in both views");
  out.require(!vrm::in_collision(*record, f1.rles()) && !simworld::pose_collides(model, q, canvas, f1),
              "one view: free");
  out.require(vrm::in_collision(*record, f2.rles()) && simworld::pose_collides(model, q, canvas, f2),
              "both views: collision");

  // Same verdicts through roadmap marking.
  const auto metric = metrics::make_metric("theta-g");
  std::vector<simworld::RecordPtr> records{record};
  for (const auto& c : simworld::sample_configs(model, 5, 91)) {
    records.push_back(std::make_shared<simworld::PoseRecord>(simworld::fk_render(model, c, canvas)));
  }
  vrm::Vrm g = vrm::Vrm::build(records, 2, metric);
  vrm::mark_collision_nodes(g, f1.rles());
  const bool free_one = g.is_free(0);
  vrm::mark_collision_nodes(g, f2.rles());
  out.require(free_one && !g.is_free(0), "roadmap node marked accordingly");
  return out;
}

// Test-side replan loop with statuses recomputed from scratch every step.
std::vector<dynamic::Frame> reference_trace(const vrm::Vrm& g, const std::vector<simworld::ObstacleField>& fields,
                                            graph::NodeId s, graph::NodeId t, std::size_t max_steps) {
  const std::size_t n = g.size();
  std::vector<dynamic::Frame> frames;
  graph::NodeId current = s;
  std::vector<graph::NodeId> plan;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const std::size_t scene = std::min(step, fields.size() - 1);
    std::vector<bool> free(n);
    for (std::size_t i = 0; i < n; ++i) free[i] = !oracle_collides(g.record(static_cast<graph::NodeId>(i)), fields[scene]);

    dynamic::Frame frame{step, current, scene, dynamic::Event::kWaited};
    if (current == t) {
      frame.event = dynamic::Event::kReached;
    } else if (free[t] && free[current]) {
      // Dijkstra from the goal over edges with both endpoints free, then the
      // lexicographically smallest walk along tight edges.
      std::vector<std::vector<std::pair<graph::NodeId, double>>> adj(n);
      for (const auto& e : g.edges()) {
        if (free[e.u] && free[e.v]) {
          adj[e.u].emplace_back(e.v, e.w);
          adj[e.v].emplace_back(e.u, e.w);
        }
      }
      std::vector<double> dist(n, INFINITY);
      using Item = std::pair<double, graph::NodeId>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[t] = 0;
      heap.emplace(0.0, t);
      while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : adj[u]) {
          if (d + w < dist[v]) {
            dist[v] = d + w;
            heap.emplace(dist[v], v);
          }
        }
      }
      if (std::isfinite(dist[current])) {
        std::vector<graph::NodeId> path{current};
        while (path.back() != t) {
          const graph::NodeId c = path.back();
          graph::NodeId next = static_cast<graph::NodeId>(n);
          for (const auto& [v, w] : adj[c]) {
            const bool tight = std::abs(w + dist[v] - dist[c]) <= 1e-9 * std::max(1.0, dist[c]);
            if (tight && std::find(path.begin(), path.end(), v) == path.end()) next = std::min(next, v);
          }
          path.push_back(next);
        }
        frame.event = plan.empty() || path == plan ? dynamic::Event::kMoved : dynamic::Event::kReplanned;
        plan.assign(path.begin() + 1, path.end());
        current = plan.front();
        frame.node = current;
        if (current == t) frame.event = dynamic::Event::kReached;
      }
    }
    frames.push_back(frame);
    if (frame.event == dynamic::Event::kReached) break;
  }
  return frames;
}

Outcome dynamic_safety() {
  Outcome out;
  const RobotModel model = RobotModel::arm({20, 14}, {3, 3}, {50, 50});
  const Canvas canvas;
  const auto metric = metrics::make_metric("theta-g");
  const auto records =
      vrm::render_records(model, simworld::sample_configs(model, 300, 101), canvas, metric.get(), false);
  vrm::Vrm base = vrm::Vrm::build(records, 8, metric);

  // Start and goal far apart in hops.
  const graph::NodeId s = 0;
  graph::NodeId t = 1;
  std::size_t hops = 0;
  for (graph::NodeId v = 1; v < base.size(); ++v) {
    const auto p = vrm::shortest_path(base, s, v);
    if (p.found && p.nodes.size() > hops) {
      hops = p.nodes.size();
      t = v;
    }
  }
  // A disc parked outside the reach of the arm, moving in over the goal's
  // tip, waiting there, then leaving.
  const Point2 tip = base.record(t).tracked[2];
  const Point2 dir = (1.0 / distance(tip, {50, 50})) * (tip - Point2{50, 50});
  const double park = 44 - distance(tip, {50, 50});
  const int legs = static_cast<int>(std::ceil(park / 4));
  std::vector<double> offsets{park, park};
  for (int i = 1; i <= legs; ++i) offsets.push_back(park - park * i / legs);
  for (int i = 0; i < 4; ++i) offsets.push_back(0);
  for (int i = 1; i <= legs; ++i) offsets.push_back(park * i / legs);
  dynamic::ObstacleTrack track;
  track.max_displacement = 5;
  std::vector<simworld::ObstacleField> fields;
  for (double o : offsets) {
    Scene scene;
    scene.obstacles.push_back(Shape::disc(tip + o * dir, 4));
    fields.emplace_back(scene, canvas);
    track.scenes.push_back(std::move(scene));
  }
  auto goal_blocked = [&](std::size_t scene) { return oracle_collides(base.record(t), fields[scene]); };

  vrm::Vrm g = base;
  dynamic::RunOptions options;
  options.audit = true;
  const dynamic::SimTrace trace = dynamic::run(g, canvas, track, s, t, options);
  std::size_t blocked_steps = 0, wait_mismatch = 0, overlaps = 0;
  for (const auto& f : trace.frames) {
    const bool blocked = goal_blocked(f.scene);
    blocked_steps += blocked ? 1 : 0;
    if ((f.event == dynamic::Event::kWaited) != blocked) ++wait_mismatch;
    if (oracle_collides(base.record(f.node), fields[f.scene])) ++overlaps;
  }
  out.require(true, "path %zu hops, %zu frames, goal blocked in %zu of them", hops - 1, trace.frames.size(),
              blocked_steps);
  out.require(trace.reached && blocked_steps > 0, "reached after a blocking interval");
  out.require(wait_mismatch == 0, "waits exactly while goal blocked (%zu mismatches)", wait_mismatch);
  out.require(overlaps == 0, "frames overlapping the obstacle %zu", overlaps);

  vrm::Vrm full = base;
  dynamic::RunOptions unbounded;
  unbounded.policy.hops = dynamic::kUnboundedHops;
  const dynamic::SimTrace a = dynamic::run(full, canvas, track, s, t, unbounded);
  const auto reference = reference_trace(base, fields, s, t, unbounded.max_steps);
  bool same = a.frames.size() == reference.size();
  for (std::size_t i = 0; same && i < reference.size(); ++i) {
    same = a.frames[i].node == reference[i].node && a.frames[i].event == reference[i].event &&
           a.frames[i].scene == reference[i].scene;
  }
  out.require(same, "h=inf trace matches reference step for step (%zu vs %zu frames)", a.frames.size(),
              reference.size());
  return out;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), root).generic_string()] = io::read_file(entry.path());
  }
  return files;
}

Outcome determinism() {
  Outcome out;
  const auto parsed = cli::validate_config_text(R"({
    "seed": 12,
    "robot": {"type": "arm", "link_lengths": [20, 14, 8], "link_widths": [2, 2, 2]},
    "obstacles": [
      {"type": "rect", "min": [80, 10], "max": [84, 40]},
      {"type": "disc", "center": [20, 80], "radius": 5}
    ],
    "samples": 300, "k": 8, "metric": "img-l2", "planner": "lts",
    "start": {"node": 0}, "goal": {"config": [1.0, 0.5, -0.3]},
    "eval": {"metrics": ["theta-g", "st-h"], "planners": ["none", "lts-pca", "jnst"]},
    "embed": {"method": "isomap", "dims": 3, "k": 8},
    "dynamic": {"motions": [{"obstacle": 1, "start": 1, "steps": 8, "delta": [3, -2]}], "audit": true}
  })");
  if (!parsed.ok()) {
    out.require(false, "scenario invalid: %s", parsed.violations.front().c_str());
    return out;
  }
  const fs::path root = fs::temp_directory_path() / "vizplan_acceptance_determinism";
  fs::remove_all(root);
  using Command = int (*)(const cli::ScenarioConfig&, const cli::CommandOptions&, std::ostream&);
  const std::vector<std::pair<const char*, Command>> commands{
      {"sample", cli::run_sample}, {"build", cli::run_build}, {"plan", cli::run_plan},
      {"eval", cli::run_eval},     {"embed", cli::run_embed}, {"dynamic", cli::run_dynamic}};
  std::map<std::string, std::string> runs[3];
  const int threads[3] = {1, 1, 4};
  for (int r = 0; r < 3; ++r) {
    const fs::path dir = root / std::to_string(r);
    for (const auto& [name, command] : commands) {
      std::ostringstream summary;
      const int code = command(*parsed.config, {threads[r], dir}, summary);
      runs[r]["#exit/" + std::string(name)] = std::to_string(code);
    }
    runs[r].merge(snapshot(dir));
  }
  std::size_t differing = 0;
  for (const auto& [file, bytes] : runs[0]) {
    for (int r = 1; r < 3; ++r) {
      const auto it = runs[r].find(file);
      if (it == runs[r].end() || it->second != bytes) ++differing;
    }
  }
  out.require(runs[0].size() == runs[1].size() && runs[0].size() == runs[2].size(), "%zu artifacts per run",
              runs[0].size());
  out.require(differing == 0, "byte-identical across reruns and 1 vs 4 workers (%zu differ)", differing);
  fs::remove_all(root);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"RLE oracle equivalence", rle_oracle_equivalence},
      {"worked RLE example", worked_example},
      {"metric axioms", metric_axioms},
      {"MDS recovery", mds_recovery},
      {"PCA", pca_checks},
      {"Isomap dimension knee", isomap_knee},
      {"metric and local planner ordering", planner_ordering},
      {"planning soundness", planning_soundness},
      {"multi-view rule", multi_view_rule},
      {"dynamic safety", dynamic_safety},
      {"determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome result;
    try {
      result = criteria[i].second();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    failures += result.pass ? 0 : 1;
    std::printf("[%s] AC%-2d %s (%.1f s): %s\n", result.pass ? "PASS" : "FAIL", id, criteria[i].first,
                seconds_since(t0), result.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
