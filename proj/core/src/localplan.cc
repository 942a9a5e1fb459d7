#include "vizplan/localplan.h"

#include <algorithm>
#include <limits>

#include "vizplan/errors.h"
#include "vizplan/manifold.h"
#include "vizplan/parallel.h"

namespace vizplan::localplan {

namespace {

struct PlannerEntry {
  PlannerKind kind;
  std::string_view name;
};

constexpr PlannerEntry kPlanners[] = {
    {PlannerKind::kNone, "none"},       {PlannerKind::kLtsIntersection, "lts"},
    {PlannerKind::kLtsUnion, "lts-union"}, {PlannerKind::kLtsPca, "lts-pca"},
    {PlannerKind::kItp, "itp"},         {PlannerKind::kJnst, "jnst"},
    {PlannerKind::kGold, "gold"},
};

}  // namespace

PlannerKind parse_planner(std::string_view name) {
  for (const PlannerEntry& e : kPlanners) {
    if (e.name == name) return e.kind;
  }
  throw DomainError("unknown local planner '" + std::string(name) + "'");
}

std::string_view planner_name(PlannerKind kind) {
  for (const PlannerEntry& e : kPlanners) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

namespace {

// Verdict of a swept image against the obstacle under the multi-view rule.
EdgeVerdict verdict_for(const SweptImage& swept, std::span<const rle::IntervalRle> obstacle_rles,
                        PlannerKind planner, NodeId u, NodeId v) {
  EdgeVerdict out{u, v, true, planner, 0};
  std::uint64_t least = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t view = 0; view < swept.views.size(); ++view) {
    least = std::min(least, rle::penetration(rle::encode(swept.views[view]), obstacle_rles[view]));
    if (least == 0) break;
  }
  if (swept.views.empty()) least = 0;
  out.penetration = least;
  out.safe = least == 0;
  return out;
}

std::vector<NodeId> neighborhood(const vrm::Vrm& g, NodeId id) {
  std::vector<NodeId> out = g.structural_neighbors(id);
  out.insert(std::lower_bound(out.begin(), out.end(), id), id);
  return out;
}

void or_views(std::vector<BinaryImage>& acc, const simworld::PoseRecord& r) {
  for (std::size_t v = 0; v < acc.size(); ++v) acc[v] |= r.views[v];
}

}  // namespace

SweptImage lts_swept(const vrm::Vrm& g, NodeId u, NodeId v, LtsMode mode,
                     const PlannerOptions& options) {
  const std::vector<NodeId> nu = neighborhood(g, u);
  const std::vector<NodeId> nv = neighborhood(g, v);
  std::vector<NodeId> shared;
  std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(shared));
  std::vector<NodeId> both;
  std::set_union(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(both));
  // u and v always belong to the set, even when they share no edge.
  for (NodeId id : {u, v}) {
    if (!std::binary_search(shared.begin(), shared.end(), id)) {
      shared.insert(std::lower_bound(shared.begin(), shared.end(), id), id);
    }
  }

  SweptImage swept;
  const simworld::PoseRecord& ru = g.record(u);
  for (const BinaryImage& view : ru.views) swept.views.emplace_back(view.width(), view.height());
  or_views(swept.views, ru);
  or_views(swept.views, g.record(v));

  const bool thin = shared.size() <= 2 && u != v;
  if (mode == LtsMode::kUnion || (mode == LtsMode::kIntersection && thin)) {
    swept.source = SweptSource::kLtsUnion;
    for (NodeId id : both) or_views(swept.views, g.record(id));
    return swept;
  }
  if (mode == LtsMode::kIntersection) {
    swept.source = SweptSource::kLtsIntersection;
    for (NodeId id : shared) or_views(swept.views, g.record(id));
    return swept;
  }

  // Tangent-space interpolation: PCA on the shared neighborhood (or the
  // union when it is thin), reconstruct along the u-v chord, binarize.
  swept.source = SweptSource::kLtsPca;
  const std::vector<NodeId>& sample = thin ? both : shared;
  std::size_t dim = 0;
  for (const BinaryImage& view : ru.views) dim += view.pixel_count();
  const auto m = static_cast<Eigen::Index>(sample.size());
  manifold::Matrix x = manifold::Matrix::Zero(static_cast<Eigen::Index>(dim), m);
  Eigen::Index col_u = 0;
  Eigen::Index col_v = 0;
  for (Eigen::Index c = 0; c < m; ++c) {
    const NodeId id = sample[c];
    if (id == u) col_u = c;
    if (id == v) col_v = c;
    std::size_t base = 0;
    for (const BinaryImage& view : g.record(id).views) {
      for (std::size_t i = 0; i < view.pixel_count(); ++i) {
        if (view.test(i)) x(static_cast<Eigen::Index>(base + i), c) = 1.0;
      }
      base += view.pixel_count();
    }
  }
  const int p = std::min<int>(static_cast<int>(ru.config.size()), static_cast<int>(m) - 1);
  if (p < 1) return swept;
  const manifold::PcaFit fit = manifold::pca_fit(x, p);
  const int steps = std::max(1, options.pca_steps);
  for (int s = 0; s <= steps; ++s) {
    const double alpha = static_cast<double>(s) / steps;
    const manifold::Vector y =
        manifold::interpolate(fit.scores.col(col_u), fit.scores.col(col_v), alpha);
    const manifold::Vector xhat = manifold::pca_reconstruct(fit.model, y);
    std::size_t base = 0;
    for (BinaryImage& view : swept.views) {
      for (std::size_t i = 0; i < view.pixel_count(); ++i) {
        if (xhat[static_cast<Eigen::Index>(base + i)] > options.pca_threshold) view.set_index(i);
      }
      base += view.pixel_count();
    }
  }
  return swept;
}

EdgeVerdict lts_check(const vrm::Vrm& g, NodeId u, NodeId v,
                      std::span<const rle::IntervalRle> obstacle_rles, LtsMode mode,
                      const PlannerOptions& options) {
  const PlannerKind kind = mode == LtsMode::kIntersection ? PlannerKind::kLtsIntersection
                           : mode == LtsMode::kUnion      ? PlannerKind::kLtsUnion
                                                          : PlannerKind::kLtsPca;
  if (obstacle_rles.size() != g.record(u).views.size()) {
    throw DomainError("robot and obstacle view counts differ");
  }
  return verdict_for(lts_swept(g, u, v, mode, options), obstacle_rles, kind, u, v);
}

namespace {

SweptImage primary_union(const simworld::PoseRecord& u, const simworld::PoseRecord& v,
                         SweptSource source) {
  if (u.views.empty() || v.views.empty()) throw DomainError("record has no views");
  SweptImage swept;
  swept.source = source;
  swept.views.push_back(u.views[0]);
  swept.views[0] |= v.views[0];
  return swept;
}

}  // namespace

SweptImage itp_swept(const simworld::PoseRecord& u, const simworld::PoseRecord& v,
                     const PlannerOptions& options) {
  if (u.tracked.size() != v.tracked.size()) throw DomainError("tracked point counts differ");
  SweptImage swept = primary_union(u, v, SweptSource::kItp);
  for (std::size_t i = 0; i < u.tracked.size(); ++i) {
    draw_line(swept.views[0], u.tracked[i], v.tracked[i], options.segment_thickness);
  }
  return swept;
}

EdgeVerdict itp_check(const simworld::PoseRecord& u, const simworld::PoseRecord& v,
                      const rle::IntervalRle& obstacle, const PlannerOptions& options) {
  return verdict_for(itp_swept(u, v, options), std::span(&obstacle, 1), PlannerKind::kItp, 0, 0);
}

namespace {

void join_nearest(BinaryImage& image, std::span<const Point2> from, std::span<const Point2> to,
                  int thickness) {
  for (const Point2& p : from) {
    const Point2* best = &to.front();
    double best_d = squared_distance(p, *best);
    for (const Point2& q : to) {
      const double d = squared_distance(p, q);
      if (d < best_d) {
        best_d = d;
        best = &q;
      }
    }
    draw_line(image, p, *best, thickness);
  }
}

}  // namespace

SweptImage jnst_swept(const simworld::PoseRecord& u, const simworld::PoseRecord& v,
                      const PlannerOptions& options) {
  if (u.features.size() != v.features.size() || u.features.empty()) {
    throw DegenerateFeatureError("records carry no matching feature sets");
  }
  for (std::size_t l = 0; l < u.features.size(); ++l) {
    if (u.features[l].empty() || v.features[l].empty()) {
      throw DegenerateFeatureError("link " + std::to_string(l) + " has no corner features");
    }
  }
  SweptImage swept = primary_union(u, v, SweptSource::kJnst);
  for (std::size_t l = 0; l < u.features.size(); ++l) {
    join_nearest(swept.views[0], u.features[l], v.features[l], options.segment_thickness);
    join_nearest(swept.views[0], v.features[l], u.features[l], options.segment_thickness);
  }
  return swept;
}

EdgeVerdict jnst_check(const simworld::PoseRecord& u, const simworld::PoseRecord& v,
                       const rle::IntervalRle& obstacle, const PlannerOptions& options) {
  return verdict_for(jnst_swept(u, v, options), std::span(&obstacle, 1), PlannerKind::kJnst, 0, 0);
}

EdgeVerdict gold_check(const simworld::RobotModel& model, const simworld::JointVector& q_u,
                       const simworld::JointVector& q_v, double eps,
                       const simworld::Canvas& canvas, const simworld::ObstacleField& obstacles) {
  if (!(eps > 0)) throw DomainError("gold resolution must be positive");
  EdgeVerdict out{0, 0, true, PlannerKind::kGold, 0};
  for (const simworld::JointVector& q : simworld::gold_interpolate(model, q_u, q_v, eps)) {
    if (!simworld::pose_collides(model, q, canvas, obstacles)) continue;
    const simworld::PoseRecord r = simworld::fk_render(model, q, canvas);
    std::uint64_t least = std::numeric_limits<std::uint64_t>::max();
    for (int view = 0; view < obstacles.view_count(); ++view) {
      least = std::min(least, rle::penetration(r.view_rles[view], obstacles.rle(view)));
    }
    out.safe = false;
    out.penetration = least;
    break;
  }
  return out;
}

GoldOracle::GoldOracle(simworld::RobotModel model, simworld::Canvas canvas,
                       simworld::ObstacleField obstacles, double eps)
    : model_(std::move(model)), canvas_(std::move(canvas)), obstacles_(std::move(obstacles)), eps_(eps) {
  if (!(eps > 0)) throw DomainError("gold resolution must be positive");
  if (obstacles_.view_count() != canvas_.view_count()) {
    throw DomainError("obstacle field and canvas differ in view count");
  }
}

EdgeVerdict GoldOracle::check(const simworld::JointVector& q_u,
                              const simworld::JointVector& q_v) const {
  return gold_check(model_, q_u, q_v, eps_, canvas_, obstacles_);
}

EdgeVerdict GoldOracle::verdict(NodeId u, NodeId v, const simworld::JointVector& q_u,
                                const simworld::JointVector& q_v) {
  const std::uint64_t key = (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  EdgeVerdict result = check(q_u, q_v);
  result.u = u;
  result.v = v;
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(key, result);
  return result;
}

std::size_t GoldOracle::cache_size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

EdgeVerdict check_edge(const vrm::Vrm& g, NodeId u, NodeId v, PlannerKind planner,
                       std::span<const rle::IntervalRle> obstacle_rles, GoldOracle& gold,
                       const PlannerOptions& options) {
  const simworld::PoseRecord& ru = g.record(u);
  const simworld::PoseRecord& rv = g.record(v);
  if (obstacle_rles.empty()) throw DomainError("no obstacle views");
  EdgeVerdict out{u, v, true, planner, 0};
  switch (planner) {
    case PlannerKind::kNone:
      return out;
    case PlannerKind::kLtsIntersection:
      return lts_check(g, u, v, obstacle_rles, LtsMode::kIntersection, options);
    case PlannerKind::kLtsUnion:
      return lts_check(g, u, v, obstacle_rles, LtsMode::kUnion, options);
    case PlannerKind::kLtsPca:
      return lts_check(g, u, v, obstacle_rles, LtsMode::kPca, options);
    case PlannerKind::kGold:
      out = u >= g.base_size() || v >= g.base_size() ? gold.check(ru.config, rv.config)
                                                      : gold.verdict(u, v, ru.config, rv.config);
      break;
    case PlannerKind::kJnst:
    case PlannerKind::kItp:
      if (planner == PlannerKind::kJnst) {
        try {
          out = jnst_check(ru, rv, obstacle_rles[0], options);
          break;
        } catch (const DegenerateFeatureError&) {
          // falls back to ITP below
        }
      }
      try {
        out = itp_check(ru, rv, obstacle_rles[0], options);
      } catch (const DomainError&) {
        out = lts_check(g, u, v, obstacle_rles, LtsMode::kUnion, options);
      }
      break;
  }
  out.u = u;
  out.v = v;
  return out;
}

double PruneStats::bad_remaining_pct() const {
  const std::size_t remaining = edges_total - edges_pruned;
  if (remaining == 0) return 0.0;
  return 100.0 * static_cast<double>(bad_remaining) / static_cast<double>(remaining);
}

std::size_t prune_edges(vrm::Vrm& g, PlannerKind planner,
                        std::span<const rle::IntervalRle> obstacle_rles, GoldOracle& gold,
                        const PlannerOptions& options, int threads, bool temporary_only) {
  std::vector<std::size_t> active;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const vrm::EdgeState& edge = g.edges()[e];
    if (g.is_active(edge) && (!temporary_only || edge.temporary)) active.push_back(e);
  }
  std::vector<char> safe(active.size(), 1);
  parallel_for(active.size(), threads, [&](std::size_t i) {
    const vrm::EdgeState& e = g.edges()[active[i]];
    safe[i] = check_edge(g, e.u, e.v, planner, obstacle_rles, gold, options).safe;
  });
  std::size_t pruned = 0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (!safe[i]) {
      g.set_pruned(active[i], true);
      ++pruned;
    }
  }
  return pruned;
}

PruneStats prune_and_score(vrm::Vrm& g, PlannerKind planner,
                           std::span<const rle::IntervalRle> obstacle_rles, GoldOracle& gold,
                           const PlannerOptions& options, int threads) {
  std::vector<std::size_t> active;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    if (g.is_active(g.edges()[e])) active.push_back(e);
  }
  std::vector<char> planner_safe(active.size(), 1);
  std::vector<char> gold_safe(active.size(), 1);
  parallel_for(active.size(), threads, [&](std::size_t i) {
    const vrm::EdgeState& e = g.edges()[active[i]];
    planner_safe[i] = check_edge(g, e.u, e.v, planner, obstacle_rles, gold, options).safe;
    gold_safe[i] = planner == PlannerKind::kGold
                       ? planner_safe[i]
                       : check_edge(g, e.u, e.v, PlannerKind::kGold, obstacle_rles, gold, options).safe;
  });

  PruneStats stats;
  stats.metric = g.metric().name();
  stats.planner = std::string(planner_name(planner));
  stats.n = g.base_size();
  stats.k = g.k();
  stats.edges_total = active.size();
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (!planner_safe[i]) {
      g.set_pruned(active[i], true);
      ++stats.edges_pruned;
      if (gold_safe[i]) ++stats.conservative_discards;
    } else if (!gold_safe[i]) {
      ++stats.bad_remaining;
    }
  }
  return stats;
}

}  // namespace vizplan::localplan
