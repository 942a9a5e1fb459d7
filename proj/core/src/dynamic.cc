#include "vizplan/dynamic.h"

#include <algorithm>
#include <map>

#include "vizplan/errors.h"
#include "vizplan/parallel.h"

namespace vizplan::dynamic {

double displacement(const simworld::Shape& a, const simworld::Shape& b) {
  if (a.kind != b.kind) throw DomainError("obstacle changed shape kind between steps");
  switch (a.kind) {
    case simworld::ShapeKind::kRect:
      return std::max(distance({a.x0, a.y0}, {b.x0, b.y0}), distance({a.x1, a.y1}, {b.x1, b.y1}));
    case simworld::ShapeKind::kDisc:
      return distance(a.center, b.center) + std::abs(a.radius - b.radius);
    case simworld::ShapeKind::kPolygon: {
      if (a.vertices.size() != b.vertices.size()) {
        throw DomainError("obstacle polygon changed vertex count between steps");
      }
      double worst = 0;
      for (std::size_t i = 0; i < a.vertices.size(); ++i) {
        worst = std::max(worst, distance(a.vertices[i], b.vertices[i]));
      }
      return worst;
    }
  }
  return 0.0;
}

void ObstacleTrack::validate(const simworld::Canvas& canvas) const {
  if (scenes.empty()) throw DomainError("obstacle track has no scenes");
  if (!(max_displacement >= 0)) throw DomainError("displacement bound must be non-negative");
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    scenes[i].validate(canvas);
    if (i == 0) continue;
    const auto& prev = scenes[i - 1].obstacles;
    const auto& next = scenes[i].obstacles;
    if (prev.size() != next.size()) {
      throw DomainError("obstacle count changes at step " + std::to_string(i));
    }
    for (std::size_t j = 0; j < prev.size(); ++j) {
      if (displacement(prev[j], next[j]) > max_displacement + 1e-9) {
        throw DomainError("obstacle " + std::to_string(j) + " moves too far at step " +
                          std::to_string(i));
      }
    }
  }
}

const simworld::Scene& ObstacleTrack::at(std::size_t step) const {
  return scenes.at(std::min(step, scenes.size() - 1));
}

std::vector<NodeId> boundary_nodes(const vrm::Vrm& g, std::span<const rle::IntervalRle> obstacle_rles,
                                   std::uint64_t tau) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < g.base_size(); ++i) {
    const auto id = static_cast<NodeId>(i);
    if (g.is_free(id)) continue;
    const simworld::PoseRecord& r = g.record(id);
    bool touching = !obstacle_rles.empty();
    for (std::size_t v = 0; v < obstacle_rles.size() && touching; ++v) {
      const std::uint64_t pen = rle::penetration(r.view_rles[v], obstacle_rles[v]);
      touching = pen > 0 && pen <= tau;
    }
    if (touching) out.push_back(id);
  }
  return out;
}

UpdateResult update_for_moved_obstacle(vrm::Vrm& g, std::span<const rle::IntervalRle> old_rles,
                                       std::span<const rle::IntervalRle> new_rles,
                                       const UpdatePolicy& policy, int threads) {
  const std::size_t n = g.base_size();
  std::vector<NodeId> previous;
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.is_free(static_cast<NodeId>(i))) previous.push_back(static_cast<NodeId>(i));
  }

  UpdateResult result;
  if (policy.hops == kUnboundedHops || previous.empty()) {
    result.reevaluated.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.reevaluated[i] = static_cast<NodeId>(i);
  } else {
    const std::vector<NodeId> boundary = boundary_nodes(g, old_rles, policy.tau);
    const std::vector<NodeId>& seeds = boundary.empty() ? previous : boundary;
    std::vector<NodeId> ball = graph::hop_ball(g.base_adjacency(), seeds, policy.hops);
    std::set_union(ball.begin(), ball.end(), previous.begin(), previous.end(),
                   std::back_inserter(result.reevaluated));
  }

  std::vector<char> hit(result.reevaluated.size(), 0);
  parallel_for(result.reevaluated.size(), threads, [&](std::size_t i) {
    hit[i] = vrm::in_collision(g.record(result.reevaluated[i]), new_rles) ? 1 : 0;
  });
  for (std::size_t i = 0; i < hit.size(); ++i) {
    const NodeId id = result.reevaluated[i];
    const auto status = hit[i] ? vrm::NodeStatus::kCollision : vrm::NodeStatus::kFree;
    if (g.node(id).status != status) {
      g.set_status(id, status);
      result.changed.push_back(id);
    }
  }
  return result;
}

std::string_view event_name(Event event) {
  switch (event) {
    case Event::kMoved:
      return "moved";
    case Event::kWaited:
      return "waited";
    case Event::kReplanned:
      return "replanned";
    case Event::kReached:
      return "reached";
  }
  return "unknown";
}

SimTrace run(vrm::Vrm& g, const simworld::Canvas& canvas, const ObstacleTrack& track, NodeId s,
             NodeId t, const RunOptions& options) {
  track.validate(canvas);
  if (s >= g.base_size() || t >= g.base_size()) throw DomainError("run endpoints must be roadmap nodes");

  std::map<std::size_t, std::vector<rle::IntervalRle>> rle_cache;
  auto rles_at = [&](std::size_t step) -> const std::vector<rle::IntervalRle>& {
    const std::size_t index = std::min(step, track.scenes.size() - 1);
    auto it = rle_cache.find(index);
    if (it == rle_cache.end()) {
      const simworld::ObstacleField field(track.scenes[index], canvas);
      it = rle_cache.emplace(index, std::vector<rle::IntervalRle>(field.rles().begin(), field.rles().end()))
               .first;
    }
    return it->second;
  };

  SimTrace trace;
  NodeId current = s;
  std::vector<NodeId> plan;  // remaining plan, starting at the current node
  for (std::size_t step = 0; step < options.max_steps; ++step) {
    const std::size_t scene = std::min(step, track.scenes.size() - 1);
    if (step == 0) {
      vrm::mark_collision_nodes(g, rles_at(0), options.threads);
      if (!g.is_free(s) || !g.is_free(t)) {
        throw EndpointBlockedError("start or goal collides with the initial scene");
      }
    } else if (scene != std::min(step - 1, track.scenes.size() - 1)) {
      update_for_moved_obstacle(g, rles_at(step - 1), rles_at(step), options.policy, options.threads);
      if (options.audit) {
        for (std::size_t i = 0; i < g.base_size(); ++i) {
          const auto id = static_cast<NodeId>(i);
          if (vrm::in_collision(g.record(id), rles_at(step)) == g.is_free(id)) {
            ++trace.h_too_small;
            break;
          }
        }
      }
    }

    Frame frame{step, current, scene, Event::kWaited};
    if (current == t) {
      frame.event = Event::kReached;
    } else if (g.is_free(t) && g.is_free(current)) {
      const vrm::PathResult path = vrm::shortest_path(g, current, t);
      if (path.found) {
        frame.event = plan.empty() || path.nodes == plan ? Event::kMoved : Event::kReplanned;
        plan.assign(path.nodes.begin() + 1, path.nodes.end());
        current = plan.front();
        frame.node = current;
        if (current == t) frame.event = Event::kReached;
      }
    }
    trace.frames.push_back(frame);
    if (frame.event == Event::kReached) {
      trace.reached = true;
      return trace;
    }
  }
  trace.timed_out = true;
  return trace;
}

}  // namespace vizplan::dynamic
