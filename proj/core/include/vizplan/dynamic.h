#ifndef VIZPLAN_DYNAMIC_H_
#define VIZPLAN_DYNAMIC_H_

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "vizplan/vrm.h"

// Replanning on a roadmap while obstacles move.
namespace vizplan::dynamic {

using graph::NodeId;

inline constexpr std::size_t kUnboundedHops = std::numeric_limits<std::size_t>::max();
inline constexpr std::uint64_t kUnboundedTau = std::numeric_limits<std::uint64_t>::max();

struct ObstacleTrack {
  std::vector<simworld::Scene> scenes;  // one per time step
  double max_displacement = 0.0;        // pixels per step

  // Throws DomainError when consecutive scenes differ in shape count or kind,
  // or some shape moves further than max_displacement.
  void validate(const simworld::Canvas& canvas) const;
  const simworld::Scene& at(std::size_t step) const;
};

// Largest distance any defining point of `a` moves to reach `b`.
double displacement(const simworld::Shape& a, const simworld::Shape& b);

// Collision nodes whose overlap with the obstacle is at most tau in every
// view.
std::vector<NodeId> boundary_nodes(const vrm::Vrm& vrm, std::span<const rle::IntervalRle> obstacle_rles,
                                   std::uint64_t tau);

struct UpdatePolicy {
  std::size_t hops = 3;   // kUnboundedHops re-evaluates every node
  std::uint64_t tau = 5;  // boundary touch threshold in pixels
};

struct UpdateResult {
  std::vector<NodeId> changed;      // nodes whose status flipped
  std::vector<NodeId> reevaluated;  // nodes whose status was recomputed
};

// Re-evaluates the previous collision nodes and every node within
// `policy.hops` base-graph hops of the boundary of the old obstacle. Without
// boundary nodes the ball is grown around the previous collision set; with
// no previous collisions, or unbounded hops, every node is re-evaluated.
UpdateResult update_for_moved_obstacle(vrm::Vrm& vrm, std::span<const rle::IntervalRle> old_rles,
                                       std::span<const rle::IntervalRle> new_rles,
                                       const UpdatePolicy& policy, int threads = 1);

enum class Event { kMoved, kWaited, kReplanned, kReached };
std::string_view event_name(Event event);

struct Frame {
  std::size_t time = 0;
  NodeId node = 0;  // robot node after the step
  std::size_t scene = 0;
  Event event = Event::kWaited;
};

struct SimTrace {
  std::vector<Frame> frames;
  bool reached = false;
  bool timed_out = false;
  std::size_t h_too_small = 0;  // audited steps where the hop-limited update missed a flip
};

struct RunOptions {
  UpdatePolicy policy;
  std::size_t max_steps = 200;
  bool audit = false;  // compare every hop-limited update with a full recompute
  int threads = 1;
};

// Executes the replan loop: at each step the roadmap is updated for the
// current scene, the robot waits if the goal is blocked or unreachable,
// otherwise it plans and advances one edge. Throws EndpointBlockedError if
// s or t collides at step 0.
SimTrace run(vrm::Vrm& vrm, const simworld::Canvas& canvas, const ObstacleTrack& track, NodeId s,
             NodeId t, const RunOptions& options = {});

}  // namespace vizplan::dynamic

#endif  // VIZPLAN_DYNAMIC_H_
