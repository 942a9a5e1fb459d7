#ifndef VIZPLAN_LOCALPLAN_H_
#define VIZPLAN_LOCALPLAN_H_

#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vizplan/vrm.h"

// Edge-safety checks in image space and the joint-space oracle that scores
// them.
namespace vizplan::localplan {

using graph::NodeId;

enum class PlannerKind { kNone, kLtsIntersection, kLtsUnion, kLtsPca, kItp, kJnst, kGold };

// none, lts, lts-union, lts-pca, itp, jnst, gold.
PlannerKind parse_planner(std::string_view name);
std::string_view planner_name(PlannerKind kind);

inline constexpr double kDefaultGoldEps = 0.017453292519943295;  // 1 degree

enum class SweptSource { kLtsIntersection, kLtsUnion, kLtsPca, kItp, kJnst, kGold };

struct SweptImage {
  std::vector<BinaryImage> views;  // ITP and JNST fill the primary view only
  SweptSource source = SweptSource::kItp;
};

struct EdgeVerdict {
  NodeId u = 0;
  NodeId v = 0;
  bool safe = true;
  PlannerKind planner = PlannerKind::kNone;
  // Overlap with the obstacle, minimized over the checked views; 0 iff safe.
  std::uint64_t penetration = 0;
};

struct PlannerOptions {
  int segment_thickness = 1;
  int pca_steps = 10;          // interpolation steps for lts-pca
  double pca_threshold = 0.5;  // binarization of reconstructed images
};

enum class LtsMode { kIntersection, kUnion, kPca };

// Superimposition of the roadmap neighborhood images of u and v (pre-pruning,
// any status). Intersection mode falls back to the union when the shared
// neighborhood is only {u, v}.
SweptImage lts_swept(const vrm::Vrm& vrm, NodeId u, NodeId v, LtsMode mode,
                     const PlannerOptions& options = {});
EdgeVerdict lts_check(const vrm::Vrm& vrm, NodeId u, NodeId v,
                      std::span<const rle::IntervalRle> obstacle_rles, LtsMode mode,
                      const PlannerOptions& options = {});

// Endpoint masks plus segments joining corresponding tracked points.
SweptImage itp_swept(const simworld::PoseRecord& u, const simworld::PoseRecord& v,
                     const PlannerOptions& options = {});
EdgeVerdict itp_check(const simworld::PoseRecord& u, const simworld::PoseRecord& v,
                      const rle::IntervalRle& obstacle, const PlannerOptions& options = {});

// Endpoint masks plus segments from each feature to its nearest feature on
// the same link of the other pose, in both directions. Throws
// DegenerateFeatureError when some link has no features.
SweptImage jnst_swept(const simworld::PoseRecord& u, const simworld::PoseRecord& v,
                      const PlannerOptions& options = {});
EdgeVerdict jnst_check(const simworld::PoseRecord& u, const simworld::PoseRecord& v,
                       const rle::IntervalRle& obstacle, const PlannerOptions& options = {});

// Renders every gold_interpolate configuration; safe iff all are free under
// the multi-view rule.
EdgeVerdict gold_check(const simworld::RobotModel& model, const simworld::JointVector& q_u,
                       const simworld::JointVector& q_v, double eps,
                       const simworld::Canvas& canvas, const simworld::ObstacleField& obstacles);

// Gold verdicts cached by node pair. Node ids must refer to the same pose
// sample for every roadmap checked through one oracle.
class GoldOracle {
 public:
  GoldOracle(simworld::RobotModel model, simworld::Canvas canvas,
             simworld::ObstacleField obstacles, double eps = kDefaultGoldEps);

  EdgeVerdict verdict(NodeId u, NodeId v, const simworld::JointVector& q_u,
                      const simworld::JointVector& q_v);
  bool safe(NodeId u, NodeId v, const simworld::JointVector& q_u, const simworld::JointVector& q_v) {
    return verdict(u, v, q_u, q_v).safe;
  }
  EdgeVerdict check(const simworld::JointVector& q_u, const simworld::JointVector& q_v) const;
  double eps() const { return eps_; }
  std::size_t cache_size() const;

 private:
  simworld::RobotModel model_;
  simworld::Canvas canvas_;
  simworld::ObstacleField obstacles_;
  double eps_;
  mutable std::mutex mutex_;
  std::unordered_map<std::uint64_t, EdgeVerdict> cache_;
};

// Verdict of `planner` for one roadmap edge. kNone is always safe; kGold
// defers to the oracle. Feature degeneracy falls back jnst -> itp -> lts-union.
EdgeVerdict check_edge(const vrm::Vrm& vrm, NodeId u, NodeId v, PlannerKind planner,
                       std::span<const rle::IntervalRle> obstacle_rles, GoldOracle& gold,
                       const PlannerOptions& options = {});

// Marks the active edges `planner` rejects as pruned and returns how many.
// With `temporary_only` only endpoint edges are checked.
std::size_t prune_edges(vrm::Vrm& vrm, PlannerKind planner,
                        std::span<const rle::IntervalRle> obstacle_rles, GoldOracle& gold,
                        const PlannerOptions& options = {}, int threads = 1,
                        bool temporary_only = false);

struct PruneStats {
  std::string metric;
  std::string planner;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t edges_total = 0;            // active edges before pruning
  std::size_t edges_pruned = 0;           // rejected by the planner
  std::size_t bad_remaining = 0;          // kept but gold-unsafe
  std::size_t conservative_discards = 0;  // pruned but gold-safe
  double bad_remaining_pct() const;
};

// Prunes the active edges the planner rejects and scores what is left
// against the gold oracle. Collision nodes must already be marked.
PruneStats prune_and_score(vrm::Vrm& vrm, PlannerKind planner,
                           std::span<const rle::IntervalRle> obstacle_rles, GoldOracle& gold,
                           const PlannerOptions& options = {}, int threads = 1);

}  // namespace vizplan::localplan

#endif  // VIZPLAN_LOCALPLAN_H_
