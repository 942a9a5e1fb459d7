#ifndef VIZPLAN_SIMWORLD_H_
#define VIZPLAN_SIMWORLD_H_

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vizplan/image.h"
#include "vizplan/rle.h"

// Simulated planar robots and obstacle scenes. This is the only place that
// knows the robot kinematics; it stands in for the camera and provides the
// ground-truth oracle used to score image-space planners.
namespace vizplan::simworld {

enum class RobotKind { kArm, kDisc };

struct JointLimit {
  double lo = 0.0;
  double hi = 0.0;

  // True when the joint wraps around (hi - lo spans a full turn).
  bool full_circle() const;
  friend bool operator==(const JointLimit&, const JointLimit&) = default;
};

struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

// Configuration q: joint angles in radians (arm) or center position in
// pixels (mobile disc).
class JointVector {
 public:
  JointVector() = default;
  explicit JointVector(std::vector<double> values) : values_(std::move(values)) {}
  JointVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const JointVector&, const JointVector&) = default;

 private:
  std::vector<double> values_;
};

struct RobotModel {
  RobotKind kind = RobotKind::kArm;
  int dof = 0;
  std::vector<double> link_lengths;  // pixels, arm only
  std::vector<double> link_widths;   // pixels, arm only
  std::vector<JointLimit> joint_limits;
  Point2 base;               // arm base pixel
  double disc_radius = 0.0;  // mobile disc only
  std::optional<PixelRect> mouth_region;

  // Planar serial arm; every joint rotates fully unless limits are given.
  static RobotModel arm(std::vector<double> link_lengths, std::vector<double> link_widths,
                        Point2 base, std::vector<JointLimit> limits = {});
  // Disc robot translating inside the given center box.
  static RobotModel disc(double radius, JointLimit x_range, JointLimit y_range);

  // Throws DomainError on any violated invariant.
  void validate() const;

  int link_count() const { return kind == RobotKind::kArm ? dof : 1; }
  // Number of ideal tracked points T.
  int tracked_count() const;

  friend bool operator==(const RobotModel&, const RobotModel&) = default;
};

// Orthographic camera: similarity transform from workspace to pixels.
struct ViewTransform {
  double scale = 1.0;
  double rotation = 0.0;  // radians
  Point2 offset;
  bool mirror = false;    // flip x before rotating

  Point2 apply(Point2 p) const;
  friend bool operator==(const ViewTransform&, const ViewTransform&) = default;
};

struct Canvas {
  int width = 100;
  int height = 100;
  std::vector<ViewTransform> views{ViewTransform{}};

  int view_count() const { return static_cast<int>(views.size()); }
  friend bool operator==(const Canvas&, const Canvas&) = default;
};

// Per-link corner feature points (primary view).
using FeatureSet = std::vector<std::vector<Point2>>;

// Rendered pose. Immutable once the metrics module has attached derived
// representations (features, projection); freely shareable across threads.
struct PoseRecord {
  JointVector config;
  std::vector<BinaryImage> views;          // combined mask per view
  std::vector<rle::IntervalRle> view_rles;  // encode(views[v])
  std::vector<BinaryImage> link_masks;     // primary view, one per link
  std::vector<Point2> tracked;             // primary view
  FeatureSet features;
  std::vector<double> projection;
};

using RecordPtr = std::shared_ptr<const PoseRecord>;

enum class ShapeKind { kRect, kDisc, kPolygon };

ShapeKind parse_shape_kind(std::string_view name);
std::string_view shape_kind_name(ShapeKind kind);

// Obstacle shape in workspace coordinates. A rectangle covers the pixels
// whose centers lie in [x0, x1] x [y0, y1]. `views` lists the camera views
// the shape appears in; empty means every view.
struct Shape {
  ShapeKind kind = ShapeKind::kRect;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  Point2 center;
  double radius = 0;
  std::vector<Point2> vertices;  // convex polygon
  std::vector<int> views;

  static Shape rect(double x0, double y0, double x1, double y1);
  static Shape disc(Point2 center, double radius);
  static Shape polygon(std::vector<Point2> vertices);

  bool in_view(int view) const;
  Shape translated(Point2 delta) const;
  // Reference point used to measure how far a shape moved.
  Point2 anchor() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

struct Scene {
  std::vector<Shape> obstacles;

  // Throws DomainError for malformed shapes or shapes outside the canvas.
  void validate(const Canvas& canvas) const;
  friend bool operator==(const Scene&, const Scene&) = default;
};

// Obstacle rasters for every view, with row prefix sums so that the overlap
// of a pixel span with the obstacles is O(1).
class ObstacleField {
 public:
  ObstacleField() = default;
  ObstacleField(const Scene& scene, const Canvas& canvas);

  int view_count() const { return static_cast<int>(masks_.size()); }
  const BinaryImage& mask(int view) const { return masks_[view]; }
  const rle::IntervalRle& rle(int view) const { return rles_[view]; }
  std::span<const rle::IntervalRle> rles() const { return rles_; }

  // Obstacle pixels in row y, columns [x0, x1) of the given view.
  std::uint32_t span_overlap(int view, int y, int x0, int x1) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<BinaryImage> masks_;
  std::vector<rle::IntervalRle> rles_;
  std::vector<std::vector<std::uint32_t>> prefix_;  // per view, (width+1) per row
};

// Checks dof/limits and wraps full-circle joints into [lo, lo + 2pi).
// Throws DomainError when a limited joint is out of range.
JointVector normalize_config(const RobotModel& model, const JointVector& config);

// Throws ConfigurationError if some reachable pose leaves the canvas.
void check_canvas(const RobotModel& model, const Canvas& canvas);

// Joint and tip positions in workspace coordinates: base, joint 1, ..., tip
// (arm) or just the center (disc).
std::vector<Point2> forward_kinematics(const RobotModel& model, const JointVector& config);

PoseRecord fk_render(const RobotModel& model, const JointVector& config,
                     const Canvas& canvas);

BinaryImage render_obstacles(const Scene& scene, const Canvas& canvas, int view);

// n i.i.d. uniform samples over the joint-limit box. Throws DomainError for n == 0.
std::vector<JointVector> sample_configs(const RobotModel& model, std::size_t n,
                                        std::uint64_t seed);

// Overlap between non-adjacent links, or between adjacent links outside the
// disc of radius link_width around their shared joint.
bool self_intersects(const RobotModel& model, const PoseRecord& record);

// Per-joint shortest-arc interpolation with steps of at most eps; both
// endpoints included.
std::vector<JointVector> gold_interpolate(const RobotModel& model, const JointVector& q_u,
                                          const JointVector& q_v, double eps);

// Equivalent to testing fk_render(...) against the obstacle masks with the
// multi-view rule (collision iff the robot overlaps in every view), without
// materializing images.
bool pose_collides(const RobotModel& model, const JointVector& config, const Canvas& canvas,
                   const ObstacleField& obstacles);

// Visits the raster spans (y, x0, x1) of a capsule: pixels whose centers
// lie within `radius` of the segment a-b, clipped to width x height.
void for_each_capsule_span(Point2 a, Point2 b, double radius, int width, int height,
                           const std::function<void(int, int, int)>& visit);

}  // namespace vizplan::simworld

#endif  // VIZPLAN_SIMWORLD_H_
