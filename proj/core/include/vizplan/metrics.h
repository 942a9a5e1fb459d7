#ifndef VIZPLAN_METRICS_H_
#define VIZPLAN_METRICS_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vizplan/features.h"
#include "vizplan/simworld.h"

// Pose-to-pose distances used to build roadmaps.
namespace vizplan::metrics {

using simworld::JointVector;
using simworld::PoseRecord;

// d_out Gaussian random directions in R^d_in, each normalized to unit
// length. Fully determined by (d_in, d_out, seed).
class RandomProjector {
 public:
  RandomProjector(std::size_t d_in, std::size_t d_out, std::uint64_t seed);
  // Explicit rows (each must have length d_in); rows are used as given.
  explicit RandomProjector(std::vector<std::vector<double>> rows);

  std::size_t input_dim() const { return d_in_; }
  std::size_t output_dim() const { return d_out_; }
  std::uint64_t seed() const { return seed_; }
  std::vector<double> row(std::size_t r) const;

  std::vector<double> project(std::span<const double> x) const;
  // Projection of the concatenated binary views of a record (0/1 entries).
  std::vector<double> project(const PoseRecord& record) const;

 private:
  std::size_t d_in_ = 0;
  std::size_t d_out_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> columns_;  // column-major: entry (r, c) at c * d_out + r
};

// L2 distance between the flattened (view-concatenated) 0/1 images.
double image_l2(const PoseRecord& a, const PoseRecord& b);

// Sum over joints of the shortest circular distance.
double angle_geodesic(const JointVector& q1, const JointVector& q2);

// L2 distance between the concatenated tracked-point coordinates.
double itp_l2(const PoseRecord& a, const PoseRecord& b);

// Symmetric Hausdorff distance; throws DomainError on an empty set.
double hausdorff(std::span<const Point2> a, std::span<const Point2> b);

// Sum over links of the Hausdorff distance between per-link corner sets.
// Throws DegenerateFeatureError when some link has no features.
double linkwise_hausdorff(const PoseRecord& a, const PoseRecord& b);

// Per-link corner features of a rendered record.
simworld::FeatureSet extract_features(const PoseRecord& record, const CornerParams& params = {});

enum class MetricKind { kImageL2, kRandomProjectionL2, kAngleGeodesic, kItpL2, kLinkHausdorff, kCombined };

// Pluggable distance over pose records. Implementations are pure: the same
// pair always yields a bit-identical value, from any thread.
class Metric {
 public:
  virtual ~Metric() = default;
  virtual MetricKind kind() const = 0;
  // Canonical name as accepted by make_metric.
  virtual std::string name() const = 0;
  virtual double distance(const PoseRecord& a, const PoseRecord& b) const = 0;
  // Attaches whatever derived representation distance() relies on
  // (features, projection). Must be called before records are shared.
  virtual void prepare(PoseRecord& record) const { (void)record; }

  double operator()(const PoseRecord& a, const PoseRecord& b) const { return distance(a, b); }
};

using MetricPtr = std::shared_ptr<const Metric>;

class ImageL2Metric final : public Metric {
 public:
  MetricKind kind() const override { return MetricKind::kImageL2; }
  std::string name() const override { return "img-l2"; }
  double distance(const PoseRecord& a, const PoseRecord& b) const override {
    return image_l2(a, b);
  }
};

class RandomProjectionMetric final : public Metric {
 public:
  explicit RandomProjectionMetric(std::shared_ptr<const RandomProjector> projector)
      : projector_(std::move(projector)) {}
  MetricKind kind() const override { return MetricKind::kRandomProjectionL2; }
  std::string name() const override { return "rp-l2"; }
  double distance(const PoseRecord& a, const PoseRecord& b) const override;
  void prepare(PoseRecord& record) const override;

 private:
  std::shared_ptr<const RandomProjector> projector_;
};

class AngleGeodesicMetric final : public Metric {
 public:
  MetricKind kind() const override { return MetricKind::kAngleGeodesic; }
  std::string name() const override { return "theta-g"; }
  double distance(const PoseRecord& a, const PoseRecord& b) const override {
    return angle_geodesic(a.config, b.config);
  }
};

class ItpL2Metric final : public Metric {
 public:
  MetricKind kind() const override { return MetricKind::kItpL2; }
  std::string name() const override { return "itp-l2"; }
  double distance(const PoseRecord& a, const PoseRecord& b) const override {
    return itp_l2(a, b);
  }
};

// Link-wise Hausdorff on corner features. A pair where some link has no
// features falls back to itp_l2.
class LinkHausdorffMetric final : public Metric {
 public:
  explicit LinkHausdorffMetric(CornerParams params = {}) : params_(params) {}
  MetricKind kind() const override { return MetricKind::kLinkHausdorff; }
  std::string name() const override { return "st-h"; }
  double distance(const PoseRecord& a, const PoseRecord& b) const override;
  void prepare(PoseRecord& record) const override;

 private:
  CornerParams params_;
};

struct CombinedWeights {
  double full_arm = 1.0;  // alpha
  double hand = 1.0;      // beta
  double angle = 1.0;     // gamma
};

// alpha * d_full_arm + beta * d_hand + gamma * d_angle.
// Throws DomainError for negative or all-zero weights.
double combined(const CombinedWeights& weights, const Metric& full_arm, const Metric& hand,
                const Metric& angle, const PoseRecord& a, const PoseRecord& b);

class CombinedMetric final : public Metric {
 public:
  CombinedMetric(CombinedWeights weights, MetricPtr full_arm, MetricPtr hand, MetricPtr angle);
  MetricKind kind() const override { return MetricKind::kCombined; }
  std::string name() const override;
  double distance(const PoseRecord& a, const PoseRecord& b) const override;
  void prepare(PoseRecord& record) const override;
  const CombinedWeights& weights() const { return weights_; }

 private:
  CombinedWeights weights_;
  MetricPtr full_arm_;
  MetricPtr hand_;
  MetricPtr angle_;
};

struct MetricOptions {
  std::uint64_t projector_seed = 0;
  std::size_t projector_dim = 2000;
  std::size_t input_dim = 0;  // width * height * views; required for rp-l2
  CornerParams corners;
};

// Builds a metric from its CLI name: img-l2, rp-l2, theta-g, itp-l2, st-h,
// combined:a,b,c (components img-l2, itp-l2, theta-g). Throws DomainError
// for unknown names.
MetricPtr make_metric(std::string_view name, const MetricOptions& options = {});

}  // namespace vizplan::metrics

#endif  // VIZPLAN_METRICS_H_
