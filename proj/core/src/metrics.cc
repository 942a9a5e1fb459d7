#include "vizplan/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "vizplan/errors.h"
#include "vizplan/random.h"

namespace vizplan::metrics {

RandomProjector::RandomProjector(std::size_t d_in, std::size_t d_out, std::uint64_t seed)
    : d_in_(d_in), d_out_(d_out), seed_(seed), columns_(d_in * d_out) {
  if (d_in == 0 || d_out == 0) throw DomainError("projector dimensions must be positive");
  Rng rng(seed);
  std::vector<double> row(d_in);
  for (std::size_t r = 0; r < d_out; ++r) {
    double norm2 = 0;
    for (std::size_t c = 0; c < d_in; ++c) {
      row[c] = rng.gaussian();
      norm2 += row[c] * row[c];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t c = 0; c < d_in; ++c) columns_[c * d_out + r] = row[c] * inv;
  }
}

RandomProjector::RandomProjector(std::vector<std::vector<double>> rows)
    : d_in_(rows.empty() ? 0 : rows.front().size()), d_out_(rows.size()) {
  if (d_in_ == 0 || d_out_ == 0) throw DomainError("projector dimensions must be positive");
  columns_.resize(d_in_ * d_out_);
  for (std::size_t r = 0; r < d_out_; ++r) {
    if (rows[r].size() != d_in_) throw DomainError("projector rows differ in length");
    for (std::size_t c = 0; c < d_in_; ++c) columns_[c * d_out_ + r] = rows[r][c];
  }
}

std::vector<double> RandomProjector::row(std::size_t r) const {
  std::vector<double> out(d_in_);
  for (std::size_t c = 0; c < d_in_; ++c) out[c] = columns_[c * d_out_ + r];
  return out;
}

std::vector<double> RandomProjector::project(std::span<const double> x) const {
  if (x.size() != d_in_) throw DomainError("projection input has the wrong length");
  std::vector<double> out(d_out_, 0.0);
  for (std::size_t c = 0; c < d_in_; ++c) {
    if (x[c] == 0.0) continue;
    const double* col = columns_.data() + c * d_out_;
    for (std::size_t r = 0; r < d_out_; ++r) out[r] += x[c] * col[r];
  }
  return out;
}

std::vector<double> RandomProjector::project(const PoseRecord& record) const {
  std::size_t total = 0;
  for (const BinaryImage& v : record.views) total += v.pixel_count();
  if (total != d_in_) throw DomainError("projection input has the wrong length");
  std::vector<double> out(d_out_, 0.0);
  std::size_t base = 0;
  for (const BinaryImage& view : record.views) {
    const rle::IntervalRle runs = rle::encode(view);
    for (const rle::Interval& iv : runs.intervals()) {
      for (std::size_t i = iv.lb; i < iv.ub; ++i) {
        const double* col = columns_.data() + (base + i) * d_out_;
        for (std::size_t r = 0; r < d_out_; ++r) out[r] += col[r];
      }
    }
    base += view.pixel_count();
  }
  return out;
}

double image_l2(const PoseRecord& a, const PoseRecord& b) {
  if (a.views.size() != b.views.size()) throw DomainError("records differ in view count");
  std::size_t diff = 0;
  for (std::size_t v = 0; v < a.views.size(); ++v) diff += hamming_distance(a.views[v], b.views[v]);
  return std::sqrt(static_cast<double>(diff));
}

double angle_geodesic(const JointVector& q1, const JointVector& q2) {
  if (q1.size() != q2.size()) throw DomainError("joint vectors differ in dof");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double total = 0;
  for (std::size_t j = 0; j < q1.size(); ++j) {
    double d = std::fmod(std::abs(q1[j] - q2[j]), kTwoPi);
    total += std::min(d, kTwoPi - d);
  }
  return total;
}

double itp_l2(const PoseRecord& a, const PoseRecord& b) {
  if (a.tracked.size() != b.tracked.size()) throw DomainError("tracked point counts differ");
  double total = 0;
  for (std::size_t i = 0; i < a.tracked.size(); ++i) {
    total += squared_distance(a.tracked[i], b.tracked[i]);
  }
  return std::sqrt(total);
}

namespace {

double directed_hausdorff2(std::span<const Point2> from, std::span<const Point2> to) {
  double worst = 0;
  for (const Point2& p : from) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Point2& q : to) {
      nearest = std::min(nearest, squared_distance(p, q));
      if (nearest <= worst) break;  // cannot raise the supremum
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace

double hausdorff(std::span<const Point2> a, std::span<const Point2> b) {
  if (a.empty() || b.empty()) throw DomainError("Hausdorff distance of an empty set");
  return std::sqrt(std::max(directed_hausdorff2(a, b), directed_hausdorff2(b, a)));
}

double linkwise_hausdorff(const PoseRecord& a, const PoseRecord& b) {
  if (a.features.size() != b.features.size()) throw DomainError("records differ in link count");
  if (a.features.empty()) throw DegenerateFeatureError("records carry no features");
  double total = 0;
  for (std::size_t l = 0; l < a.features.size(); ++l) {
    if (a.features[l].empty() || b.features[l].empty()) {
      throw DegenerateFeatureError("link " + std::to_string(l) + " has no corner features");
    }
    total += hausdorff(a.features[l], b.features[l]);
  }
  return total;
}

simworld::FeatureSet extract_features(const PoseRecord& record, const CornerParams& params) {
  simworld::FeatureSet features;
  features.reserve(record.link_masks.size());
  for (const BinaryImage& mask : record.link_masks) {
    features.push_back(corner_features(mask, params));
  }
  return features;
}

double RandomProjectionMetric::distance(const PoseRecord& a, const PoseRecord& b) const {
  const std::size_t d = projector_->output_dim();
  const std::vector<double> pa = a.projection.size() == d ? a.projection : projector_->project(a);
  const std::vector<double> pb = b.projection.size() == d ? b.projection : projector_->project(b);
  double total = 0;
  for (std::size_t r = 0; r < d; ++r) total += (pa[r] - pb[r]) * (pa[r] - pb[r]);
  return std::sqrt(total);
}

void RandomProjectionMetric::prepare(PoseRecord& record) const {
  record.projection = projector_->project(record);
}

double LinkHausdorffMetric::distance(const PoseRecord& a, const PoseRecord& b) const {
  try {
    return linkwise_hausdorff(a, b);
  } catch (const DegenerateFeatureError&) {
    return itp_l2(a, b);
  }
}

void LinkHausdorffMetric::prepare(PoseRecord& record) const {
  if (record.features.size() != record.link_masks.size()) {
    record.features = extract_features(record, params_);
  }
}

namespace {

void check_weights(const CombinedWeights& w) {
  if (w.full_arm < 0 || w.hand < 0 || w.angle < 0) {
    throw DomainError("combined metric weights must be non-negative");
  }
  if (w.full_arm == 0 && w.hand == 0 && w.angle == 0) {
    throw DomainError("combined metric weights must not all be zero");
  }
}

std::string format_weight(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

double combined(const CombinedWeights& weights, const Metric& full_arm, const Metric& hand,
                const Metric& angle, const PoseRecord& a, const PoseRecord& b) {
  check_weights(weights);
  double total = 0;
  if (weights.full_arm != 0) total += weights.full_arm * full_arm.distance(a, b);
  if (weights.hand != 0) total += weights.hand * hand.distance(a, b);
  if (weights.angle != 0) total += weights.angle * angle.distance(a, b);
  return total;
}

CombinedMetric::CombinedMetric(CombinedWeights weights, MetricPtr full_arm, MetricPtr hand,
                               MetricPtr angle)
    : weights_(weights),
      full_arm_(std::move(full_arm)),
      hand_(std::move(hand)),
      angle_(std::move(angle)) {
  check_weights(weights_);
  if (!full_arm_ || !hand_ || !angle_) throw DomainError("combined metric needs three components");
}

std::string CombinedMetric::name() const {
  return "combined:" + format_weight(weights_.full_arm) + "," + format_weight(weights_.hand) +
         "," + format_weight(weights_.angle);
}

double CombinedMetric::distance(const PoseRecord& a, const PoseRecord& b) const {
  return combined(weights_, *full_arm_, *hand_, *angle_, a, b);
}

void CombinedMetric::prepare(PoseRecord& record) const {
  full_arm_->prepare(record);
  hand_->prepare(record);
  angle_->prepare(record);
}

namespace {

double parse_weight(std::string_view text) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("malformed combined metric weight '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

MetricPtr make_metric(std::string_view name, const MetricOptions& options) {
  if (name == "img-l2") return std::make_shared<ImageL2Metric>();
  if (name == "theta-g") return std::make_shared<AngleGeodesicMetric>();
  if (name == "itp-l2") return std::make_shared<ItpL2Metric>();
  if (name == "st-h") return std::make_shared<LinkHausdorffMetric>(options.corners);
  if (name == "rp-l2") {
    if (options.input_dim == 0) throw DomainError("rp-l2 needs the image dimension");
    return std::make_shared<RandomProjectionMetric>(std::make_shared<RandomProjector>(
        options.input_dim, options.projector_dim, options.projector_seed));
  }
  constexpr std::string_view kCombined = "combined:";
  if (name.starts_with(kCombined)) {
    std::string_view rest = name.substr(kCombined.size());
    std::vector<double> w;
    while (true) {
      const std::size_t comma = rest.find(',');
      w.push_back(parse_weight(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (w.size() != 3) throw DomainError("combined metric needs three weights");
    return std::make_shared<CombinedMetric>(CombinedWeights{w[0], w[1], w[2]},
                                            std::make_shared<ImageL2Metric>(),
                                            std::make_shared<ItpL2Metric>(),
                                            std::make_shared<AngleGeodesicMetric>());
  }
  throw DomainError("unknown metric '" + std::string(name) + "'");
}

}  // namespace vizplan::metrics
