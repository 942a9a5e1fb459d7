#ifndef VIZPLAN_FEATURES_H_
#define VIZPLAN_FEATURES_H_

#include <vector>

#include "vizplan/image.h"

namespace vizplan::metrics {

// Shi-Tomasi style corner detector parameters.
struct CornerParams {
  double sigma = 1.5;          // Gaussian pre-smoothing of the binary mask
  int window_radius = 1;       // structure tensor window (3x3)
  double nms_radius = 3.0;     // minimum spacing between accepted corners
  int max_points = 20;
  double quality_level = 0.05; // fraction of the strongest response
};

// Corners of a binary mask: local maxima of the minimum eigenvalue of the
// structure tensor, strongest first, returned as pixel centers. An empty
// mask yields no points.
std::vector<Point2> corner_features(const BinaryImage& mask, const CornerParams& params = {});

}  // namespace vizplan::metrics

#endif  // VIZPLAN_FEATURES_H_
