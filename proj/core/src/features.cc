#include "vizplan/features.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vizplan::metrics {

std::vector<Point2> corner_features(const BinaryImage& mask, const CornerParams& params) {
  // Bounding box of the foreground.
  int bx0 = mask.width();
  int by0 = mask.height();
  int bx1 = -1;
  int by1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.get(x, y)) continue;
      bx0 = std::min(bx0, x);
      by0 = std::min(by0, y);
      bx1 = std::max(bx1, x);
      by1 = std::max(by1, y);
    }
  }
  if (bx1 < 0) return {};

  const int kr = std::max(1, static_cast<int>(std::ceil(3.0 * params.sigma)));
  const int margin = kr + params.window_radius + 2;
  const int x0 = bx0 - margin;
  const int y0 = by0 - margin;
  const int w = bx1 - bx0 + 1 + 2 * margin;
  const int h = by1 - by0 + 1 + 2 * margin;
  auto at = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

  std::vector<double> kernel(2 * kr + 1);
  for (int i = -kr; i <= kr; ++i) {
    kernel[i + kr] = std::exp(-0.5 * i * i / (params.sigma * params.sigma));
  }
  const double ksum = std::accumulate(kernel.begin(), kernel.end(), 0.0);
  for (double& k : kernel) k /= ksum;

  std::vector<double> src(static_cast<std::size_t>(w) * h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int gx = x0 + x;
      const int gy = y0 + y;
      if (mask.in_bounds(gx, gy) && mask.get(gx, gy)) src[at(x, y)] = 1.0;
    }
  }
  std::vector<double> tmp(src.size(), 0.0);
  std::vector<double> smooth(src.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -kr; i <= kr; ++i) {
        const int xx = x + i;
        if (xx >= 0 && xx < w) acc += kernel[i + kr] * src[at(xx, y)];
      }
      tmp[at(x, y)] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -kr; i <= kr; ++i) {
        const int yy = y + i;
        if (yy >= 0 && yy < h) acc += kernel[i + kr] * tmp[at(x, yy)];
      }
      smooth[at(x, y)] = acc;
    }
  }

  std::vector<double> ixx(src.size(), 0.0);
  std::vector<double> ixy(src.size(), 0.0);
  std::vector<double> iyy(src.size(), 0.0);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double gx = 0.5 * (smooth[at(x + 1, y)] - smooth[at(x - 1, y)]);
      const double gy = 0.5 * (smooth[at(x, y + 1)] - smooth[at(x, y - 1)]);
      ixx[at(x, y)] = gx * gx;
      ixy[at(x, y)] = gx * gy;
      iyy[at(x, y)] = gy * gy;
    }
  }

  const int wr = params.window_radius;
  std::vector<double> score(src.size(), 0.0);
  double best = 0;
  for (int y = wr; y + wr < h; ++y) {
    for (int x = wr; x + wr < w; ++x) {
      double a = 0, b = 0, c = 0;
      for (int dy = -wr; dy <= wr; ++dy) {
        for (int dx = -wr; dx <= wr; ++dx) {
          a += ixx[at(x + dx, y + dy)];
          b += ixy[at(x + dx, y + dy)];
          c += iyy[at(x + dx, y + dy)];
        }
      }
      const double half_diff = 0.5 * (a - c);
      const double s = 0.5 * (a + c) - std::sqrt(half_diff * half_diff + b * b);
      score[at(x, y)] = s;
      best = std::max(best, s);
    }
  }
  if (best <= 0) return {};

  struct Candidate {
    double score;
    int x;
    int y;
  };
  std::vector<Candidate> candidates;
  const double floor_score = params.quality_level * best;
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double s = score[at(x, y)];
      if (s <= 0 || s < floor_score) continue;
      bool peak = true;
      for (int dy = -1; dy <= 1 && peak; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if ((dx != 0 || dy != 0) && score[at(x + dx, y + dy)] > s) {
            peak = false;
            break;
          }
        }
      }
      const int gx = x0 + x;
      const int gy = y0 + y;
      if (peak && mask.in_bounds(gx, gy)) candidates.push_back({s, gx, gy});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& p, const Candidate& q) { return p.score > q.score; });

  std::vector<Point2> accepted;
  const double min_d2 = params.nms_radius * params.nms_radius;
  for (const Candidate& cand : candidates) {
    if (static_cast<int>(accepted.size()) >= params.max_points) break;
    const Point2 p{cand.x + 0.5, cand.y + 0.5};
    const bool crowded = std::any_of(accepted.begin(), accepted.end(),
                                     [&](Point2 q) { return squared_distance(p, q) < min_d2; });
    if (!crowded) accepted.push_back(p);
  }
  return accepted;
}

}  // namespace vizplan::metrics
