#include "vizplan/simworld.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vizplan/errors.h"
#include "vizplan/random.h"

namespace vizplan::simworld {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Continuous x-interval of a horizontal line, narrowed by linear constraints.
struct LineInterval {
  double lo = -kInf;
  double hi = kInf;

  bool empty() const { return !(lo <= hi); }

  // Keeps the x with slope * x + offset >= 0.
  void require(double slope, double offset) {
    if (slope > 0) {
      lo = std::max(lo, -offset / slope);
    } else if (slope < 0) {
      hi = std::min(hi, -offset / slope);
    } else if (offset < 0) {
      lo = kInf;
      hi = -kInf;
    }
  }
};

void emit_row(int y, const LineInterval& iv, int width,
              const std::function<void(int, int, int)>& visit) {
  if (iv.empty()) return;
  const double first = std::ceil(iv.lo - 0.5);
  const double last = std::floor(iv.hi - 0.5);
  const int x0 = static_cast<int>(std::max(first, 0.0));
  const int x1 = static_cast<int>(std::min(last + 1.0, static_cast<double>(width)));
  if (x0 < x1) visit(y, x0, x1);
}

std::pair<int, int> row_range(double y_min, double y_max, int height) {
  const int first = static_cast<int>(std::max(std::ceil(y_min - 0.5), 0.0));
  const int last = static_cast<int>(
      std::min(std::floor(y_max - 0.5), static_cast<double>(height - 1)));
  return {first, last};
}

void disc_interval(Point2 c, double r, double yc, LineInterval& out) {
  const double dy = yc - c.y;
  const double h = r * r - dy * dy;
  if (h < 0) return;
  const double s = std::sqrt(h);
  out.lo = std::min(out.lo, c.x - s);
  out.hi = std::max(out.hi, c.x + s);
}

void convex_polygon_spans(std::span<const Point2> pts, int width, int height,
                          const std::function<void(int, int, int)>& visit) {
  double area = 0;
  double y_min = kInf;
  double y_max = -kInf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 a = pts[i];
    const Point2 b = pts[(i + 1) % pts.size()];
    area += a.x * b.y - b.x * a.y;
    y_min = std::min(y_min, a.y);
    y_max = std::max(y_max, a.y);
  }
  const double orient = area >= 0 ? 1.0 : -1.0;
  const auto [first, last] = row_range(y_min, y_max, height);
  for (int y = first; y <= last; ++y) {
    const double yc = y + 0.5;
    LineInterval iv;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point2 a = pts[i];
      const Point2 b = pts[(i + 1) % pts.size()];
      const double ex = b.x - a.x;
      const double ey = b.y - a.y;
      // orient * cross(e, p - a) >= 0
      iv.require(orient * -ey, orient * (ex * (yc - a.y) + ey * a.x));
    }
    emit_row(y, iv, width, visit);
  }
}

Point2 view_apply(const Canvas& canvas, int view, Point2 p) { return canvas.views[view].apply(p); }

double capsule_radius(const RobotModel& model, int link) {
  return model.kind == RobotKind::kArm ? 0.5 * model.link_widths[link] : model.disc_radius;
}

// Segment endpoints of every link in workspace coordinates.
std::vector<std::pair<Point2, Point2>> link_segments(const RobotModel& model,
                                                     const std::vector<Point2>& joints) {
  std::vector<std::pair<Point2, Point2>> segs;
  if (model.kind == RobotKind::kDisc) {
    segs.emplace_back(joints[0], joints[0]);
  } else {
    for (int l = 0; l < model.dof; ++l) segs.emplace_back(joints[l], joints[l + 1]);
  }
  return segs;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

bool JointLimit::full_circle() const { return hi - lo >= kTwoPi - 1e-9; }

RobotModel RobotModel::arm(std::vector<double> link_lengths, std::vector<double> link_widths,
                           Point2 base, std::vector<JointLimit> limits) {
  RobotModel m;
  m.kind = RobotKind::kArm;
  m.dof = static_cast<int>(link_lengths.size());
  m.link_lengths = std::move(link_lengths);
  m.link_widths = std::move(link_widths);
  m.base = base;
  if (limits.empty()) {
    limits.assign(static_cast<std::size_t>(m.dof), JointLimit{-std::numbers::pi, std::numbers::pi});
  }
  m.joint_limits = std::move(limits);
  m.validate();
  return m;
}

RobotModel RobotModel::disc(double radius, JointLimit x_range, JointLimit y_range) {
  RobotModel m;
  m.kind = RobotKind::kDisc;
  m.dof = 2;
  m.disc_radius = radius;
  m.joint_limits = {x_range, y_range};
  m.validate();
  return m;
}

void RobotModel::validate() const {
  if (dof < 1) throw DomainError("robot needs at least one degree of freedom");
  if (static_cast<int>(joint_limits.size()) != dof) {
    throw DomainError("joint_limits must have one entry per degree of freedom");
  }
  for (const JointLimit& lim : joint_limits) {
    require_finite(lim.lo, "joint limit");
    require_finite(lim.hi, "joint limit");
    if (!(lim.lo < lim.hi)) throw DomainError("joint limit needs lo < hi");
  }
  if (kind == RobotKind::kArm) {
    if (static_cast<int>(link_lengths.size()) != dof ||
        static_cast<int>(link_widths.size()) != dof) {
      throw DomainError("arm needs one length and one width per link");
    }
    for (double len : link_lengths) {
      require_finite(len, "link length");
      if (len <= 0) throw DomainError("link lengths must be positive");
    }
    for (double w : link_widths) {
      require_finite(w, "link width");
      if (w < 1) throw DomainError("link widths must be at least 1 pixel");
    }
    for (const JointLimit& lim : joint_limits) {
      if (lim.hi - lim.lo > kTwoPi + 1e-9) {
        throw DomainError("joint limit interval exceeds a full turn");
      }
    }
  } else {
    if (dof != 2) throw DomainError("mobile disc has exactly 2 degrees of freedom");
    require_finite(disc_radius, "disc radius");
    if (disc_radius <= 0) throw DomainError("disc radius must be positive");
  }
}

int RobotModel::tracked_count() const {
  return kind == RobotKind::kArm ? 2 * dof + 1 : 5;
}

Point2 ViewTransform::apply(Point2 p) const {
  const double x = mirror ? -p.x : p.x;
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  return {offset.x + scale * (c * x - s * p.y), offset.y + scale * (s * x + c * p.y)};
}

ShapeKind parse_shape_kind(std::string_view name) {
  if (name == "rect") return ShapeKind::kRect;
  if (name == "disc") return ShapeKind::kDisc;
  if (name == "polygon") return ShapeKind::kPolygon;
  throw DomainError("unknown shape kind '" + std::string(name) + "'");
}

std::string_view shape_kind_name(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kRect:
      return "rect";
    case ShapeKind::kDisc:
      return "disc";
    case ShapeKind::kPolygon:
      return "polygon";
  }
  throw DomainError("unknown shape kind");
}

Shape Shape::rect(double x0, double y0, double x1, double y1) {
  Shape s;
  s.kind = ShapeKind::kRect;
  s.x0 = x0;
  s.y0 = y0;
  s.x1 = x1;
  s.y1 = y1;
  return s;
}

Shape Shape::disc(Point2 center, double radius) {
  Shape s;
  s.kind = ShapeKind::kDisc;
  s.center = center;
  s.radius = radius;
  return s;
}

Shape Shape::polygon(std::vector<Point2> vertices) {
  Shape s;
  s.kind = ShapeKind::kPolygon;
  s.vertices = std::move(vertices);
  return s;
}

bool Shape::in_view(int view) const {
  return views.empty() || std::find(views.begin(), views.end(), view) != views.end();
}

Shape Shape::translated(Point2 delta) const {
  Shape s = *this;
  s.x0 += delta.x;
  s.x1 += delta.x;
  s.y0 += delta.y;
  s.y1 += delta.y;
  s.center = s.center + delta;
  for (Point2& v : s.vertices) v = v + delta;
  return s;
}

Point2 Shape::anchor() const {
  switch (kind) {
    case ShapeKind::kRect:
      return {0.5 * (x0 + x1), 0.5 * (y0 + y1)};
    case ShapeKind::kDisc:
      return center;
    case ShapeKind::kPolygon: {
      Point2 c;
      for (const Point2& v : vertices) c = c + v;
      return vertices.empty() ? c : (1.0 / static_cast<double>(vertices.size())) * c;
    }
  }
  throw DomainError("unknown shape kind");
}

void Scene::validate(const Canvas& canvas) const {
  const double w = canvas.width;
  const double h = canvas.height;
  auto inside = [&](Point2 p) { return p.x >= 0 && p.y >= 0 && p.x <= w && p.y <= h; };
  for (const Shape& s : obstacles) {
    for (int v : s.views) {
      if (v < 0 || v >= canvas.view_count()) throw DomainError("shape refers to an unknown view");
    }
    switch (s.kind) {
      case ShapeKind::kRect:
        if (!(s.x0 < s.x1 && s.y0 < s.y1)) throw DomainError("rectangle needs x0 < x1 and y0 < y1");
        if (!inside({s.x0, s.y0}) || !inside({s.x1, s.y1})) {
          throw DomainError("rectangle outside canvas");
        }
        break;
      case ShapeKind::kDisc:
        if (!(s.radius > 0)) throw DomainError("disc radius must be positive");
        if (!inside({s.center.x - s.radius, s.center.y - s.radius}) ||
            !inside({s.center.x + s.radius, s.center.y + s.radius})) {
          throw DomainError("disc outside canvas");
        }
        break;
      case ShapeKind::kPolygon: {
        if (s.vertices.size() < 3) throw DomainError("polygon needs at least 3 vertices");
        double sign = 0;
        for (std::size_t i = 0; i < s.vertices.size(); ++i) {
          const Point2 a = s.vertices[i];
          const Point2 b = s.vertices[(i + 1) % s.vertices.size()];
          const Point2 c = s.vertices[(i + 2) % s.vertices.size()];
          if (!inside(a)) throw DomainError("polygon outside canvas");
          const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
          if (cross == 0) continue;
          if (sign == 0) sign = cross;
          if (sign * cross < 0) throw DomainError("polygon must be convex");
        }
        if (sign == 0) throw DomainError("polygon is degenerate");
        break;
      }
      default:
        throw DomainError("unknown shape kind");
    }
  }
}

void for_each_capsule_span(Point2 a, Point2 b, double radius, int width, int height,
                           const std::function<void(int, int, int)>& visit) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  const double len = std::sqrt(len2);
  const auto [first, last] =
      row_range(std::min(a.y, b.y) - radius, std::max(a.y, b.y) + radius, height);
  for (int y = first; y <= last; ++y) {
    const double yc = y + 0.5;
    LineInterval hull{kInf, -kInf};
    disc_interval(a, radius, yc, hull);
    disc_interval(b, radius, yc, hull);
    if (len2 > 0) {
      LineInterval band;
      const double oy = yc - a.y;
      band.require(dx, -a.x * dx + oy * dy);
      band.require(-dx, len2 + a.x * dx - oy * dy);
      band.require(dy, radius * len - dx * oy - dy * a.x);
      band.require(-dy, radius * len + dx * oy + dy * a.x);
      if (!band.empty()) {
        hull.lo = std::min(hull.lo, band.lo);
        hull.hi = std::max(hull.hi, band.hi);
      }
    }
    emit_row(y, hull, width, visit);
  }
}

ObstacleField::ObstacleField(const Scene& scene, const Canvas& canvas)
    : width_(canvas.width), height_(canvas.height) {
  const std::size_t stride = static_cast<std::size_t>(width_) + 1;
  for (int v = 0; v < canvas.view_count(); ++v) {
    masks_.push_back(render_obstacles(scene, canvas, v));
    rles_.push_back(rle::encode(masks_.back()));
    std::vector<std::uint32_t> prefix(stride * static_cast<std::size_t>(height_), 0);
    for (int y = 0; y < height_; ++y) {
      std::uint32_t* row = prefix.data() + stride * static_cast<std::size_t>(y);
      for (int x = 0; x < width_; ++x) row[x + 1] = row[x] + (masks_.back().get(x, y) ? 1u : 0u);
    }
    prefix_.push_back(std::move(prefix));
  }
}

std::uint32_t ObstacleField::span_overlap(int view, int y, int x0, int x1) const {
  const std::uint32_t* row =
      prefix_[view].data() + (static_cast<std::size_t>(width_) + 1) * static_cast<std::size_t>(y);
  return row[x1] - row[x0];
}

JointVector normalize_config(const RobotModel& model, const JointVector& config) {
  if (static_cast<int>(config.size()) != model.dof) {
    throw DomainError("configuration has " + std::to_string(config.size()) +
                      " values, robot has " + std::to_string(model.dof) + " dof");
  }
  std::vector<double> out(config.begin(), config.end());
  for (int j = 0; j < model.dof; ++j) {
    const JointLimit& lim = model.joint_limits[j];
    require_finite(out[j], "configuration value");
    if (model.kind == RobotKind::kArm && lim.full_circle()) {
      double t = std::fmod(out[j] - lim.lo, kTwoPi);
      if (t < 0) t += kTwoPi;
      if (t >= kTwoPi) t = 0;
      out[j] = lim.lo + t;
    } else if (out[j] < lim.lo - 1e-9 || out[j] > lim.hi + 1e-9) {
      throw DomainError("configuration value " + std::to_string(out[j]) +
                        " outside joint limits");
    }
  }
  return JointVector(std::move(out));
}

void check_canvas(const RobotModel& model, const Canvas& canvas) {
  if (canvas.width < 1 || canvas.height < 1) throw ConfigurationError("canvas must be non-empty");
  if (canvas.views.empty()) throw ConfigurationError("canvas needs at least one view");
  auto fits = [&](Point2 c, double r) {
    return c.x - r >= 0 && c.y - r >= 0 && c.x + r <= canvas.width && c.y + r <= canvas.height;
  };
  for (int v = 0; v < canvas.view_count(); ++v) {
    const ViewTransform& view = canvas.views[v];
    if (!(view.scale > 0)) throw ConfigurationError("view scale must be positive");
    if (model.kind == RobotKind::kArm) {
      double reach = 0;
      for (double len : model.link_lengths) reach += len;
      reach += 0.5 * *std::max_element(model.link_widths.begin(), model.link_widths.end());
      if (!fits(view.apply(model.base), reach * view.scale)) {
        throw ConfigurationError("canvas too small for the arm's reachable set");
      }
    } else {
      const JointLimit& xs = model.joint_limits[0];
      const JointLimit& ys = model.joint_limits[1];
      for (Point2 corner : {Point2{xs.lo, ys.lo}, Point2{xs.hi, ys.lo}, Point2{xs.lo, ys.hi},
                            Point2{xs.hi, ys.hi}}) {
        if (!fits(view.apply(corner), model.disc_radius * view.scale)) {
          throw ConfigurationError("canvas too small for the disc's reachable set");
        }
      }
    }
  }
}

std::vector<Point2> forward_kinematics(const RobotModel& model, const JointVector& config) {
  if (model.kind == RobotKind::kDisc) return {Point2{config[0], config[1]}};
  std::vector<Point2> joints{model.base};
  double heading = 0;
  for (int l = 0; l < model.dof; ++l) {
    heading += config[l];
    const Point2 prev = joints.back();
    joints.push_back({prev.x + model.link_lengths[l] * std::cos(heading),
                      prev.y + model.link_lengths[l] * std::sin(heading)});
  }
  return joints;
}

PoseRecord fk_render(const RobotModel& model, const JointVector& config, const Canvas& canvas) {
  model.validate();
  check_canvas(model, canvas);
  PoseRecord rec;
  rec.config = normalize_config(model, config);
  const std::vector<Point2> joints = forward_kinematics(model, rec.config);
  const auto segs = link_segments(model, joints);

  for (int v = 0; v < canvas.view_count(); ++v) {
    BinaryImage combined(canvas.width, canvas.height);
    const double scale = canvas.views[v].scale;
    for (int l = 0; l < static_cast<int>(segs.size()); ++l) {
      BinaryImage link(canvas.width, canvas.height);
      BinaryImage& target = v == 0 ? link : combined;
      for_each_capsule_span(view_apply(canvas, v, segs[l].first),
                            view_apply(canvas, v, segs[l].second),
                            capsule_radius(model, l) * scale, canvas.width, canvas.height,
                            [&](int y, int x0, int x1) { target.fill_span(y, x0, x1); });
      if (v == 0) {
        combined |= link;
        rec.link_masks.push_back(std::move(link));
      }
    }
    rec.view_rles.push_back(rle::encode(combined));
    rec.views.push_back(std::move(combined));
  }

  const ViewTransform& primary = canvas.views[0];
  if (model.kind == RobotKind::kArm) {
    for (const Point2& p : joints) rec.tracked.push_back(primary.apply(p));
    for (const auto& [a, b] : segs) rec.tracked.push_back(primary.apply(0.5 * (a + b)));
  } else {
    const Point2 c = joints[0];
    const double r = model.disc_radius;
    for (Point2 p : {c, c + Point2{r, 0}, c + Point2{0, r}, c + Point2{-r, 0}, c + Point2{0, -r}}) {
      rec.tracked.push_back(primary.apply(p));
    }
  }
  return rec;
}

BinaryImage render_obstacles(const Scene& scene, const Canvas& canvas, int view) {
  if (view < 0 || view >= canvas.view_count()) throw DomainError("unknown view index");
  BinaryImage image(canvas.width, canvas.height);
  const ViewTransform& tf = canvas.views[view];
  auto fill = [&](int y, int x0, int x1) { image.fill_span(y, x0, x1); };
  for (const Shape& s : scene.obstacles) {
    if (!s.in_view(view)) continue;
    switch (s.kind) {
      case ShapeKind::kRect: {
        const std::vector<Point2> corners{tf.apply({s.x0, s.y0}), tf.apply({s.x1, s.y0}),
                                          tf.apply({s.x1, s.y1}), tf.apply({s.x0, s.y1})};
        convex_polygon_spans(corners, canvas.width, canvas.height, fill);
        break;
      }
      case ShapeKind::kDisc: {
        const Point2 c = tf.apply(s.center);
        for_each_capsule_span(c, c, s.radius * tf.scale, canvas.width, canvas.height, fill);
        break;
      }
      case ShapeKind::kPolygon: {
        std::vector<Point2> pts;
        for (const Point2& p : s.vertices) pts.push_back(tf.apply(p));
        convex_polygon_spans(pts, canvas.width, canvas.height, fill);
        break;
      }
      default:
        throw DomainError("unknown shape kind");
    }
  }
  return image;
}

std::vector<JointVector> sample_configs(const RobotModel& model, std::size_t n,
                                        std::uint64_t seed) {
  model.validate();
  if (n == 0) throw DomainError("sample size must be at least 1");
  Rng rng(seed);
  std::vector<JointVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> q(static_cast<std::size_t>(model.dof));
    for (int j = 0; j < model.dof; ++j) {
      const JointLimit& lim = model.joint_limits[j];
      const bool wraps = model.kind == RobotKind::kArm && lim.full_circle();
      q[j] = rng.uniform(lim.lo, wraps ? lim.lo + kTwoPi : lim.hi);
    }
    out.emplace_back(std::move(q));
  }
  return out;
}

bool self_intersects(const RobotModel& model, const PoseRecord& record) {
  if (model.kind == RobotKind::kDisc) return false;
  const int links = static_cast<int>(record.link_masks.size());
  if (links != model.dof) throw DomainError("record lacks per-link masks");
  std::vector<rle::IntervalRle> rles;
  rles.reserve(links);
  for (const BinaryImage& m : record.link_masks) rles.push_back(rle::encode(m));
  const int width = record.link_masks[0].width();
  const int height = record.link_masks[0].height();
  for (int i = 0; i < links; ++i) {
    for (int j = i + 1; j < links; ++j) {
      const rle::IntervalRle overlap = rle::intersect(rles[i], rles[j]);
      if (overlap.empty()) continue;
      if (j - i >= 2) return true;
      // Adjacent links always meet at their shared joint (tracked[j]).
      const double joint_radius = std::max(model.link_widths[i], model.link_widths[j]);
      BinaryImage joint_disc(width, height);
      for_each_capsule_span(record.tracked[j], record.tracked[j], joint_radius, width, height,
                            [&](int y, int x0, int x1) { joint_disc.fill_span(y, x0, x1); });
      if (overlap.popcount() > rle::penetration(overlap, rle::encode(joint_disc))) return true;
    }
  }
  return false;
}

std::vector<JointVector> gold_interpolate(const RobotModel& model, const JointVector& q_u,
                                          const JointVector& q_v, double eps) {
  if (!(eps > 0)) throw DomainError("interpolation resolution must be positive");
  const JointVector from = normalize_config(model, q_u);
  const JointVector to = normalize_config(model, q_v);
  std::vector<double> delta(static_cast<std::size_t>(model.dof));
  double widest = 0;
  for (int j = 0; j < model.dof; ++j) {
    double d = to[j] - from[j];
    if (model.kind == RobotKind::kArm && model.joint_limits[j].full_circle()) {
      d = std::remainder(d, kTwoPi);  // shortest arc, in [-pi, pi]
    }
    delta[j] = d;
    widest = std::max(widest, std::abs(d));
  }
  if (widest == 0) return {from};
  const auto steps = static_cast<std::size_t>(std::ceil(widest / eps - 1e-9));
  std::vector<JointVector> path;
  path.reserve(steps + 1);
  path.push_back(from);
  for (std::size_t s = 1; s < steps; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(steps);
    std::vector<double> q(static_cast<std::size_t>(model.dof));
    for (int j = 0; j < model.dof; ++j) q[j] = from[j] + t * delta[j];
    path.push_back(normalize_config(model, JointVector(std::move(q))));
  }
  path.push_back(to);
  return path;
}

bool pose_collides(const RobotModel& model, const JointVector& config, const Canvas& canvas,
                   const ObstacleField& obstacles) {
  if (obstacles.view_count() != canvas.view_count()) {
    throw DomainError("obstacle field and canvas disagree on the view count");
  }
  const std::vector<Point2> joints = forward_kinematics(model, config);
  const auto segs = link_segments(model, joints);
  for (int v = 0; v < canvas.view_count(); ++v) {
    bool hit = false;
    const double scale = canvas.views[v].scale;
    for (int l = 0; l < static_cast<int>(segs.size()) && !hit; ++l) {
      for_each_capsule_span(view_apply(canvas, v, segs[l].first),
                            view_apply(canvas, v, segs[l].second),
                            capsule_radius(model, l) * scale, canvas.width, canvas.height,
                            [&](int y, int x0, int x1) {
                              if (!hit && obstacles.span_overlap(v, y, x0, x1) > 0) hit = true;
                            });
    }
    if (!hit) return false;  // free in at least one view
  }
  return true;
}

}  // namespace vizplan::simworld
