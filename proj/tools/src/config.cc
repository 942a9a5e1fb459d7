#include "vizplan_cli/config.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vizplan/errors.h"
#include "vizplan/metrics.h"

namespace vizplan::cli {

using nlohmann::json;

namespace {

// Walks one JSON object, recording violations under a dotted path.
class Reader {
 public:
  Reader(const json& node, std::string path, std::vector<std::string>& out)
      : node_(node), path_(std::move(path)), out_(out) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  bool ok() const { return node_.is_object(); }
  bool has(const char* key) const { return ok() && node_.contains(key); }
  const json& at(const char* key) const { return node_.at(key); }
  std::string sub(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void fail(const std::string& where, const std::string& what) {
    out_.push_back((where.empty() ? "<root>" : where) + ": " + what);
  }
  void fail_key(const char* key, const std::string& what) { fail(sub(key), what); }

  // Flags keys outside `known`; call once all reads are done.
  void reject_unknown(std::initializer_list<const char*> known) {
    if (!ok()) return;
    for (const auto& [key, value] : node_.items()) {
      if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
        fail(path_.empty() ? key : path_ + "." + key, "unknown key");
      }
    }
  }

  void number(const char* key, double& out) {
    if (!has(key)) return;
    if (!at(key).is_number()) return fail_key(key, "expected a number");
    out = at(key).get<double>();
  }
  template <typename Int>
  void count(const char* key, Int& out) {
    if (!has(key)) return;
    if (!at(key).is_number_unsigned() && !(at(key).is_number_integer() && at(key).get<std::int64_t>() >= 0)) {
      return fail_key(key, "expected a non-negative integer");
    }
    out = static_cast<Int>(at(key).get<std::uint64_t>());
  }
  void integer(const char* key, int& out) {
    if (!has(key)) return;
    if (!at(key).is_number_integer()) return fail_key(key, "expected an integer");
    out = at(key).get<int>();
  }
  void boolean(const char* key, bool& out) {
    if (!has(key)) return;
    if (!at(key).is_boolean()) return fail_key(key, "expected true or false");
    out = at(key).get<bool>();
  }
  void string(const char* key, std::string& out) {
    if (!has(key)) return;
    if (!at(key).is_string()) return fail_key(key, "expected a string");
    out = at(key).get<std::string>();
  }
  bool numbers(const char* key, std::vector<double>& out) {
    if (!has(key)) return false;
    return numbers_at(at(key), sub(key), out);
  }
  bool point(const char* key, Point2& out) {
    std::vector<double> v;
    if (!numbers(key, v)) return false;
    if (v.size() != 2) {
      fail_key(key, "expected [x, y]");
      return false;
    }
    out = {v[0], v[1]};
    return true;
  }
  bool numbers_at(const json& node, const std::string& where, std::vector<double>& out) {
    if (!node.is_array()) {
      fail(where, "expected an array of numbers");
      return false;
    }
    out.clear();
    for (const json& x : node) {
      if (!x.is_number()) {
        fail(where, "expected an array of numbers");
        return false;
      }
      out.push_back(x.get<double>());
    }
    return true;
  }

 private:
  const json& node_;
  std::string path_;
  std::vector<std::string>& out_;
};

std::optional<simworld::JointLimit> limit_from(Reader& r, const json& node, const std::string& where) {
  std::vector<double> v;
  if (!r.numbers_at(node, where, v)) return std::nullopt;
  if (v.size() != 2) {
    r.fail(where, "expected [lo, hi]");
    return std::nullopt;
  }
  return simworld::JointLimit{v[0], v[1]};
}

bool read_robot(const json& root, const simworld::Canvas& canvas, simworld::RobotModel& out,
                std::vector<std::string>& violations) {
  if (!root.is_object() || !root.contains("robot")) {
    violations.push_back("robot: required");
    return false;
  }
  Reader r(root.at("robot"), "robot", violations);
  if (!r.ok()) return false;
  std::string type = "arm";
  r.string("type", type);
  const std::size_t before = violations.size();
  if (type == "arm") {
    std::vector<double> lengths, widths;
    if (!r.numbers("link_lengths", lengths)) {
      if (!r.has("link_lengths")) r.fail_key("link_lengths", "required");
    }
    if (!r.numbers("link_widths", widths) && !r.has("link_widths")) widths.assign(lengths.size(), 4.0);
    Point2 base{canvas.width / 2.0, canvas.height / 2.0};
    r.point("base", base);
    std::vector<simworld::JointLimit> limits;
    if (r.has("joint_limits")) {
      const json& node = r.at("joint_limits");
      if (!node.is_array()) {
        r.fail_key("joint_limits", "expected an array of [lo, hi] pairs");
      } else {
        for (std::size_t i = 0; i < node.size(); ++i) {
          if (auto lim = limit_from(r, node[i], r.sub("joint_limits") + "[" + std::to_string(i) + "]")) {
            limits.push_back(*lim);
          }
        }
      }
    }
    r.reject_unknown({"type", "link_lengths", "link_widths", "base", "joint_limits"});
    if (violations.size() != before) return false;
    try {
      out = simworld::RobotModel::arm(lengths, widths, base, limits);
    } catch (const Error& e) {
      violations.push_back(std::string("robot: ") + e.what());
      return false;
    }
  } else if (type == "disc") {
    double radius = 0;
    if (!r.has("radius")) r.fail_key("radius", "required");
    r.number("radius", radius);
    std::optional<simworld::JointLimit> xr, yr;
    if (r.has("x_range")) xr = limit_from(r, r.at("x_range"), r.sub("x_range"));
    else r.fail_key("x_range", "required");
    if (r.has("y_range")) yr = limit_from(r, r.at("y_range"), r.sub("y_range"));
    else r.fail_key("y_range", "required");
    r.reject_unknown({"type", "radius", "x_range", "y_range"});
    if (violations.size() != before || !xr || !yr) return false;
    try {
      out = simworld::RobotModel::disc(radius, *xr, *yr);
    } catch (const Error& e) {
      violations.push_back(std::string("robot: ") + e.what());
      return false;
    }
  } else {
    r.fail_key("type", "unknown robot type '" + type + "' (arm, disc)");
    return false;
  }
  return true;
}

simworld::Canvas read_canvas(const json& root, std::vector<std::string>& violations) {
  simworld::Canvas canvas;
  if (!root.is_object() || !root.contains("canvas")) return canvas;
  Reader r(root.at("canvas"), "canvas", violations);
  if (!r.ok()) return canvas;
  r.integer("width", canvas.width);
  r.integer("height", canvas.height);
  if (canvas.width <= 0) r.fail_key("width", "must be positive");
  if (canvas.height <= 0) r.fail_key("height", "must be positive");
  if (r.has("views")) {
    const json& views = r.at("views");
    if (!views.is_array() || views.empty()) {
      r.fail_key("views", "expected a non-empty array");
    } else {
      canvas.views.clear();
      for (std::size_t i = 0; i < views.size(); ++i) {
        Reader v(views[i], "canvas.views[" + std::to_string(i) + "]", violations);
        simworld::ViewTransform t;
        if (v.ok()) {
          v.number("scale", t.scale);
          v.number("rotation", t.rotation);
          v.point("offset", t.offset);
          v.boolean("mirror", t.mirror);
          if (!(t.scale > 0)) v.fail_key("scale", "must be positive");
          v.reject_unknown({"scale", "rotation", "offset", "mirror"});
        }
        canvas.views.push_back(t);
      }
    }
  }
  r.reject_unknown({"width", "height", "views"});
  return canvas;
}

simworld::Scene read_scene(const json& root, std::vector<std::string>& violations) {
  simworld::Scene scene;
  if (!root.is_object() || !root.contains("obstacles")) return scene;
  const json& list = root.at("obstacles");
  if (!list.is_array()) {
    violations.push_back("obstacles: expected an array");
    return scene;
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "obstacles[" + std::to_string(i) + "]";
    Reader r(list[i], where, violations);
    if (!r.ok()) continue;
    std::string type;
    r.string("type", type);
    const std::size_t before = violations.size();
    simworld::Shape shape;
    if (type == "rect") {
      Point2 lo, hi;
      if (!r.point("min", lo) && !r.has("min")) r.fail_key("min", "required");
      if (!r.point("max", hi) && !r.has("max")) r.fail_key("max", "required");
      shape = simworld::Shape::rect(lo.x, lo.y, hi.x, hi.y);
      r.reject_unknown({"type", "min", "max", "views"});
    } else if (type == "disc") {
      Point2 c;
      double radius = 0;
      if (!r.point("center", c) && !r.has("center")) r.fail_key("center", "required");
      if (!r.has("radius")) r.fail_key("radius", "required");
      r.number("radius", radius);
      shape = simworld::Shape::disc(c, radius);
      r.reject_unknown({"type", "center", "radius", "views"});
    } else if (type == "polygon") {
      std::vector<Point2> vertices;
      if (!r.has("vertices") || !r.at("vertices").is_array()) {
        r.fail_key("vertices", "required array of [x, y]");
      } else {
        const json& vs = r.at("vertices");
        for (std::size_t j = 0; j < vs.size(); ++j) {
          std::vector<double> v;
          const std::string vw = r.sub("vertices") + "[" + std::to_string(j) + "]";
          if (r.numbers_at(vs[j], vw, v)) {
            if (v.size() == 2) vertices.push_back({v[0], v[1]});
            else r.fail(vw, "expected [x, y]");
          }
        }
      }
      shape = simworld::Shape::polygon(std::move(vertices));
      r.reject_unknown({"type", "vertices", "views"});
    } else {
      r.fail_key("type", "unknown obstacle type '" + type + "' (rect, disc, polygon)");
      continue;
    }
    if (r.has("views")) {
      const json& vs = r.at("views");
      if (!vs.is_array() || !std::all_of(vs.begin(), vs.end(), [](const json& x) { return x.is_number_integer(); })) {
        r.fail_key("views", "expected an array of view indices");
      } else {
        for (const json& x : vs) shape.views.push_back(x.get<int>());
      }
    }
    if (violations.size() == before) scene.obstacles.push_back(std::move(shape));
  }
  return scene;
}

std::optional<Endpoint> read_endpoint(const json& root, const char* key, std::vector<std::string>& violations) {
  if (!root.is_object() || !root.contains(key)) return std::nullopt;
  Reader r(root.at(key), key, violations);
  if (!r.ok()) return std::nullopt;
  Endpoint e;
  if (r.has("node")) {
    std::size_t node = 0;
    const std::size_t before = violations.size();
    r.count("node", node);
    if (violations.size() == before) e.node = static_cast<graph::NodeId>(node);
  }
  std::vector<double> q;
  if (r.numbers("config", q)) e.config = simworld::JointVector(q);
  if (r.has("node") == r.has("config")) r.fail(key, "give exactly one of node or config");
  r.reject_unknown({"node", "config"});
  return e;
}

std::size_t read_unbounded(Reader& r, const char* key, std::size_t fallback, std::size_t unbounded) {
  if (!r.has(key)) return fallback;
  const json& v = r.at(key);
  if (v.is_string() && v.get<std::string>() == "inf") return unbounded;
  std::size_t out = fallback;
  r.count(key, out);
  return out;
}

bool resolvable_metric(const std::string& name, const ScenarioConfig& c) {
  try {
    metrics::MetricOptions opts;
    opts.projector_dim = c.projector_dim;
    opts.input_dim = static_cast<std::size_t>(c.canvas.width) * static_cast<std::size_t>(c.canvas.height) *
                     c.canvas.views.size();
    metrics::make_metric(name, opts);
    return true;
  } catch (const Error&) {
    return false;
  }
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json shape_json(const simworld::Shape& s) {
  json j;
  j["type"] = std::string(simworld::shape_kind_name(s.kind));
  switch (s.kind) {
    case simworld::ShapeKind::kRect:
      j["min"] = json::array({s.x0, s.y0});
      j["max"] = json::array({s.x1, s.y1});
      break;
    case simworld::ShapeKind::kDisc:
      j["center"] = point_json(s.center);
      j["radius"] = s.radius;
      break;
    case simworld::ShapeKind::kPolygon: {
      json vs = json::array();
      for (Point2 p : s.vertices) vs.push_back(point_json(p));
      j["vertices"] = vs;
      break;
    }
  }
  if (!s.views.empty()) j["views"] = s.views;
  return j;
}

json endpoint_json(const Endpoint& e) {
  json j;
  if (e.node) j["node"] = *e.node;
  if (e.config) j["config"] = std::vector<double>(e.config->begin(), e.config->end());
  return j;
}

}  // namespace

dynamic::ObstacleTrack ScenarioConfig::track() const {
  dynamic::ObstacleTrack out;
  out.max_displacement = max_displacement;
  std::size_t length = 1;
  for (const Motion& m : motions) length = std::max(length, m.start + m.steps + 1);
  for (std::size_t t = 0; t < length; ++t) {
    simworld::Scene s = scene;
    for (const Motion& m : motions) {
      if (m.obstacle >= s.obstacles.size()) continue;
      const std::size_t moved = t > m.start ? std::min(t - m.start, m.steps) : 0;
      if (moved > 0) {
        s.obstacles[m.obstacle] = s.obstacles[m.obstacle].translated(static_cast<double>(moved) * m.delta);
      }
    }
    out.scenes.push_back(std::move(s));
  }
  return out;
}

ValidationResult validate_config_text(std::string_view text) {
  ValidationResult result;
  auto& v = result.violations;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    v.push_back(std::string("<root>: not valid JSON (") + e.what() + ")");
    return result;
  }
  Reader top(root, "", v);
  if (!top.ok()) return result;

  ScenarioConfig c;
  if (!top.has("seed")) top.fail_key("seed", "required");
  top.count("seed", c.seed);
  c.canvas = read_canvas(root, v);
  const bool robot_ok = read_robot(root, c.canvas, c.robot, v);
  c.scene = read_scene(root, v);
  top.count("samples", c.samples);
  top.count("k", c.k);
  top.string("metric", c.metric);
  top.count("projector_dim", c.projector_dim);
  std::string planner = std::string(localplan::planner_name(c.planner));
  top.string("planner", planner);
  try {
    c.planner = localplan::parse_planner(planner);
  } catch (const Error&) {
    top.fail_key("planner", "unknown planner '" + planner + "'");
  }
  top.number("gold_eps", c.gold_eps);
  c.start = read_endpoint(root, "start", v);
  c.goal = read_endpoint(root, "goal", v);
  std::string out_dir = c.output_dir.string();
  top.string("output_dir", out_dir);
  c.output_dir = out_dir;

  if (top.has("planner_options")) {
    Reader r(top.at("planner_options"), "planner_options", v);
    if (r.ok()) {
      r.integer("segment_thickness", c.planner_options.segment_thickness);
      r.integer("pca_steps", c.planner_options.pca_steps);
      r.number("pca_threshold", c.planner_options.pca_threshold);
      if (c.planner_options.segment_thickness < 1) r.fail_key("segment_thickness", "must be at least 1");
      if (c.planner_options.pca_steps < 1) r.fail_key("pca_steps", "must be at least 1");
      if (!(c.planner_options.pca_threshold > 0 && c.planner_options.pca_threshold < 1)) {
        r.fail_key("pca_threshold", "must lie in (0, 1)");
      }
      r.reject_unknown({"segment_thickness", "pca_steps", "pca_threshold"});
    }
  }
  if (top.has("eval")) {
    Reader r(top.at("eval"), "eval", v);
    if (r.ok()) {
      if (r.has("metrics")) {
        const json& ms = r.at("metrics");
        if (!ms.is_array() || ms.empty() ||
            !std::all_of(ms.begin(), ms.end(), [](const json& x) { return x.is_string(); })) {
          r.fail_key("metrics", "expected a non-empty array of metric names");
        } else {
          c.eval_metrics = ms.get<std::vector<std::string>>();
        }
      }
      if (r.has("planners")) {
        const json& ps = r.at("planners");
        if (!ps.is_array() || ps.empty() ||
            !std::all_of(ps.begin(), ps.end(), [](const json& x) { return x.is_string(); })) {
          r.fail_key("planners", "expected a non-empty array of planner names");
        } else {
          c.eval_planners.clear();
          for (const json& p : ps) {
            try {
              c.eval_planners.push_back(localplan::parse_planner(p.get<std::string>()));
            } catch (const Error&) {
              r.fail_key("planners", "unknown planner '" + p.get<std::string>() + "'");
            }
          }
        }
      }
      r.reject_unknown({"metrics", "planners"});
    }
  }
  if (top.has("embed")) {
    Reader r(top.at("embed"), "embed", v);
    if (r.ok()) {
      std::string method = "isomap";
      r.string("method", method);
      if (method == "isomap") c.embed_method = EmbedMethod::kIsomap;
      else if (method == "mds") c.embed_method = EmbedMethod::kMds;
      else r.fail_key("method", "unknown method '" + method + "' (isomap, mds)");
      r.integer("dims", c.embed_dims);
      r.count("k", c.embed_k);
      if (c.embed_dims < 1) r.fail_key("dims", "must be at least 1");
      if (c.embed_k < 1) r.fail_key("k", "must be at least 1");
      r.reject_unknown({"method", "dims", "k"});
    }
  }
  if (top.has("dynamic")) {
    Reader r(top.at("dynamic"), "dynamic", v);
    if (r.ok()) {
      c.policy.hops = read_unbounded(r, "hops", c.policy.hops, dynamic::kUnboundedHops);
      c.policy.tau = read_unbounded(r, "tau", c.policy.tau, dynamic::kUnboundedTau);
      r.number("max_displacement", c.max_displacement);
      r.count("max_steps", c.max_steps);
      r.boolean("audit", c.audit);
      if (!(c.max_displacement >= 0)) r.fail_key("max_displacement", "must be non-negative");
      if (c.max_steps < 1) r.fail_key("max_steps", "must be at least 1");
      if (r.has("motions")) {
        const json& ms = r.at("motions");
        if (!ms.is_array()) {
          r.fail_key("motions", "expected an array");
        } else {
          for (std::size_t i = 0; i < ms.size(); ++i) {
            Reader m(ms[i], "dynamic.motions[" + std::to_string(i) + "]", v);
            if (!m.ok()) continue;
            Motion motion;
            if (!m.has("obstacle")) m.fail_key("obstacle", "required");
            m.count("obstacle", motion.obstacle);
            m.count("start", motion.start);
            m.count("steps", motion.steps);
            if (!m.point("delta", motion.delta) && !m.has("delta")) m.fail_key("delta", "required");
            if (motion.obstacle >= c.scene.obstacles.size()) m.fail_key("obstacle", "no such obstacle");
            m.reject_unknown({"obstacle", "start", "steps", "delta"});
            c.motions.push_back(motion);
          }
        }
      }
      r.reject_unknown({"hops", "tau", "max_displacement", "max_steps", "audit", "motions"});
    }
  }
  top.reject_unknown({"seed", "robot", "canvas", "obstacles", "samples", "k", "metric", "projector_dim",
                      "planner", "planner_options", "gold_eps", "start", "goal", "eval", "embed",
                      "dynamic", "output_dir"});

  // Semantic checks across sections.
  if (c.k < 1) v.push_back("k: must be at least 1");
  if (c.samples <= c.k) v.push_back("samples: must exceed k (n > k)");
  if (c.embed_k >= c.samples) v.push_back("embed.k: must be below samples");
  if (!(c.gold_eps > 0)) v.push_back("gold_eps: must be positive");
  if (c.projector_dim < 1) v.push_back("projector_dim: must be at least 1");
  if (out_dir.empty()) v.push_back("output_dir: must not be empty");
  if (!resolvable_metric(c.metric, c)) v.push_back("metric: unknown metric '" + c.metric + "'");
  for (const std::string& m : c.eval_metrics) {
    if (!resolvable_metric(m, c)) v.push_back("eval.metrics: unknown metric '" + m + "'");
  }
  try {
    c.scene.validate(c.canvas);
  } catch (const Error& e) {
    v.push_back(std::string("obstacles: ") + e.what());
  }
  for (std::size_t i = 0; i < c.scene.obstacles.size(); ++i) {
    for (int view : c.scene.obstacles[i].views) {
      if (view < 0 || view >= c.canvas.view_count()) {
        v.push_back("obstacles[" + std::to_string(i) + "].views: view " + std::to_string(view) +
                    " does not exist");
      }
    }
  }
  if (robot_ok) {
    try {
      simworld::check_canvas(c.robot, c.canvas);
    } catch (const Error& e) {
      v.push_back(std::string("canvas: ") + e.what());
    }
    for (const auto* e : {&c.start, &c.goal}) {
      if (!*e) continue;
      const char* name = e == &c.start ? "start" : "goal";
      if ((*e)->node && *(*e)->node >= c.samples) {
        v.push_back(std::string(name) + ".node: must be below samples");
      }
      if ((*e)->config) {
        try {
          simworld::normalize_config(c.robot, *(*e)->config);
        } catch (const Error& err) {
          v.push_back(std::string(name) + ".config: " + err.what());
        }
      }
    }
  }
  if (v.empty()) {
    try {
      c.track().validate(c.canvas);
    } catch (const Error& e) {
      v.push_back(std::string("dynamic: ") + e.what());
    }
  }
  if (v.empty()) result.config = std::move(c);
  return result;
}

ValidationResult validate_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ValidationResult result;
    result.violations.push_back("<file>: cannot read " + path.string());
    return result;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return validate_config_text(ss.str());
}

std::string resolved_json(const ScenarioConfig& c) {
  json j;
  j["seed"] = c.seed;
  json robot;
  if (c.robot.kind == simworld::RobotKind::kArm) {
    robot["type"] = "arm";
    robot["link_lengths"] = c.robot.link_lengths;
    robot["link_widths"] = c.robot.link_widths;
    robot["base"] = point_json(c.robot.base);
  } else {
    robot["type"] = "disc";
    robot["radius"] = c.robot.disc_radius;
  }
  json limits = json::array();
  for (const auto& l : c.robot.joint_limits) limits.push_back(json::array({l.lo, l.hi}));
  if (c.robot.kind == simworld::RobotKind::kArm) {
    robot["joint_limits"] = limits;
  } else {
    robot["x_range"] = limits.at(0);
    robot["y_range"] = limits.at(1);
  }
  j["robot"] = robot;
  json views = json::array();
  for (const auto& v : c.canvas.views) {
    views.push_back({{"scale", v.scale}, {"rotation", v.rotation}, {"offset", point_json(v.offset)},
                     {"mirror", v.mirror}});
  }
  j["canvas"] = {{"width", c.canvas.width}, {"height", c.canvas.height}, {"views", views}};
  json obstacles = json::array();
  for (const auto& s : c.scene.obstacles) obstacles.push_back(shape_json(s));
  j["obstacles"] = obstacles;
  j["samples"] = c.samples;
  j["k"] = c.k;
  j["metric"] = c.metric;
  j["projector_dim"] = c.projector_dim;
  j["planner"] = std::string(localplan::planner_name(c.planner));
  j["planner_options"] = {{"segment_thickness", c.planner_options.segment_thickness},
                          {"pca_steps", c.planner_options.pca_steps},
                          {"pca_threshold", c.planner_options.pca_threshold}};
  j["gold_eps"] = c.gold_eps;
  if (c.start) j["start"] = endpoint_json(*c.start);
  if (c.goal) j["goal"] = endpoint_json(*c.goal);
  json planners = json::array();
  for (auto p : c.eval_planners) planners.push_back(std::string(localplan::planner_name(p)));
  j["eval"] = {{"metrics", c.eval_metrics}, {"planners", planners}};
  j["embed"] = {{"method", c.embed_method == EmbedMethod::kIsomap ? "isomap" : "mds"},
                {"dims", c.embed_dims},
                {"k", c.embed_k}};
  json motions = json::array();
  for (const Motion& m : c.motions) {
    motions.push_back({{"obstacle", m.obstacle}, {"start", m.start}, {"steps", m.steps},
                       {"delta", point_json(m.delta)}});
  }
  json dyn;
  dyn["hops"] = c.policy.hops == dynamic::kUnboundedHops ? json("inf") : json(c.policy.hops);
  dyn["tau"] = c.policy.tau == dynamic::kUnboundedTau ? json("inf") : json(c.policy.tau);
  dyn["max_displacement"] = c.max_displacement;
  dyn["max_steps"] = c.max_steps;
  dyn["audit"] = c.audit;
  dyn["motions"] = motions;
  j["dynamic"] = dyn;
  j["output_dir"] = c.output_dir.generic_string();
  return j.dump(2) + "\n";
}

}  // namespace vizplan::cli
