#include "vizplan/io.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vizplan/errors.h"

namespace vizplan::io {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("failed writing " + path.string());
}

namespace {

// Netpbm header: magic, then `count` integers separated by whitespace or
// comments, then exactly one whitespace byte before the raster.
std::vector<int> parse_header(std::string_view bytes, std::string_view magic, int count,
                              std::size_t& offset) {
  if (bytes.substr(0, 2) != magic) throw FormatError("expected " + std::string(magic) + " image");
  std::size_t pos = 2;
  std::vector<int> values;
  while (static_cast<int>(values.size()) < count) {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    int v = 0;
    const auto [ptr, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), v);
    if (ec != std::errc() || v < 0) throw FormatError("malformed image header");
    pos = static_cast<std::size_t>(ptr - bytes.data());
    values.push_back(v);
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw FormatError("malformed image header");
  }
  offset = pos + 1;
  return values;
}

}  // namespace

std::string encode_pbm(const BinaryImage& image) {
  std::string out = "P4\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n";
  const std::size_t row_bytes = (static_cast<std::size_t>(image.width()) + 7) / 8;
  for (int y = 0; y < image.height(); ++y) {
    std::string row(row_bytes, '\0');
    for (int x = 0; x < image.width(); ++x) {
      if (image.get(x, y)) row[x / 8] = static_cast<char>(row[x / 8] | (0x80 >> (x % 8)));
    }
    out += row;
  }
  return out;
}

BinaryImage decode_pbm(std::string_view bytes) {
  std::size_t offset = 0;
  const auto dims = parse_header(bytes, "P4", 2, offset);
  BinaryImage image(dims[0], dims[1]);
  const std::size_t row_bytes = (static_cast<std::size_t>(dims[0]) + 7) / 8;
  if (bytes.size() - offset < row_bytes * static_cast<std::size_t>(dims[1])) {
    throw FormatError("truncated PBM raster");
  }
  for (int y = 0; y < dims[1]; ++y) {
    for (int x = 0; x < dims[0]; ++x) {
      const auto byte = static_cast<unsigned char>(bytes[offset + y * row_bytes + x / 8]);
      if (byte & (0x80 >> (x % 8))) image.set(x, y);
    }
  }
  return image;
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

GrayImage decode_pgm(std::string_view bytes) {
  std::size_t offset = 0;
  const auto dims = parse_header(bytes, "P5", 3, offset);
  if (dims[2] != 255) throw FormatError("only 8-bit PGM is supported");
  GrayImage image(dims[0], dims[1]);
  if (bytes.size() - offset < image.pixels.size()) throw FormatError("truncated PGM raster");
  std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
            bytes.begin() + static_cast<std::ptrdiff_t>(offset + image.pixels.size()),
            image.pixels.begin());
  return image;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

std::string pose_file(std::size_t index, std::size_t view) {
  char buf[64];
  if (view == 0) {
    std::snprintf(buf, sizeof(buf), "pose_%05zu.pbm", index);
  } else {
    std::snprintf(buf, sizeof(buf), "pose_%05zu_v%zu.pbm", index, view);
  }
  return buf;
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

Point2 point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void write_dataset(const std::filesystem::path& dir, std::span<const simworld::RecordPtr> records) {
  json poses = json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const simworld::PoseRecord& r = *records[i];
    json entry;
    entry["index"] = i;
    entry["config"] = std::vector<double>(r.config.begin(), r.config.end());
    json tracked = json::array();
    for (Point2 p : r.tracked) tracked.push_back(point_json(p));
    entry["tracked"] = tracked;
    json files = json::array();
    json rles = json::array();
    for (std::size_t v = 0; v < r.views.size(); ++v) {
      const std::string name = pose_file(i, v);
      write_file(dir / name, encode_pbm(r.views[v]));
      files.push_back(name);
      rles.push_back(rle::to_text(rle::encode(r.views[v])));
    }
    entry["files"] = files;
    entry["rle"] = rles;
    poses.push_back(entry);
  }
  json manifest;
  manifest["count"] = records.size();
  manifest["poses"] = poses;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<DatasetEntry> read_dataset(const std::filesystem::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw FormatError(std::string("dataset manifest: ") + e.what());
  }
  std::vector<DatasetEntry> out;
  try {
    for (const json& entry : manifest.at("poses")) {
      DatasetEntry d;
      d.config = simworld::JointVector(entry.at("config").get<std::vector<double>>());
      for (const json& p : entry.at("tracked")) d.tracked.push_back(point_from(p));
      const auto& files = entry.at("files");
      const auto& rles = entry.at("rle");
      if (files.size() != rles.size()) throw FormatError("file and RLE counts differ");
      for (std::size_t v = 0; v < files.size(); ++v) {
        BinaryImage image = decode_pbm(read_file(dir / files[v].get<std::string>()));
        if (rle::encode(image) != rle::from_text(rles[v].get<std::string>())) {
          throw FormatError("pose " + std::to_string(out.size()) + " image disagrees with its RLE");
        }
        d.views.push_back(std::move(image));
      }
      out.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("dataset manifest: ") + e.what());
  }
  return out;
}

std::string vrm_to_json(const vrm::Vrm& g) {
  json nodes = json::array();
  for (std::size_t i = 0; i < g.base_size(); ++i) {
    const vrm::Node& n = g.node(static_cast<graph::NodeId>(i));
    json node;
    node["id"] = n.id;
    node["status"] = n.status == vrm::NodeStatus::kFree ? "free" : "collision";
    node["config"] = std::vector<double>(n.record->config.begin(), n.record->config.end());
    node["category"] = n.category ? json(*n.category) : json(nullptr);
    nodes.push_back(node);
  }
  json edges = json::array();
  for (const vrm::EdgeState& e : g.edges()) {
    if (e.temporary) continue;
    edges.push_back({{"i", e.u}, {"j", e.v}, {"w", e.w}, {"pruned", e.pruned}});
  }
  json doc;
  doc["k"] = g.k();
  doc["metric"] = g.metric().name();
  doc["nodes"] = nodes;
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

vrm::Vrm vrm_from_json(std::string_view text, const simworld::RobotModel& model,
                       const simworld::Canvas& canvas, metrics::MetricPtr metric,
                       const VrmImportOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("vrm.json: ") + e.what());
  }
  try {
    const auto k = doc.at("k").get<std::size_t>();
    if (doc.at("metric").get<std::string>() != metric->name()) {
      throw FormatError("vrm.json was built with metric " + doc.at("metric").get<std::string>());
    }
    std::vector<simworld::JointVector> configs;
    std::vector<vrm::NodeStatus> status;
    std::vector<std::optional<std::string>> categories;
    for (const json& node : doc.at("nodes")) {
      if (node.at("id").get<std::size_t>() != configs.size()) {
        throw FormatError("node ids must be 0..n-1 in order");
      }
      const std::string s = node.at("status").get<std::string>();
      if (s != "free" && s != "collision") throw FormatError("unknown node status '" + s + "'");
      status.push_back(s == "free" ? vrm::NodeStatus::kFree : vrm::NodeStatus::kCollision);
      configs.emplace_back(node.at("config").get<std::vector<double>>());
      const json& c = node.at("category");
      categories.push_back(c.is_null() ? std::nullopt : std::optional(c.get<std::string>()));
    }
    std::vector<graph::Edge> edges;
    std::vector<bool> pruned;
    for (const json& e : doc.at("edges")) {
      edges.push_back({e.at("i").get<graph::NodeId>(), e.at("j").get<graph::NodeId>(),
                       e.at("w").get<double>()});
      pruned.push_back(e.at("pruned").get<bool>());
    }

    std::vector<simworld::RecordPtr> records;
    try {
      records = vrm::render_records(model, configs, canvas, metric.get(), true, options.threads);
    } catch (const Error& e) {
      throw FormatError(std::string("vrm.json node configuration: ") + e.what());
    }
    for (const graph::Edge& e : edges) {
      if (e.u >= records.size() || e.v >= records.size()) throw FormatError("edge endpoint out of range");
      const double d = metric->distance(*records[e.u], *records[e.v]);
      if (std::abs(d - e.w) > 1e-12 * std::max(1.0, d)) {
        throw FormatError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                          ") weight disagrees with the metric");
      }
    }
    if (options.verify_knn) {
      const auto distances = graph::PairwiseDistances::compute(
          records.size(), options.threads,
          [&](std::size_t i, std::size_t j) { return metric->distance(*records[i], *records[j]); });
      const auto expected = graph::symmetric_knn_edges(distances, k);
      bool same = expected.size() == edges.size();
      for (std::size_t i = 0; same && i < edges.size(); ++i) {
        same = expected[i].u == edges[i].u && expected[i].v == edges[i].v;
      }
      if (!same) throw FormatError("edge set does not follow the k-NN rule");
    }
    vrm::Vrm g;
    try {
      g = vrm::Vrm::assemble(std::move(records), k, std::move(metric), std::move(edges));
    } catch (const DomainError& e) {
      throw FormatError(std::string("vrm.json: ") + e.what());
    }
    for (std::size_t i = 0; i < status.size(); ++i) {
      g.set_status(static_cast<graph::NodeId>(i), status[i]);
      g.set_category(static_cast<graph::NodeId>(i), categories[i]);
    }
    for (std::size_t e = 0; e < pruned.size(); ++e) g.set_pruned(e, pruned[e]);
    return g;
  } catch (const json::exception& e) {
    throw FormatError(std::string("vrm.json: ") + e.what());
  }
}

std::string stats_csv(std::span<const localplan::PruneStats> rows) {
  std::string out = "metric,planner,n,k,edges_total,edges_pruned,bad_remaining_pct,conservative_discards\n";
  for (const auto& r : rows) {
    out += r.metric.find(',') == std::string::npos ? r.metric : "\"" + r.metric + "\"";
    out += "," + r.planner + "," + std::to_string(r.n) + "," + std::to_string(r.k) + "," +
           std::to_string(r.edges_total) + "," + std::to_string(r.edges_pruned) + "," +
           format_double(r.bad_remaining_pct()) + "," + std::to_string(r.conservative_discards) + "\n";
  }
  return out;
}

std::string embedding_csv(const manifold::Embedding& embedding, std::span<const graph::NodeId> ids) {
  if (ids.size() != static_cast<std::size_t>(embedding.points.cols())) {
    throw DomainError("embedding and id list differ in size");
  }
  std::string out = "node_id";
  for (int d = 1; d <= embedding.p; ++d) out += ",y" + std::to_string(d);
  out += "\n";
  for (std::size_t c = 0; c < ids.size(); ++c) {
    out += std::to_string(ids[c]);
    for (int d = 0; d < embedding.p; ++d) {
      out += "," + format_double(embedding.points(d, static_cast<Eigen::Index>(c)));
    }
    out += "\n";
  }
  return out;
}

std::string residual_csv(std::span<const double> residuals) {
  std::string out = "dim,residual\n";
  for (std::size_t d = 0; d < residuals.size(); ++d) {
    out += std::to_string(d + 1) + "," + format_double(residuals[d]) + "\n";
  }
  return out;
}

std::string path_json(const vrm::Vrm& g, const vrm::PathResult& path) {
  json nodes = json::array();
  for (graph::NodeId id : path.nodes) {
    const auto& config = g.record(id).config;
    nodes.push_back({{"id", id},
                     {"temporary", g.node(id).temporary},
                     {"config", std::vector<double>(config.begin(), config.end())}});
  }
  json doc;
  doc["found"] = path.found;
  doc["weight"] = path.weight;
  doc["nodes"] = nodes;
  doc["edge_safe"] = path.edge_safe;
  return doc.dump(2) + "\n";
}

std::string no_path_json(graph::NodeId s, graph::NodeId t) {
  json doc;
  doc["found"] = false;
  doc["error"] = "no-path";
  doc["start"] = s;
  doc["goal"] = t;
  return doc.dump() + "\n";
}

std::string trace_json(const dynamic::SimTrace& trace) {
  json frames = json::array();
  for (const dynamic::Frame& f : trace.frames) {
    frames.push_back({{"time", f.time},
                      {"node", f.node},
                      {"scene", f.scene},
                      {"event", std::string(dynamic::event_name(f.event))}});
  }
  json doc;
  doc["frames"] = frames;
  doc["reached"] = trace.reached;
  doc["timed_out"] = trace.timed_out;
  doc["h_too_small"] = trace.h_too_small;
  return doc.dump(2) + "\n";
}

std::string error_json(std::string_view kind, std::string_view message) {
  json doc;
  doc["error"] = std::string(kind);
  doc["message"] = std::string(message);
  return doc.dump();
}

}  // namespace vizplan::io
