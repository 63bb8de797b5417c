#include "tweetscape/service.hpp"

#include <httplib.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "tweetscape/error.hpp"

namespace tweetscape {

namespace {

constexpr std::string_view kGroundImageRoute = "/assets/ground-image";

ApiResponse json_response(int status, const Json& body) { return {status, body.dump(), "application/json"}; }

ApiResponse error_response(int status, std::string_view reason, std::string_view detail = {}) {
  Json body{{"error", reason}};
  if (!detail.empty()) body["detail"] = detail;
  return json_response(status, body);
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto slash = path.find('/', pos);
    if (slash == std::string_view::npos) slash = path.size();
    if (slash > pos) parts.emplace_back(path.substr(pos, slash - pos));
    pos = slash + 1;
  }
  return parts;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::string> param(const ApiRequest& req, const std::string& key) {
  const auto it = req.query.find(key);
  if (it == req.query.end()) return std::nullopt;
  return it->second;
}

std::string content_type_for(const std::filesystem::path& p) {
  const auto ext = ascii_lower(p.extension().string());
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".webp") return "image/webp";
  return "application/octet-stream";
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("unreadable file: " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const Json& j, const std::filesystem::path& base_dir) {
  ServiceConfig c;
  try {
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    if (j.contains("dataset")) c.dataset_path = resolve(base_dir, j.at("dataset").get<std::string>());
    if (j.contains("heightmap")) c.heightmap_path = resolve(base_dir, j.at("heightmap").get<std::string>());
    if (j.contains("ground_image")) c.ground_image_path = resolve(base_dir, j.at("ground_image").get<std::string>());
    if (j.contains("static_dir")) c.static_dir = resolve(base_dir, j.at("static_dir").get<std::string>());
    if (j.contains("bounds")) c.bounds = bounds_from_json(j.at("bounds"));
    if (j.contains("stack")) {
      const auto& s = j.at("stack");
      c.stack.cell_size_m = s.value("cell_size_m", c.stack.cell_size_m);
      c.stack.marker_height_m = s.value("marker_height_m", c.stack.marker_height_m);
      c.stack.ground_offset_m = s.value("ground_offset_m", c.stack.ground_offset_m);
    }
    if (j.contains("wall")) {
      const auto& w = j.at("wall");
      c.wall.columns = w.value("columns", c.wall.columns);
      c.wall.slot_spacing_m = w.value("slot_spacing_m", c.wall.slot_spacing_m);
      c.wall.altitude_m = w.value("altitude_m", c.wall.altitude_m);
    }
    if (j.contains("smoothing")) {
      const auto& s = j.at("smoothing");
      c.smoothing.iterations = s.value("iterations", c.smoothing.iterations);
      c.smoothing.lambda = s.value("lambda", c.smoothing.lambda);
    }
    c.max_chunk_vertices = j.value("max_chunk_vertices", c.max_chunk_vertices);
    if (j.contains("tag_rules")) {
      c.tag_rules.clear();
      for (const auto& r : j.at("tag_rules")) {
        c.tag_rules.push_back(
            {r.at("keyword").get<std::string>(), r.at("tag").get<std::string>(), r.value("case_sensitive", false)});
      }
    }
  } catch (const Json::exception& e) {
    throw BootError(std::string("config: ") + e.what());
  } catch (const DomainError& e) {
    throw BootError(std::string("config: ") + e.what());
  }
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const IoError& e) {
    throw BootError(std::string("config: ") + e.what());
  } catch (const Json::exception& e) {
    throw BootError(std::string("config: ") + e.what());
  }
  return from_json(j, path.parent_path());
}

std::shared_ptr<const Snapshot> build_snapshot(const ServiceConfig& config, std::uint64_t generation) {
  auto snap = std::make_shared<Snapshot>();
  snap->generation = generation;
  try {
    snap->frame = SceneFrame::from_bounds(config.bounds);
    config.stack.validate();
  } catch (const DomainError& e) {
    throw BootError(std::string("config: ") + e.what());
  }

  try {
    if (config.dataset_path.empty()) throw IoError("no dataset path configured");
    snap->dataset = tag_keywords(load_dataset(config.dataset_path, config.bounds), config.tag_rules);
  } catch (const IoError&) {
    throw BootError("ingest: unreadable file: " + config.dataset_path.string());
  } catch (const std::exception& e) {
    throw BootError(std::string("ingest: ") + e.what());
  }

  if (config.heightmap_path) {
    try {
      auto hm = smooth(load_heightmap(*config.heightmap_path), config.smoothing.iterations, config.smoothing.lambda);
      if (hm.rows() >= 2 && hm.cols() >= 2) {
        snap->terrain_chunks = chunk_mesh(triangulate(hm), config.max_chunk_vertices);
      }
      snap->terrain = std::move(hm);
    } catch (const IoError&) {
      throw BootError("terrain: unreadable file: " + config.heightmap_path->string());
    } catch (const std::exception& e) {
      throw BootError(std::string("terrain: ") + e.what());
    }
  }

  try {
    snap->placements = place(snap->dataset, snap->frame, snap->terrain ? &*snap->terrain : nullptr, config.stack);
  } catch (const std::exception& e) {
    throw BootError(std::string("layout: ") + e.what());
  }

  for (std::size_t i = 0; i < snap->dataset.records.size(); ++i) snap->record_index.emplace(snap->dataset.records[i].id, i);
  for (std::size_t i = 0; i < snap->placements.size(); ++i) snap->placement_index.emplace(snap->placements[i].record_id, i);
  snap->load_timestamp = std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
  return snap;
}

Service::Service(ServiceConfig config) : config_(std::move(config)) {
  generation_ = 1;
  store_.publish(build_snapshot(config_, generation_));
}

Service::~Service() { stop(); }

std::shared_ptr<const Snapshot> Service::reload() {
  std::lock_guard lock(reload_mutex_);
  auto next = build_snapshot(config_, generation_ + 1);
  ++generation_;
  store_.publish(next);
  return next;
}

ApiResponse Service::handle(const ApiRequest& request) {
  if (request.method == "POST" && request.path == "/admin/reload") {
    try {
      const auto snap = reload();
      return json_response(200, {{"load_timestamp", format_iso8601(snap->load_timestamp)},
                                 {"generation", snap->generation}});
    } catch (const BootError& e) {
      return error_response(500, "reload-failed", e.what());
    }
  }
  const auto snap = store_.current();
  try {
    return route(request, *snap);
  } catch (const DomainError& e) {
    return error_response(400, e.reason(), e.what());
  }
}

ApiResponse Service::route(const ApiRequest& req, const Snapshot& snap) {
  const auto parts = split_path(req.path);
  const bool get = req.method == "GET";
  const bool post = req.method == "POST";
  const auto& ds = snap.dataset;

  if (parts.size() == 1 && parts[0] == "health") {
    if (!get) return error_response(405, "method-not-allowed");
    return json_response(200, {{"status", "ok"}});
  }

  if (parts.size() == 1 && parts[0] == "scene") {
    if (!get) return error_response(405, "method-not-allowed");
    Json body{{"frame", to_json(snap.frame)},
              {"ground_image", config_.ground_image_path ? Json(std::string(kGroundImageRoute)) : Json(nullptr)},
              {"load_timestamp", format_iso8601(snap.load_timestamp)}};
    return json_response(200, body);
  }

  if (req.path == kGroundImageRoute && get) {
    if (!config_.ground_image_path) return error_response(404, "not-found");
    try {
      return {200, read_file(*config_.ground_image_path), content_type_for(*config_.ground_image_path)};
    } catch (const IoError&) {
      return error_response(404, "not-found");
    }
  }

  if (parts.size() == 1 && parts[0] == "terrain") {
    if (!get) return error_response(405, "method-not-allowed");
    return json_response(200, to_json(snap.terrain_chunks));
  }

  if (parts.size() == 1 && parts[0] == "tweets") {
    if (!get) return error_response(405, "method-not-allowed");
    TimeInterval interval;
    if (!ds.records.empty()) interval = {ds.records.front().timestamp, ds.records.back().timestamp};
    if (const auto from = param(req, "from")) {
      const auto t = parse_iso8601(*from);
      if (!t) return error_response(400, "bad-timestamp", "from");
      interval.start = *t;
    }
    if (const auto to = param(req, "to")) {
      const auto t = parse_iso8601(*to);
      if (!t) return error_response(400, "bad-timestamp", "to");
      interval.end = *t;
    }
    if (interval.end < interval.start) return error_response(400, "bad-interval", "from is after to");

    std::optional<GeoBounds> bbox;
    if (const auto raw = param(req, "bbox")) {
      std::vector<double> v;
      std::size_t pos = 0;
      while (pos <= raw->size()) {
        auto comma = raw->find(',', pos);
        if (comma == std::string::npos) comma = raw->size();
        const auto value = to_double(std::string_view(*raw).substr(pos, comma - pos));
        if (!value) return error_response(400, "bad-bbox", "expected min_lat,min_lon,max_lat,max_lon");
        v.push_back(*value);
        pos = comma + 1;
      }
      if (v.size() != 4) return error_response(400, "bad-bbox", "expected min_lat,min_lon,max_lat,max_lon");
      try {
        bbox = GeoBounds::from_corners(v[0], v[1], v[2], v[3]);
      } catch (const DomainError& e) {
        return error_response(400, "bad-bbox", e.what());
      }
    }

    std::vector<Placement> selected;
    for (const auto& id : filter_time(ds, interval)) {
      if (bbox) {
        const auto& rec = ds.records[snap.record_index.at(id)];
        if (!bbox->contains(rec.latitude, rec.longitude)) continue;
      }
      selected.push_back(snap.placements[snap.placement_index.at(id)]);
    }
    return json_response(200, to_json(selected));
  }

  if (parts.size() == 2 && parts[0] == "tweets") {
    if (!get) return error_response(405, "method-not-allowed");
    const auto it = snap.record_index.find(parts[1]);
    if (it == snap.record_index.end()) return error_response(404, "not-found", "unknown tweet id");
    return json_response(200, to_json(ds.records[it->second]));
  }

  if (parts.size() == 1 && parts[0] == "query") {
    if (!post) return error_response(405, "method-not-allowed");
    Json body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("keyword") || !body["keyword"].is_string()) {
      return error_response(400, "bad-request", "expected {\"keyword\": string}");
    }
    const auto keyword = body["keyword"].get<std::string>();
    const auto ids = search(ds, keyword);
    return json_response(200, {{"wall", to_json(build_wall(ds, snap.frame, keyword, ids, config_.wall))}});
  }

  if (parts.size() == 3 && parts[0] == "users" && parts[2] == "path") {
    if (!get) return error_response(405, "method-not-allowed");
    return json_response(200, to_json(user_path(ds, parts[1])));
  }

  if (parts.size() == 1 && parts[0] == "stats") {
    if (!get) return error_response(405, "method-not-allowed");
    double cell = config_.stack.cell_size_m;
    if (const auto raw = param(req, "cell_size")) {
      const auto v = to_double(*raw);
      if (!v || !(*v > 0.0)) return error_response(400, "bad-cell-size");
      cell = *v;
    }
    return json_response(200, to_json(cluster_stats(ds, snap.frame, cell)));
  }

  return error_response(404, "not-found", "no such route");
}

int Service::bind(int port) {
  server_ = std::make_unique<httplib::Server>();
  auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest api;
    api.method = req.method;
    api.path = req.path;
    for (const auto& [k, v] : req.params) api.query.emplace(k, v);
    api.body = req.body;
    const auto out = handle(api);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  if (config_.static_dir) server_->set_mount_point("/ui", config_.static_dir->string());
  server_->Get(".*", adapt);
  server_->Post(".*", adapt);
  if (port == 0) return server_->bind_to_any_port(config_.host);
  return server_->bind_to_port(config_.host, port) ? port : -1;
}

void Service::listen_after_bind() {
  if (server_) server_->listen_after_bind();
}

void Service::stop() {
  if (server_) server_->stop();
}

}  // namespace tweetscape
