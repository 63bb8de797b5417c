#pragma once

// HTTP/JSON service over an immutable, atomically replaced Snapshot.
//
// Routing and response rendering live in Service::handle(), which is
// independent of the transport; listen() only adapts cpp-httplib requests
// onto it.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tweetscape/analytics.hpp"
#include "tweetscape/json.hpp"
#include "tweetscape/layout.hpp"
#include "tweetscape/terrain.hpp"

namespace httplib {
class Server;
}

namespace tweetscape {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path dataset_path;
  std::optional<std::filesystem::path> heightmap_path;
  std::optional<std::filesystem::path> ground_image_path;
  std::optional<std::filesystem::path> static_dir;  // browser client, if built
  GeoBounds bounds = cambridge_bounds();
  StackParams stack;
  WallParams wall;
  SmoothingParams smoothing;
  std::size_t max_chunk_vertices = kDefaultChunkVertices;
  std::vector<TagRule> tag_rules{{"danger", std::string(kSkullTag), false}};

  /// Reads a JSON config; relative paths resolve against the file's directory.
  static ServiceConfig load(const std::filesystem::path& path);
  static ServiceConfig from_json(const Json& j, const std::filesystem::path& base_dir = {});
};

struct Snapshot {
  Dataset dataset;
  SceneFrame frame;
  std::optional<Heightmap> terrain;
  std::vector<Placement> placements;
  std::vector<MeshChunk> terrain_chunks;
  Instant load_timestamp{};
  std::uint64_t generation = 0;

  std::unordered_map<std::string, std::size_t> record_index;     // id -> dataset.records
  std::unordered_map<std::string, std::size_t> placement_index;  // id -> placements
};

/// Startup or reload failure; the message starts with the failing stage
/// ("config", "ingest", "terrain", "layout").
class BootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs the full load pipeline. Throws BootError.
std::shared_ptr<const Snapshot> build_snapshot(const ServiceConfig& config, std::uint64_t generation = 1);

/// Holds the published snapshot. Readers take a reference-counted handle
/// and keep using it even if a reload publishes a replacement meanwhile.
class SnapshotStore {
 public:
  std::shared_ptr<const Snapshot> current() const {
    std::lock_guard lock(mutex_);
    return snapshot_;
  }
  void publish(std::shared_ptr<const Snapshot> next) {
    std::lock_guard lock(mutex_);
    snapshot_ = std::move(next);
  }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
};

struct ApiRequest {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class Service {
 public:
  /// Boots: loads everything and publishes the first snapshot. Throws BootError.
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ApiResponse handle(const ApiRequest& request);

  /// Rebuilds from the config paths and swaps the snapshot in one step. On
  /// failure the previous snapshot stays published and BootError propagates.
  std::shared_ptr<const Snapshot> reload();

  std::shared_ptr<const Snapshot> snapshot() const { return store_.current(); }
  const ServiceConfig& config() const { return config_; }

  /// Binds to config().host. Port 0 picks a free port; returns the bound port.
  int bind(int port);
  /// Serves until stop(); call after bind().
  void listen_after_bind();
  void stop();

 private:
  ApiResponse route(const ApiRequest& request, const Snapshot& snap);

  ServiceConfig config_;
  SnapshotStore store_;
  std::mutex reload_mutex_;
  std::uint64_t generation_ = 0;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace tweetscape
