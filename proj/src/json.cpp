#include "tweetscape/json.hpp"

namespace tweetscape {

namespace {

Json point(const ScenePoint& p) { return Json::array({p.x(), p.y(), p.z()}); }

}  // namespace

Json to_json(const GeoBounds& b) {
  return {{"min_lat", b.min_lat}, {"min_lon", b.min_lon}, {"max_lat", b.max_lat}, {"max_lon", b.max_lon}};
}

Json to_json(const SceneFrame& frame) {
  return {{"bounds", to_json(frame.bounds)}, {"width_m", frame.width_m}, {"depth_m", frame.depth_m}};
}

Json to_json(const TweetRecord& r) {
  return {{"id", r.id},
          {"username", r.username},
          {"follower_count", r.follower_count},
          {"timestamp", format_iso8601(r.timestamp)},
          {"lat", r.latitude},
          {"lon", r.longitude},
          {"text", r.text},
          {"tags", Json(r.tags)}};
}

Json to_json(const Placement& p) {
  return {{"record_id", p.record_id},     {"x", p.position.x()},
          {"y", p.position.y()},          {"z", p.position.z()},
          {"stack_index", p.stack_index}, {"model_class", p.model_class}};
}

Json to_json(const std::vector<Placement>& placements) {
  Json arr = Json::array();
  for (const auto& p : placements) arr.push_back(to_json(p));
  return {{"placements", std::move(arr)}};
}

Json to_json(const QueryWall& wall) {
  Json slots = Json::array();
  for (const auto& s : wall.assignments) {
    slots.push_back({{"record_id", s.record_id}, {"wall_row", s.row}, {"wall_col", s.col}});
  }
  return {{"keyword", wall.keyword},
          {"origin", point(wall.origin)},
          {"columns", wall.columns},
          {"slot_spacing_m", wall.slot_spacing_m},
          {"assignments", std::move(slots)}};
}

Json to_json(const UserPath& path) {
  Json edges = Json::array();
  for (const auto& e : path.edges) edges.push_back({{"from", e.from_id}, {"to", e.to_id}});
  return {{"username", path.username}, {"tweet_ids", path.tweet_ids}, {"edges", std::move(edges)}};
}

Json to_json(const CellCounts& counts) {
  Json cells = Json::array();
  for (const auto& [cell, n] : counts.counts) {
    cells.push_back({{"cell_x", cell.first}, {"cell_y", cell.second}, {"count", n}});
  }
  return {{"cell_size_m", counts.cell_size_m}, {"counts", std::move(cells)}};
}

Json to_json(const MeshChunk& chunk) {
  Json vertices = Json::array();
  for (Eigen::Index i = 0; i < chunk.mesh.vertices.rows(); ++i) {
    const auto v = chunk.mesh.vertices.row(i);
    vertices.push_back({v(0), v(1), v(2)});
  }
  Json triangles = Json::array();
  for (Eigen::Index t = 0; t < chunk.mesh.triangles.rows(); ++t) {
    const auto tri = chunk.mesh.triangles.row(t);
    triangles.push_back({tri(0), tri(1), tri(2)});
  }
  return {{"chunk_id", chunk.chunk_id}, {"vertices", std::move(vertices)}, {"triangles", std::move(triangles)}};
}

Json to_json(const std::vector<MeshChunk>& chunks) {
  Json arr = Json::array();
  for (const auto& c : chunks) arr.push_back(to_json(c));
  return {{"chunks", std::move(arr)}};
}

GeoBounds bounds_from_json(const Json& j) {
  return GeoBounds::from_corners(j.at("min_lat").get<double>(), j.at("min_lon").get<double>(),
                                 j.at("max_lat").get<double>(), j.at("max_lon").get<double>());
}

}  // namespace tweetscape
