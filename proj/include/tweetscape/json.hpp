#pragma once

// JSON encodings shared by the HTTP API and its tests. Timestamps are
// ISO-8601 UTC strings; every other number is a JSON number.

#include <json.hpp>

#include "tweetscape/analytics.hpp"
#include "tweetscape/layout.hpp"
#include "tweetscape/terrain.hpp"

namespace tweetscape {

using Json = nlohmann::json;

Json to_json(const GeoBounds& bounds);
Json to_json(const SceneFrame& frame);
Json to_json(const TweetRecord& record);
Json to_json(const Placement& placement);
Json to_json(const std::vector<Placement>& placements);
Json to_json(const QueryWall& wall);
Json to_json(const UserPath& path);
Json to_json(const CellCounts& counts);
Json to_json(const MeshChunk& chunk);
Json to_json(const std::vector<MeshChunk>& chunks);

GeoBounds bounds_from_json(const Json& j);

}  // namespace tweetscape
