#pragma once

// Analytic tasks over a loaded Dataset: keyword tagging, time filtering,
// string-match search, per-user paths, and grid cluster counts.
//
// Matching is ASCII case-folded substring search; non-ASCII bytes compare
// exactly.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tweetscape/geoproject.hpp"
#include "tweetscape/ingest.hpp"
#include "tweetscape/time.hpp"

namespace tweetscape {

struct TagRule {
  std::string keyword;
  std::string tag;
  bool case_sensitive = false;
};

struct TimeInterval {
  Instant start{};
  Instant end{};
};

struct PathEdge {
  std::string from_id;
  std::string to_id;

  bool operator==(const PathEdge&) const = default;
};

struct UserPath {
  std::string username;
  std::vector<std::string> tweet_ids;
  std::vector<PathEdge> edges;
};

using CellIndex = std::pair<std::int64_t, std::int64_t>;

struct CellCounts {
  double cell_size_m = 0;
  std::map<CellIndex, std::size_t> counts;
};

std::string ascii_lower(std::string_view s);

/// True when `needle` occurs in `haystack`, ASCII case-insensitively.
bool contains_folded(std::string_view haystack, std::string_view needle);

/// Adds each matching rule's tag to records whose text contains the keyword.
/// Throws DomainError("empty-keyword") for a rule with an empty keyword.
Dataset tag_keywords(const Dataset& ds, const std::vector<TagRule>& rules);

/// Ids of records with start <= timestamp <= end, chronologically.
std::vector<std::string> filter_time(const Dataset& ds, const TimeInterval& interval);

/// Ids of records whose text contains `keyword` (case-insensitive).
/// Throws DomainError("empty-query") for a blank keyword.
std::vector<std::string> search(const Dataset& ds, std::string_view keyword);

UserPath user_path(const Dataset& ds, std::string_view username);

/// Counts records per (floor(x / cell), floor(y / cell)) scene grid cell.
CellCounts cluster_stats(const Dataset& ds, const SceneFrame& frame, double cell_size_m);

/// Grid cell containing scene-plane point (x, y).
inline CellIndex cell_of(double x, double y, double cell_size_m) {
  return {static_cast<std::int64_t>(std::floor(x / cell_size_m)),
          static_cast<std::int64_t>(std::floor(y / cell_size_m))};
}

}  // namespace tweetscape
