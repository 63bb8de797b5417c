#include "tweetscape/analytics.hpp"

#include <algorithm>

#include "tweetscape/error.hpp"

namespace tweetscape {

namespace {

char fold(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

bool earlier(const TweetRecord& a, const TweetRecord& b) {
  return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.id < b.id;
}

}  // namespace

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), fold);
  return out;
}

bool contains_folded(std::string_view haystack, std::string_view needle) {
  const auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                              [](char a, char b) { return fold(a) == fold(b); });
  return it != haystack.end() || needle.empty();
}

Dataset tag_keywords(const Dataset& ds, const std::vector<TagRule>& rules) {
  for (const auto& rule : rules) {
    if (rule.keyword.empty()) throw DomainError("empty-keyword", "tag rule keyword must be non-empty");
  }
  Dataset out = ds;
  if (rules.empty()) return out;
  for (auto& rec : out.records) {
    for (const auto& rule : rules) {
      const bool hit = rule.case_sensitive ? rec.text.find(rule.keyword) != std::string::npos
                                           : contains_folded(rec.text, rule.keyword);
      if (hit) rec.tags.insert(rule.tag);
    }
  }
  return out;
}

std::vector<std::string> filter_time(const Dataset& ds, const TimeInterval& interval) {
  std::vector<std::string> ids;
  if (interval.end < interval.start) return ids;
  // Records are sorted by timestamp, so the closed interval is a contiguous run.
  const auto first = std::partition_point(ds.records.begin(), ds.records.end(),
                                          [&](const TweetRecord& r) { return r.timestamp < interval.start; });
  const auto last = std::partition_point(first, ds.records.end(),
                                         [&](const TweetRecord& r) { return r.timestamp <= interval.end; });
  ids.reserve(static_cast<std::size_t>(last - first));
  for (auto it = first; it != last; ++it) ids.push_back(it->id);
  return ids;
}

std::vector<std::string> search(const Dataset& ds, std::string_view keyword) {
  if (trim(keyword).empty()) throw DomainError("empty-query", "search keyword is blank");
  std::vector<std::string> ids;
  for (const auto& rec : ds.records) {
    if (contains_folded(rec.text, keyword)) ids.push_back(rec.id);
  }
  return ids;
}

UserPath user_path(const Dataset& ds, std::string_view username) {
  std::vector<const TweetRecord*> mine;
  for (const auto& rec : ds.records) {
    if (rec.username == username) mine.push_back(&rec);
  }
  std::sort(mine.begin(), mine.end(), [](const TweetRecord* a, const TweetRecord* b) { return earlier(*a, *b); });

  UserPath path;
  path.username = std::string(username);
  for (const auto* rec : mine) path.tweet_ids.push_back(rec->id);
  for (std::size_t i = 1; i < path.tweet_ids.size(); ++i) {
    path.edges.push_back({path.tweet_ids[i - 1], path.tweet_ids[i]});
  }
  return path;
}

CellCounts cluster_stats(const Dataset& ds, const SceneFrame& frame, double cell_size_m) {
  if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m)) {
    throw DomainError("bad-cell-size", "cell size must be positive");
  }
  CellCounts out;
  out.cell_size_m = cell_size_m;
  for (const auto& rec : ds.records) {
    const auto p = project(rec.latitude, rec.longitude, frame);
    ++out.counts[cell_of(p.x(), p.y(), cell_size_m)];
  }
  return out;
}

}  // namespace tweetscape
