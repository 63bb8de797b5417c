#pragma once

// Test-only helpers: temporary directories, random corpora, and the naive
// reference implementations ("oracles") the library is checked against.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tweetscape/analytics.hpp"
#include "tweetscape/ingest.hpp"
#include "tweetscape/layout.hpp"
#include "tweetscape/synth.hpp"

namespace testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("tweetscape-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

  fs::path write(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream out(p, std::ios::binary);
    out << contents;
    return p;
  }

 private:
  fs::path path_;
};

inline std::string header_line() {
  return "id\tusername\tfollower_count\ttimestamp\tlatitude\tlongitude\ttext\n";
}

/// Random dataset drawn from a small user pool and word list so that paths,
/// stacks, and search hits are all non-trivial.
inline tweetscape::Dataset random_dataset(std::uint64_t seed, std::size_t rows = 500) {
  tweetscape::CorpusSpec spec;
  spec.rows = rows;
  spec.users = 25;
  spec.seed = seed;
  return tweetscape::load_dataset_text(tweetscape::generate_corpus(spec).tsv, spec.bounds);
}

// --- oracles ------------------------------------------------------------

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::vector<std::string> chronological_ids(const tweetscape::Dataset& ds) {
  auto recs = ds.records;
  std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
    return std::make_pair(a.timestamp, a.id) < std::make_pair(b.timestamp, b.id);
  });
  std::vector<std::string> ids;
  for (const auto& r : recs) ids.push_back(r.id);
  return ids;
}

inline std::vector<std::string> oracle_search(const tweetscape::Dataset& ds, const std::string& keyword) {
  std::vector<std::string> ids;
  const auto k = lower(keyword);
  for (const auto& id : chronological_ids(ds)) {
    if (lower(ds.find(id)->text).find(k) != std::string::npos) ids.push_back(id);
  }
  return ids;
}

inline std::vector<std::string> oracle_filter_time(const tweetscape::Dataset& ds, tweetscape::Instant start,
                                                   tweetscape::Instant end) {
  std::vector<std::string> ids;
  for (const auto& id : chronological_ids(ds)) {
    const auto t = ds.find(id)->timestamp;
    if (start <= t && t <= end) ids.push_back(id);
  }
  return ids;
}

inline std::map<std::string, std::set<std::string>> oracle_tags(const tweetscape::Dataset& ds,
                                                                const std::vector<tweetscape::TagRule>& rules) {
  std::map<std::string, std::set<std::string>> tags;
  for (const auto& r : ds.records) {
    auto& t = tags[r.id];
    t = r.tags;
    for (const auto& rule : rules) {
      const bool hit = rule.case_sensitive ? r.text.find(rule.keyword) != std::string::npos
                                           : lower(r.text).find(lower(rule.keyword)) != std::string::npos;
      if (hit) t.insert(rule.tag);
    }
  }
  return tags;
}

/// Sorts the user's records and zips neighbours.
inline std::vector<std::pair<std::string, std::string>> oracle_path_edges(const tweetscape::Dataset& ds,
                                                                          const std::string& user) {
  std::vector<std::string> ids;
  for (const auto& id : chronological_ids(ds)) {
    if (ds.find(id)->username == user) ids.push_back(id);
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 1; i < ids.size(); ++i) edges.emplace_back(ids[i - 1], ids[i]);
  return edges;
}

inline std::map<std::pair<long long, long long>, std::size_t> oracle_cells(const tweetscape::Dataset& ds,
                                                                          const tweetscape::SceneFrame& frame,
                                                                          double cell) {
  std::map<std::pair<long long, long long>, std::size_t> cells;
  const auto& b = frame.bounds;
  for (const auto& r : ds.records) {
    const double x = (r.longitude - b.min_lon) / (b.max_lon - b.min_lon) * frame.width_m;
    const double y = (r.latitude - b.min_lat) / (b.max_lat - b.min_lat) * frame.depth_m;
    ++cells[{static_cast<long long>(std::floor(x / cell)), static_cast<long long>(std::floor(y / cell))}];
  }
  return cells;
}

/// Expected stack index per record id: records grouped by cell, each group
/// sorted chronologically and numbered from zero.
inline std::map<std::string, std::size_t> oracle_stack_indices(const tweetscape::Dataset& ds,
                                                              const tweetscape::SceneFrame& frame, double cell) {
  std::map<std::pair<long long, long long>, std::vector<const tweetscape::TweetRecord*>> groups;
  for (const auto& r : ds.records) {
    const auto p = tweetscape::project(r.latitude, r.longitude, frame);
    groups[{static_cast<long long>(std::floor(p.x() / cell)), static_cast<long long>(std::floor(p.y() / cell))}]
        .push_back(&r);
  }
  std::map<std::string, std::size_t> out;
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end(), [](const auto* a, const auto* b) {
      return std::make_pair(a->timestamp, a->id) < std::make_pair(b->timestamp, b->id);
    });
    for (std::size_t i = 0; i < members.size(); ++i) out[members[i]->id] = i;
  }
  return out;
}

}  // namespace testing
