#pragma once

// Synthetic fixtures: campus-like tweet corpora with a ledger of the rows
// that were deliberately corrupted, and campus-like heightmaps.

#include <cstdint>
#include <string>
#include <vector>

#include "tweetscape/ingest.hpp"
#include "tweetscape/terrain.hpp"

namespace tweetscape {

struct CorpusSpec {
  std::size_t rows = 1000;            // data rows, excluding the header
  std::size_t corrupt_rows = 0;       // rows made malformed, recorded in the ledger
  std::size_t out_of_bounds_rows = 0; // well-formed rows placed outside `bounds`
  GeoBounds bounds = cambridge_bounds();
  Instant start{std::chrono::milliseconds{1380585600000LL}};  // 2013-10-01T00:00:00Z
  Instant end{std::chrono::milliseconds{1393632000000LL}};    // 2014-03-01T00:00:00Z
  std::size_t users = 60;
  std::uint64_t seed = 1;
  /// Reasons to draw corruptions from; empty means every malformed kind.
  std::vector<std::string> corruption_kinds;
};

struct SyntheticCorpus {
  std::string tsv;
  std::vector<Rejection> corrupted;  // (line_number, expected reason), line order
  std::vector<std::size_t> out_of_bounds_lines;
  std::size_t valid_rows = 0;        // rows that should load into the Dataset
};

SyntheticCorpus generate_corpus(const CorpusSpec& spec);

/// Rolling ground with rectangular "buildings" and sensor-like jitter.
Heightmap generate_campus_heightmap(long cols, long rows, double resolution_m, std::uint64_t seed);

}  // namespace tweetscape
