#pragma once

// Tweet corpus ingestion: tab-separated parsing, per-row validation, and
// bounded loading into an immutable, chronologically sorted Dataset.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tweetscape/geoproject.hpp"
#include "tweetscape/time.hpp"

namespace tweetscape {

/// Column order of the corpus file. The header line must match exactly.
inline const std::vector<std::string>& tweet_columns() {
  static const std::vector<std::string> columns{"id",       "username",  "follower_count", "timestamp",
                                                "latitude", "longitude", "text"};
  return columns;
}

struct RawRow {
  std::size_t line_number = 0;  // 1-based; the header is line 1
  std::vector<std::string> cells;
};

struct TweetRecord {
  std::string id;
  std::string username;
  std::uint64_t follower_count = 0;
  Instant timestamp{};
  double latitude = 0;
  double longitude = 0;
  std::string text;
  std::set<std::string> tags;

  bool operator==(const TweetRecord&) const = default;
};

/// Rejection reasons. Only the listed strings are ever produced.
namespace reject {
inline constexpr std::string_view kColumnCount = "column-count";
inline constexpr std::string_view kBadTimestamp = "bad-timestamp";
inline constexpr std::string_view kBadCoordinate = "bad-coordinate";
inline constexpr std::string_view kBadInteger = "bad-integer";
inline constexpr std::string_view kEmptyField = "empty-required-field";
inline constexpr std::string_view kInvalidUtf8 = "invalid-utf8";
inline constexpr std::string_view kDuplicateId = "duplicate-id";
}  // namespace reject

struct Rejection {
  std::size_t line_number = 0;
  std::string reason;

  bool operator==(const Rejection&) const = default;
};

struct ParseResult {
  std::vector<RawRow> rows;
  std::vector<Rejection> errors;  // always reason "column-count"
};

/// Splits `input` into rows. The first line must equal `header` joined by
/// tabs; otherwise (or on empty input) FormatError is thrown.
ParseResult parse_tsv(std::istream& input, const std::vector<std::string>& header = tweet_columns());
ParseResult parse_tsv(std::string_view input, const std::vector<std::string>& header = tweet_columns());

/// Parses one row with the standard column layout. A rejection is a normal
/// outcome, not an error.
std::variant<TweetRecord, Rejection> validate_record(const RawRow& row);

struct Dataset {
  std::vector<TweetRecord> records;  // sorted by (timestamp, id)
  GeoBounds bounds;
  std::size_t skipped = 0;        // malformed rows: column-count + validation rejections
  std::size_t out_of_bounds = 0;  // well-formed rows outside `bounds`
  std::vector<Rejection> reject_log;  // malformed rows, in line order

  const TweetRecord* find(std::string_view id) const;
};

/// Loads a corpus held in memory.
Dataset load_dataset_text(std::string_view text, const GeoBounds& bounds);

/// Reads and loads a corpus file. Throws IoError("ingest: unreadable file")
/// when the file cannot be read and FormatError on a bad header.
Dataset load_dataset(const std::filesystem::path& path, const GeoBounds& bounds);

/// Strict UTF-8 check (no overlongs, surrogates, or code points > U+10FFFF).
bool is_valid_utf8(std::string_view s);

}  // namespace tweetscape
