#include "tweetscape/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "tweetscape/error.hpp"

namespace tweetscape {

namespace {

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cells.emplace_back(line.substr(start));
      return cells;
    }
    cells.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string join_tabs(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += '\t';
    out += cells[i];
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_count(std::string_view s) {
  if (s.empty() || s.front() == '-' || s.front() == '+') return std::nullopt;
  std::uint64_t value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

Rejection reject_row(const RawRow& row, std::string_view reason) {
  return Rejection{row.line_number, std::string(reason)};
}

}  // namespace

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  while (i < s.size()) {
    const unsigned char c = byte(i);
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char cc = byte(i + k);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::uint32_t kMinForLen[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

ParseResult parse_tsv(std::string_view input, const std::vector<std::string>& header) {
  if (input.empty()) throw FormatError("empty input");

  ParseResult result;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  const std::string expected_header = join_tabs(header);
  while (pos < input.size()) {
    auto nl = input.find('\n', pos);
    if (nl == std::string_view::npos) nl = input.size();
    const auto line = input.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_number;

    if (line_number == 1) {
      if (line != expected_header) throw FormatError("header mismatch: expected '" + expected_header + "'");
      continue;
    }
    RawRow row{line_number, split_tabs(line)};
    if (row.cells.size() != header.size()) {
      result.errors.push_back({line_number, std::string(reject::kColumnCount)});
    } else {
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

ParseResult parse_tsv(std::istream& input, const std::vector<std::string>& header) {
  const std::string text{std::istreambuf_iterator<char>(input), std::istreambuf_iterator<char>()};
  return parse_tsv(std::string_view(text), header);
}

std::variant<TweetRecord, Rejection> validate_record(const RawRow& row) {
  const auto& columns = tweet_columns();
  if (row.cells.size() != columns.size()) return reject_row(row, reject::kColumnCount);
  for (const auto& cell : row.cells) {
    if (!is_valid_utf8(cell)) return reject_row(row, reject::kInvalidUtf8);
  }
  for (const auto& cell : row.cells) {
    if (cell.empty()) return reject_row(row, reject::kEmptyField);
  }
  const auto& c = row.cells;

  TweetRecord rec;
  rec.id = c[0];
  rec.username = c[1];
  const auto followers = parse_count(c[2]);
  if (!followers) return reject_row(row, reject::kBadInteger);
  rec.follower_count = *followers;

  const auto ts = parse_iso8601(c[3]);
  if (!ts) return reject_row(row, reject::kBadTimestamp);
  rec.timestamp = *ts;

  const auto lat = parse_double(c[4]);
  const auto lon = parse_double(c[5]);
  if (!lat || !lon || *lat < -90.0 || *lat > 90.0 || *lon < -180.0 || *lon > 180.0) {
    return reject_row(row, reject::kBadCoordinate);
  }
  rec.latitude = *lat;
  rec.longitude = *lon;
  rec.text = c[6];
  return rec;
}

const TweetRecord* Dataset::find(std::string_view id) const {
  const auto it = std::find_if(records.begin(), records.end(), [&](const TweetRecord& r) { return r.id == id; });
  return it == records.end() ? nullptr : &*it;
}

Dataset load_dataset_text(std::string_view text, const GeoBounds& bounds) {
  bounds.validate();
  auto parsed = parse_tsv(text);

  Dataset ds;
  ds.bounds = bounds;
  std::vector<Rejection> rejections = std::move(parsed.errors);
  std::unordered_set<std::string> seen_ids;
  for (const auto& row : parsed.rows) {
    auto outcome = validate_record(row);
    if (auto* r = std::get_if<Rejection>(&outcome)) {
      rejections.push_back(std::move(*r));
      continue;
    }
    auto& rec = std::get<TweetRecord>(outcome);
    if (!seen_ids.insert(rec.id).second) {
      rejections.push_back(reject_row(row, reject::kDuplicateId));
      continue;
    }
    if (!bounds.contains(rec.latitude, rec.longitude)) {
      ++ds.out_of_bounds;
      continue;
    }
    ds.records.push_back(std::move(rec));
  }

  std::stable_sort(rejections.begin(), rejections.end(),
                   [](const Rejection& a, const Rejection& b) { return a.line_number < b.line_number; });
  ds.skipped = rejections.size();
  ds.reject_log = std::move(rejections);
  std::sort(ds.records.begin(), ds.records.end(), [](const TweetRecord& a, const TweetRecord& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.id < b.id;
  });
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, const GeoBounds& bounds) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("ingest: unreadable file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("ingest: unreadable file: " + path.string());
  return load_dataset_text(buf.str(), bounds);
}

}  // namespace tweetscape
