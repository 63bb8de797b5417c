#include "tweetscape/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "tweetscape/error.hpp"

namespace tweetscape {

namespace {

constexpr std::array<std::string_view, 24> kWords = {
    "danger",  "dining",   "hall",    "dorm",   "lecture", "coffee",  "snow",    "exam",
    "library", "lab",      "river",   "bridge", "party",   "game",    "Danger!", "late",
    "night",   "morning",  "campus",  "food",   "robot",   "physics", "sunset",  "#mit"};

std::string make_text(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> len(2, 9);
  std::uniform_int_distribution<std::size_t> pick(0, kWords.size() - 1);
  std::string text;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) text += ' ';
    text += kWords[pick(rng)];
  }
  return text;
}

std::string fmt_coord(double v) {
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

const std::vector<std::string>& all_corruptions() {
  static const std::vector<std::string> kinds{
      std::string(reject::kColumnCount),   std::string(reject::kBadTimestamp), std::string(reject::kBadCoordinate),
      std::string(reject::kBadInteger),    std::string(reject::kEmptyField),   std::string(reject::kInvalidUtf8),
      std::string(reject::kDuplicateId)};
  return kinds;
}

}  // namespace

SyntheticCorpus generate_corpus(const CorpusSpec& spec) {
  if (spec.corrupt_rows + spec.out_of_bounds_rows > spec.rows) {
    throw DomainError("bad-corpus-spec", "more special rows than rows");
  }
  if (spec.end < spec.start) throw DomainError("bad-corpus-spec", "end before start");
  spec.bounds.validate();
  const auto& kinds = spec.corruption_kinds.empty() ? all_corruptions() : spec.corruption_kinds;

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> lat(spec.bounds.min_lat, spec.bounds.max_lat);
  std::uniform_real_distribution<double> lon(spec.bounds.min_lon, spec.bounds.max_lon);
  std::uniform_int_distribution<std::int64_t> when(0, (spec.end - spec.start).count());
  std::uniform_int_distribution<std::uint64_t> followers(0, 50000);
  std::uniform_int_distribution<std::size_t> user(0, std::max<std::size_t>(spec.users, 1) - 1);
  std::uniform_int_distribution<std::size_t> kind(0, kinds.size() - 1);

  // Row 0 always stays valid so "duplicate-id" corruptions have an earlier id
  // to collide with.
  std::vector<std::size_t> positions(spec.rows > 0 ? spec.rows - 1 : 0);
  std::iota(positions.begin(), positions.end(), std::size_t{1});
  std::shuffle(positions.begin(), positions.end(), rng);
  std::vector<int> role(spec.rows, 0);  // 0 valid, 1 corrupt, 2 out of bounds
  for (std::size_t i = 0; i < spec.corrupt_rows && i < positions.size(); ++i) role[positions[i]] = 1;
  for (std::size_t i = 0; i < spec.out_of_bounds_rows && spec.corrupt_rows + i < positions.size(); ++i) {
    role[positions[spec.corrupt_rows + i]] = 2;
  }

  SyntheticCorpus out;
  std::string& tsv = out.tsv;
  for (std::size_t i = 0; i < tweet_columns().size(); ++i) {
    if (i) tsv += '\t';
    tsv += tweet_columns()[i];
  }
  tsv += '\n';

  for (std::size_t i = 0; i < spec.rows; ++i) {
    const std::size_t line = i + 2;
    std::array<std::string, 7> cells{
        "t" + std::to_string(100000 + i),
        "user" + std::to_string(user(rng)),
        std::to_string(followers(rng)),
        format_iso8601(spec.start + std::chrono::milliseconds{when(rng)}),
        fmt_coord(lat(rng)),
        fmt_coord(lon(rng)),
        make_text(rng),
    };
    bool drop_last = false;
    if (role[i] == 1) {
      const auto& reason = kinds[kind(rng)];
      if (reason == reject::kColumnCount) {
        drop_last = true;
      } else if (reason == reject::kBadTimestamp) {
        cells[3] = "2013-13-40T99:99:99Z";
      } else if (reason == reject::kBadCoordinate) {
        cells[4] = "91.0";
      } else if (reason == reject::kBadInteger) {
        cells[2] = "12k";
      } else if (reason == reject::kEmptyField) {
        cells[1].clear();
      } else if (reason == reject::kInvalidUtf8) {
        cells[6] += " \xC3\x28";
      } else if (reason == reject::kDuplicateId) {
        cells[0] = "t100000";
      } else {
        throw DomainError("bad-corpus-spec", "unknown corruption kind: " + reason);
      }
      out.corrupted.push_back({line, reason});
    } else if (role[i] == 2) {
      const double span = spec.bounds.max_lat - spec.bounds.min_lat;
      cells[4] = fmt_coord(std::min(90.0, spec.bounds.max_lat + span));
      out.out_of_bounds_lines.push_back(line);
    } else {
      ++out.valid_rows;
    }
    const std::size_t n = drop_last ? cells.size() - 1 : cells.size();
    for (std::size_t k = 0; k < n; ++k) {
      if (k) tsv += '\t';
      tsv += cells[k];
    }
    tsv += '\n';
  }
  std::sort(out.corrupted.begin(), out.corrupted.end(),
            [](const Rejection& a, const Rejection& b) { return a.line_number < b.line_number; });
  return out;
}

Heightmap generate_campus_heightmap(long cols, long rows, double resolution_m, std::uint64_t seed) {
  if (cols < 1 || rows < 1 || !(resolution_m > 0.0)) throw DomainError("bad-heightmap", "invalid grid size");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 0.15);

  Heightmap hm;
  hm.resolution_m = resolution_m;
  hm.heights.resize(rows, cols);
  const double phase_x = unit(rng) * 6.28, phase_y = unit(rng) * 6.28;
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      const double x = static_cast<double>(c) * resolution_m, y = static_cast<double>(r) * resolution_m;
      hm.heights(r, c) = 3.0 + 1.5 * std::sin(x / 180.0 + phase_x) * std::cos(y / 140.0 + phase_y) + jitter(rng);
    }
  }
  const long buildings = std::max(1L, cols * rows / 4000);
  for (long b = 0; b < buildings; ++b) {
    const long w = 5 + static_cast<long>(unit(rng) * 40), d = 5 + static_cast<long>(unit(rng) * 40);
    const long c0 = static_cast<long>(unit(rng) * static_cast<double>(cols));
    const long r0 = static_cast<long>(unit(rng) * static_cast<double>(rows));
    const double height = 8.0 + unit(rng) * 30.0;
    for (long r = r0; r < std::min(rows, r0 + d); ++r) {
      for (long c = c0; c < std::min(cols, c0 + w); ++c) hm.heights(r, c) += height;
    }
  }
  return hm;
}

}  // namespace tweetscape
