#include "tweetscape/layout.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "tweetscape/error.hpp"

namespace tweetscape {

namespace {

struct CellHash {
  std::size_t operator()(const CellIndex& c) const noexcept {
    const auto a = static_cast<std::uint64_t>(c.first);
    const auto b = static_cast<std::uint64_t>(c.second);
    return std::hash<std::uint64_t>{}(a * 0x9E3779B97F4A7C15ull ^ (b + 0x632BE59BD9B4E019ull));
  }
};

}  // namespace

void StackParams::validate() const {
  if (!(cell_size_m > 0.0) || !(marker_height_m > 0.0) || !(ground_offset_m > 0.0)) {
    throw DomainError("bad-stack-params", "stack parameters must be positive");
  }
}

std::vector<Placement> place(const Dataset& ds, const SceneFrame& frame, const Heightmap* terrain,
                             const StackParams& params) {
  params.validate();

  std::vector<const TweetRecord*> order;
  order.reserve(ds.records.size());
  for (const auto& rec : ds.records) order.push_back(&rec);
  std::sort(order.begin(), order.end(), [](const TweetRecord* a, const TweetRecord* b) {
    return a->timestamp != b->timestamp ? a->timestamp < b->timestamp : a->id < b->id;
  });

  std::unordered_map<CellIndex, std::size_t, CellHash> height_of_stack;
  height_of_stack.reserve(order.size());
  std::vector<Placement> out;
  out.reserve(order.size());
  for (const auto* rec : order) {
    ScenePoint p;
    try {
      p = project(rec->latitude, rec->longitude, frame);
    } catch (const DomainError& e) {
      throw DomainError("out-of-bounds", "record " + rec->id + ": " + e.what());
    }
    double base = params.ground_offset_m;
    if (terrain) {
      if (const auto h = sample_bilinear(*terrain, p.x(), p.y())) base += *h;
    }
    const std::size_t index = height_of_stack[cell_of(p.x(), p.y(), params.cell_size_m)]++;
    p.z() = base + static_cast<double>(index) * params.marker_height_m;
    const bool skull = rec->tags.count(std::string(kSkullTag)) > 0;
    out.push_back({rec->id, p, index, skull ? "skull" : "bird"});
  }
  return out;
}

std::size_t count_collisions(const std::vector<Placement>& placements) {
  return static_cast<std::size_t>(
      std::count_if(placements.begin(), placements.end(), [](const Placement& p) { return p.stack_index > 0; }));
}

QueryWall build_wall(const Dataset& ds, const SceneFrame& frame, std::string keyword,
                     const std::vector<std::string>& match_ids, const WallParams& params) {
  if (params.columns == 0) throw DomainError("bad-wall-params", "wall needs at least one column");
  if (!(params.slot_spacing_m > 0.0)) throw DomainError("bad-wall-params", "slot spacing must be positive");

  std::unordered_set<std::string_view> known;
  known.reserve(ds.records.size());
  for (const auto& rec : ds.records) known.insert(rec.id);

  QueryWall wall;
  wall.keyword = std::move(keyword);
  const auto center = frame.center();
  wall.origin = ScenePoint(center.x(), center.y(), params.altitude_m);
  wall.columns = params.columns;
  wall.slot_spacing_m = params.slot_spacing_m;
  wall.assignments.reserve(match_ids.size());

  std::unordered_set<std::string_view> used;
  for (std::size_t i = 0; i < match_ids.size(); ++i) {
    const auto& id = match_ids[i];
    if (!known.count(id)) throw DomainError("unknown-id", "wall match id not in dataset: " + id);
    if (!used.insert(id).second) throw DomainError("duplicate-id", "wall match id repeated: " + id);
    wall.assignments.push_back({id, i / params.columns, i % params.columns});
  }
  return wall;
}

ScalingReport benchmark_placement(const std::vector<std::size_t>& n_values, const SceneFrame& frame,
                                  const StackParams& params, const BenchmarkOptions& options) {
  if (!std::is_sorted(n_values.begin(), n_values.end())) {
    throw DomainError("bad-benchmark", "n values must be ascending");
  }
  const std::size_t n_max = n_values.empty() ? 0 : n_values.back();

  std::mt19937_64 rng(options.seed);
  const auto& b = frame.bounds;
  std::uniform_real_distribution<double> lat(b.min_lat, b.max_lat);
  std::uniform_real_distribution<double> lon(b.min_lon, b.max_lon);
  // Five months starting 2013-10-01T00:00:00Z, in milliseconds.
  const Instant t0{std::chrono::milliseconds{1380585600000LL}};
  std::uniform_int_distribution<std::int64_t> offset_ms(0, 151LL * 24 * 3600 * 1000);

  std::vector<TweetRecord> pool(n_max);
  for (std::size_t i = 0; i < n_max; ++i) {
    auto& r = pool[i];
    r.id = "bench-" + std::to_string(i);
    r.username = "user" + std::to_string(i % 97);
    r.latitude = lat(rng);
    r.longitude = lon(rng);
    r.timestamp = t0 + std::chrono::milliseconds{offset_ms(rng)};
    r.text = "benchmark";
  }

  ScalingReport report;
  for (const std::size_t n : n_values) {
    Dataset ds;
    ds.bounds = b;
    ds.records.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));

    ScalingSample sample;
    sample.n = n;
    sample.elapsed = std::chrono::nanoseconds::max();
    for (int k = 0; k < std::max(1, options.repeats); ++k) {
      const auto start = std::chrono::steady_clock::now();
      const auto placements = place(ds, frame, nullptr, params);
      const auto elapsed = std::chrono::steady_clock::now() - start;
      sample.elapsed = std::min(sample.elapsed, std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed));
      sample.collisions = count_collisions(placements);
    }
    report.samples.push_back(sample);
  }
  return report;
}

void write_scaling_csv(const ScalingReport& report, std::ostream& out) {
  out << "n,elapsed_ms,collisions,collision_ratio\n";
  for (const auto& s : report.samples) {
    out << s.n << ',' << std::chrono::duration<double, std::milli>(s.elapsed).count() << ',' << s.collisions << ','
        << s.collision_ratio() << '\n';
  }
}

}  // namespace tweetscape
