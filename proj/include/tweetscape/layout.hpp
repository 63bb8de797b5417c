#pragma once

// 3D placement of records: terrain-anchored positions with chronological
// vertical stacking, floating query walls, and the placement scaling
// benchmark.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tweetscape/analytics.hpp"
#include "tweetscape/geoproject.hpp"
#include "tweetscape/ingest.hpp"
#include "tweetscape/terrain.hpp"

namespace tweetscape {

struct StackParams {
  double cell_size_m = 2.0;
  double marker_height_m = 1.0;
  double ground_offset_m = 0.5;

  void validate() const;
};

struct Placement {
  std::string record_id;
  ScenePoint position = ScenePoint::Zero();
  std::size_t stack_index = 0;
  std::string model_class;  // "bird" or "skull"

  bool operator==(const Placement&) const = default;
};

inline constexpr std::string_view kSkullTag = "skull";

/// Places every record of `ds`. Base height is the bilinear terrain height
/// plus the ground offset (just the offset off-terrain or without terrain);
/// records sharing a stack cell are stacked by (timestamp, id).
/// Output is in (timestamp, id) order regardless of input order.
/// Throws DomainError naming the record id if a record falls outside `frame`.
std::vector<Placement> place(const Dataset& ds, const SceneFrame& frame, const Heightmap* terrain,
                             const StackParams& params = {});

/// Number of placements stacked on top of another one.
std::size_t count_collisions(const std::vector<Placement>& placements);

struct WallParams {
  std::size_t columns = 10;
  double slot_spacing_m = 3.0;
  double altitude_m = 30.0;  // origin height above the scene center
};

struct WallSlot {
  std::string record_id;
  std::size_t row = 0;
  std::size_t col = 0;

  bool operator==(const WallSlot&) const = default;
};

struct QueryWall {
  std::string keyword;
  ScenePoint origin = ScenePoint::Zero();
  std::size_t columns = 0;
  double slot_spacing_m = 0;
  std::vector<WallSlot> assignments;
};

/// Lays out `match_ids` row-major on a vertical wall anchored above the
/// scene center. Throws DomainError for unknown or repeated ids.
QueryWall build_wall(const Dataset& ds, const SceneFrame& frame, std::string keyword,
                     const std::vector<std::string>& match_ids, const WallParams& params = {});

/// Scene position of the slot at (row, col): the wall extends east along x
/// and upward along z from its origin.
inline ScenePoint wall_slot_position(const QueryWall& wall, std::size_t row, std::size_t col) {
  return wall.origin + ScenePoint(static_cast<double>(col) * wall.slot_spacing_m, 0.0,
                                  static_cast<double>(row) * wall.slot_spacing_m);
}

struct ScalingSample {
  std::size_t n = 0;
  std::chrono::nanoseconds elapsed{};
  std::size_t collisions = 0;

  double collision_ratio() const { return n ? static_cast<double>(collisions) / static_cast<double>(n) : 0.0; }
};

struct ScalingReport {
  std::vector<ScalingSample> samples;
};

struct BenchmarkOptions {
  std::uint64_t seed = 1;
  int repeats = 5;  // elapsed is the fastest of this many runs
};

/// Generates random in-frame records for each n and times place(). The
/// record pool is drawn once from `seed`; each n uses its first n records,
/// so collision counts are deterministic for a given seed.
ScalingReport benchmark_placement(const std::vector<std::size_t>& n_values, const SceneFrame& frame,
                                  const StackParams& params, const BenchmarkOptions& options = {});

/// CSV with columns n, elapsed_ms, collisions, collision_ratio.
void write_scaling_csv(const ScalingReport& report, std::ostream& out);

}  // namespace tweetscape
