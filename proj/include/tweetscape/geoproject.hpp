#pragma once

// Geodetic <-> local scene frame conversion.
//
// The scene frame is an equirectangular local tangent plane anchored at the
// southwest corner of a lat/lon rectangle: x grows east, y grows north, and
// one unit is one meter. At campus scale (~1 km) the distortion of this
// linearization is far below a millimeter.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "tweetscape/error.hpp"

namespace tweetscape {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

/// Scene position in meters: x east of the west edge, y north of the south
/// edge, z above the ground datum.
using ScenePoint = Vector3<double>;

template <typename Scalar>
inline constexpr Scalar kEarthRadiusM = Scalar(6371000);

template <typename Scalar>
inline constexpr Scalar kDegToRad = Scalar(3.14159265358979323846264338327950288) / Scalar(180);

/// Closed lat/lon rectangle in degrees.
template <typename Scalar>
struct GeoBoundsT {
  Scalar min_lat{};
  Scalar min_lon{};
  Scalar max_lat{};
  Scalar max_lon{};

  /// Builds bounds from two opposite corners given in any order.
  static GeoBoundsT from_corners(Scalar lat_a, Scalar lon_a, Scalar lat_b, Scalar lon_b) {
    GeoBoundsT b{std::min(lat_a, lat_b), std::min(lon_a, lon_b), std::max(lat_a, lat_b),
                 std::max(lon_a, lon_b)};
    b.validate();
    return b;
  }

  void validate() const {
    auto finite = [](Scalar v) { return std::isfinite(static_cast<double>(v)); };
    if (!finite(min_lat) || !finite(max_lat) || !finite(min_lon) || !finite(max_lon)) {
      throw DomainError("bad-bounds", "bounds must be finite");
    }
    if (!(min_lat < max_lat) || !(min_lon < max_lon)) {
      throw DomainError("bad-bounds", "bounds must satisfy min < max on both axes");
    }
    if (min_lat < Scalar(-90) || max_lat > Scalar(90) || min_lon < Scalar(-180) ||
        max_lon > Scalar(180)) {
      throw DomainError("bad-bounds", "bounds exceed global lat/lon ranges");
    }
  }

  bool contains(Scalar lat, Scalar lon) const {
    return lat >= min_lat && lat <= max_lat && lon >= min_lon && lon <= max_lon;
  }

  bool operator==(const GeoBoundsT&) const = default;
};

using GeoBounds = GeoBoundsT<double>;

/// The bounds of the Cambridge, MA campus region used as the reference scene.
inline GeoBounds cambridge_bounds() {
  return GeoBounds::from_corners(42.350, -71.090, 42.357, -71.099);
}

template <typename Scalar>
struct SceneDimensions {
  Scalar width_m;
  Scalar depth_m;
};

/// Metric extent of `bounds`: depth along the meridian, width along the
/// parallel at the mean latitude.
template <typename Scalar>
SceneDimensions<Scalar> scene_dimensions(const GeoBoundsT<Scalar>& bounds) {
  bounds.validate();
  const Scalar k = kDegToRad<Scalar> * kEarthRadiusM<Scalar>;
  const Scalar mean_lat = (bounds.min_lat + bounds.max_lat) / Scalar(2);
  const Scalar depth = (bounds.max_lat - bounds.min_lat) * k;
  const Scalar width = (bounds.max_lon - bounds.min_lon) * k * std::cos(mean_lat * kDegToRad<Scalar>);
  return {width, depth};
}

template <typename Scalar>
struct SceneFrameT {
  GeoBoundsT<Scalar> bounds;
  Scalar width_m{};
  Scalar depth_m{};

  static SceneFrameT from_bounds(const GeoBoundsT<Scalar>& bounds) {
    const auto dims = scene_dimensions(bounds);
    return {bounds, dims.width_m, dims.depth_m};
  }

  Eigen::Matrix<Scalar, 2, 1> center() const {
    return {width_m / Scalar(2), depth_m / Scalar(2)};
  }

  bool operator==(const SceneFrameT&) const = default;
};

using SceneFrame = SceneFrameT<double>;

namespace detail {

template <typename Scalar>
[[noreturn]] void out_of_bounds(const char* axis, Scalar value, const char* bound_name,
                                Scalar bound) {
  std::ostringstream os;
  os.precision(17);
  os << axis << ' ' << value << " outside " << bound_name << ' ' << bound;
  throw DomainError("out-of-bounds", os.str());
}

}  // namespace detail

/// Maps (lat, lon) into the scene plane with z = 0. Boundary points are in
/// bounds. Throws DomainError naming the violated coordinate and bound.
template <typename Scalar>
Vector3<Scalar> project(Scalar lat, Scalar lon, const SceneFrameT<Scalar>& frame) {
  const auto& b = frame.bounds;
  if (!(lat >= b.min_lat)) detail::out_of_bounds("latitude", lat, "min_lat", b.min_lat);
  if (!(lat <= b.max_lat)) detail::out_of_bounds("latitude", lat, "max_lat", b.max_lat);
  if (!(lon >= b.min_lon)) detail::out_of_bounds("longitude", lon, "min_lon", b.min_lon);
  if (!(lon <= b.max_lon)) detail::out_of_bounds("longitude", lon, "max_lon", b.max_lon);
  const Scalar x = frame.width_m * ((lon - b.min_lon) / (b.max_lon - b.min_lon));
  const Scalar y = frame.depth_m * ((lat - b.min_lat) / (b.max_lat - b.min_lat));
  return {x, y, Scalar(0)};
}

template <typename Scalar>
struct LatLon {
  Scalar lat;
  Scalar lon;
};

/// Inverse of project() for scene-plane coordinates inside the frame.
template <typename Scalar>
LatLon<Scalar> unproject(Scalar x, Scalar y, const SceneFrameT<Scalar>& frame) {
  if (!(x >= Scalar(0))) detail::out_of_bounds("x", x, "min_x", Scalar(0));
  if (!(x <= frame.width_m)) detail::out_of_bounds("x", x, "width_m", frame.width_m);
  if (!(y >= Scalar(0))) detail::out_of_bounds("y", y, "min_y", Scalar(0));
  if (!(y <= frame.depth_m)) detail::out_of_bounds("y", y, "depth_m", frame.depth_m);
  const auto& b = frame.bounds;
  // Pin the far edges so the corners round-trip exactly.
  const Scalar lon = x == frame.width_m ? b.max_lon
                                        : b.min_lon + (b.max_lon - b.min_lon) * (x / frame.width_m);
  const Scalar lat = y == frame.depth_m ? b.max_lat
                                        : b.min_lat + (b.max_lat - b.min_lat) * (y / frame.depth_m);
  return {lat, lon};
}

}  // namespace tweetscape
