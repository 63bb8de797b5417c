#pragma once

// Heightmap terrain: gridded elevations, Laplacian smoothing, regular-grid
// triangulation, vertex-budget chunking, and binary STL I/O.
//
// Grid convention: heights(row, col) with row 0 on the south edge, so cell
// (col, row) sits at scene position (col * resolution_m, row * resolution_m).
// The ASCII file stores the north row first; the loader flips it.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tweetscape/error.hpp"
#include "tweetscape/geoproject.hpp"

namespace tweetscape {

template <typename Scalar>
using HeightGrid = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
struct HeightmapT {
  HeightGrid<Scalar> heights;
  Scalar resolution_m = Scalar(1);

  Eigen::Index cols() const { return heights.cols(); }
  Eigen::Index rows() const { return heights.rows(); }

  void validate() const {
    if (cols() <= 0 || rows() <= 0) throw DomainError("bad-heightmap", "heightmap must be non-empty");
    if (!(resolution_m > Scalar(0)) || !std::isfinite(static_cast<double>(resolution_m))) {
      throw DomainError("bad-heightmap", "cell size must be positive and finite");
    }
    if (!heights.allFinite()) throw DomainError("bad-heightmap", "heights must be finite");
  }
};

using Heightmap = HeightmapT<double>;

using TriangleIndices = Eigen::Matrix<std::uint32_t, Eigen::Dynamic, 3, Eigen::RowMajor>;

template <typename Scalar>
using VertexMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor>;

template <typename Scalar>
struct MeshT {
  VertexMatrix<Scalar> vertices;
  TriangleIndices triangles;

  Eigen::Index vertex_count() const { return vertices.rows(); }
  Eigen::Index triangle_count() const { return triangles.rows(); }

  /// Throws DomainError on out-of-range or repeated indices within a triangle.
  void validate() const {
    const auto n = static_cast<std::uint32_t>(vertices.rows());
    for (Eigen::Index t = 0; t < triangles.rows(); ++t) {
      const auto a = triangles(t, 0), b = triangles(t, 1), c = triangles(t, 2);
      if (a >= n || b >= n || c >= n) throw DomainError("bad-mesh", "triangle index out of range");
      if (a == b || b == c || a == c) throw DomainError("bad-mesh", "degenerate triangle");
    }
  }

  Vector3<Scalar> corner(Eigen::Index t, int k) const {
    return vertices.row(triangles(t, k)).transpose();
  }
};

using Mesh = MeshT<double>;

template <typename Scalar>
struct MeshChunkT {
  int chunk_id = 0;
  MeshT<Scalar> mesh;
};

using MeshChunk = MeshChunkT<double>;

inline constexpr std::size_t kDefaultChunkVertices = 65000;

struct SmoothingParams {
  int iterations = 3;
  double lambda = 0.5;
};

/// Reads the ASCII grid format (ncols / nrows / cellsize header, then nrows
/// lines of ncols floats, north row first). Throws FormatError or IoError.
Heightmap load_heightmap(const std::filesystem::path& path);
Heightmap parse_heightmap(std::string_view text);

/// Writes the ASCII grid format; inverse of load_heightmap.
void save_heightmap(const Heightmap& hm, const std::filesystem::path& path);

/// Jacobi-style Laplacian smoothing. Each iteration moves every interior cell
/// toward the mean of its four neighbours by `lambda`, reading only values
/// from the previous iteration. Border cells are left unchanged.
template <typename Scalar>
HeightmapT<Scalar> smooth(const HeightmapT<Scalar>& hm, int iterations, Scalar lambda) {
  if (iterations < 1) throw DomainError("bad-smoothing", "iterations must be positive");
  if (!(lambda > Scalar(0) && lambda <= Scalar(1))) {
    throw DomainError("bad-smoothing", "lambda must lie in (0, 1]");
  }
  hm.validate();
  HeightmapT<Scalar> out = hm;
  const Eigen::Index r = hm.rows(), c = hm.cols();
  if (r < 3 || c < 3) return out;

  HeightGrid<Scalar> next = out.heights;
  for (int it = 0; it < iterations; ++it) {
    const auto& h = out.heights;
    const auto inner = h.block(1, 1, r - 2, c - 2);
    const auto mean4 = (h.block(0, 1, r - 2, c - 2) + h.block(2, 1, r - 2, c - 2) +
                        h.block(1, 0, r - 2, c - 2) + h.block(1, 2, r - 2, c - 2)) /
                       Scalar(4);
    next.block(1, 1, r - 2, c - 2) = inner + lambda * (mean4 - inner);
    out.heights.swap(next);
  }
  return out;
}

/// One vertex per cell, two counter-clockwise (viewed from +z) triangles per
/// grid square: (c,r)-(c+1,r)-(c+1,r+1) and (c,r)-(c+1,r+1)-(c,r+1).
template <typename Scalar>
MeshT<Scalar> triangulate(const HeightmapT<Scalar>& hm, const Vector3<Scalar>& origin = Vector3<Scalar>::Zero()) {
  hm.validate();
  const Eigen::Index rows = hm.rows(), cols = hm.cols();
  if (rows < 2 || cols < 2) throw DomainError("grid-too-small", "triangulation needs at least a 2x2 grid");

  MeshT<Scalar> mesh;
  mesh.vertices.resize(rows * cols, 3);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      mesh.vertices.row(r * cols + c) << origin.x() + Scalar(c) * hm.resolution_m,
          origin.y() + Scalar(r) * hm.resolution_m, origin.z() + hm.heights(r, c);
    }
  }

  mesh.triangles.resize(2 * (rows - 1) * (cols - 1), 3);
  Eigen::Index t = 0;
  for (Eigen::Index r = 0; r + 1 < rows; ++r) {
    for (Eigen::Index c = 0; c + 1 < cols; ++c) {
      const auto v00 = static_cast<std::uint32_t>(r * cols + c);
      const auto v10 = v00 + 1;
      const auto v01 = static_cast<std::uint32_t>((r + 1) * cols + c);
      const auto v11 = v01 + 1;
      mesh.triangles.row(t++) << v00, v10, v11;
      mesh.triangles.row(t++) << v00, v11, v01;
    }
  }
  return mesh;
}

/// Greedy partition of the triangle list, in order, into chunks whose
/// chunk-local vertex count never exceeds `max_vertices`. Vertices shared
/// across a chunk boundary are duplicated into each chunk.
template <typename Scalar>
std::vector<MeshChunkT<Scalar>> chunk_mesh(const MeshT<Scalar>& mesh,
                                           std::size_t max_vertices = kDefaultChunkVertices) {
  if (max_vertices < 3) throw DomainError("bad-vertex-budget", "max_vertices must be at least 3");
  mesh.validate();

  std::vector<MeshChunkT<Scalar>> chunks;
  std::vector<std::int64_t> local(static_cast<std::size_t>(mesh.vertex_count()), -1);
  std::vector<std::uint32_t> chunk_globals;  // local index -> global index
  std::vector<std::array<std::uint32_t, 3>> chunk_tris;

  auto flush = [&] {
    if (chunk_tris.empty()) return;
    MeshChunkT<Scalar> chunk;
    chunk.chunk_id = static_cast<int>(chunks.size());
    chunk.mesh.vertices.resize(static_cast<Eigen::Index>(chunk_globals.size()), 3);
    for (std::size_t i = 0; i < chunk_globals.size(); ++i) {
      chunk.mesh.vertices.row(static_cast<Eigen::Index>(i)) = mesh.vertices.row(chunk_globals[i]);
      local[chunk_globals[i]] = -1;
    }
    chunk.mesh.triangles.resize(static_cast<Eigen::Index>(chunk_tris.size()), 3);
    for (std::size_t i = 0; i < chunk_tris.size(); ++i) {
      const auto& tri = chunk_tris[i];
      chunk.mesh.triangles.row(static_cast<Eigen::Index>(i)) << tri[0], tri[1], tri[2];
    }
    chunks.push_back(std::move(chunk));
    chunk_globals.clear();
    chunk_tris.clear();
  };

  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
    std::size_t fresh = 0;
    for (int k = 0; k < 3; ++k) fresh += local[mesh.triangles(t, k)] < 0;
    if (chunk_globals.size() + fresh > max_vertices) flush();

    std::array<std::uint32_t, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      const auto g = mesh.triangles(t, k);
      if (local[g] < 0) {
        local[g] = static_cast<std::int64_t>(chunk_globals.size());
        chunk_globals.push_back(g);
      }
      tri[k] = static_cast<std::uint32_t>(local[g]);
    }
    chunk_tris.push_back(tri);
  }
  flush();
  return chunks;
}

/// Bilinear height at scene-plane (x, y), where cell (c, r) sits at
/// (c * resolution_m, r * resolution_m). Returns nullopt outside the grid.
template <typename Scalar>
std::optional<Scalar> sample_bilinear(const HeightmapT<Scalar>& hm, Scalar x, Scalar y) {
  const Scalar u = x / hm.resolution_m;
  const Scalar v = y / hm.resolution_m;
  const Scalar max_u = Scalar(hm.cols() - 1), max_v = Scalar(hm.rows() - 1);
  if (!(u >= Scalar(0) && v >= Scalar(0) && u <= max_u && v <= max_v)) return std::nullopt;
  if (hm.cols() == 1 || hm.rows() == 1) {
    const auto c = static_cast<Eigen::Index>(std::round(u));
    const auto r = static_cast<Eigen::Index>(std::round(v));
    return hm.heights(r, c);
  }
  const auto c0 = std::min(static_cast<Eigen::Index>(std::floor(u)), hm.cols() - 2);
  const auto r0 = std::min(static_cast<Eigen::Index>(std::floor(v)), hm.rows() - 2);
  const Scalar fu = u - Scalar(c0), fv = v - Scalar(r0);
  const auto& h = hm.heights;
  const Scalar south = h(r0, c0) * (Scalar(1) - fu) + h(r0, c0 + 1) * fu;
  const Scalar north = h(r0 + 1, c0) * (Scalar(1) - fu) + h(r0 + 1, c0 + 1) * fu;
  return south * (Scalar(1) - fv) + north * fv;
}

// --- binary STL ---------------------------------------------------------

struct StlTriangle {
  Eigen::Vector3f normal;
  std::array<Eigen::Vector3f, 3> corners;
};

inline constexpr std::size_t kStlHeaderBytes = 80;
inline constexpr std::size_t kStlTriangleBytes = 50;

/// Writes a triangle soup as binary STL and returns the number of bytes written.
std::size_t write_stl(std::span<const StlTriangle> triangles, const std::filesystem::path& path);

/// Reads a binary STL file back into a triangle soup.
std::vector<StlTriangle> read_stl(const std::filesystem::path& path);

/// Flattens meshes to float triangles; normals follow the winding.
template <typename Scalar>
void append_stl_triangles(const MeshT<Scalar>& mesh, std::vector<StlTriangle>& out) {
  out.reserve(out.size() + static_cast<std::size_t>(mesh.triangle_count()));
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
    StlTriangle tri;
    for (int k = 0; k < 3; ++k) tri.corners[k] = mesh.corner(t, k).template cast<float>();
    const Eigen::Vector3f n = (tri.corners[1] - tri.corners[0]).cross(tri.corners[2] - tri.corners[0]);
    const float len = n.norm();
    tri.normal = len > 0.0f ? Eigen::Vector3f(n / len) : Eigen::Vector3f::Zero();
    out.push_back(tri);
  }
}

template <typename Scalar>
std::size_t export_stl(const MeshT<Scalar>& mesh, const std::filesystem::path& path) {
  mesh.validate();
  std::vector<StlTriangle> soup;
  append_stl_triangles(mesh, soup);
  return write_stl(soup, path);
}

template <typename Scalar>
std::size_t export_stl(std::span<const MeshChunkT<Scalar>> chunks, const std::filesystem::path& path) {
  std::vector<StlTriangle> soup;
  for (const auto& chunk : chunks) {
    chunk.mesh.validate();
    append_stl_triangles(chunk.mesh, soup);
  }
  return write_stl(soup, path);
}

}  // namespace tweetscape
