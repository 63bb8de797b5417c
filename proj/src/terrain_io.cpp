#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tweetscape/terrain.hpp"

namespace tweetscape {

namespace {

std::string_view next_token(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) ++pos;
  const std::size_t start = pos;
  while (pos < text.size() && text[pos] != ' ' && text[pos] != '\t' && text[pos] != '\r' &&
         text[pos] != '\n') {
    ++pos;
  }
  return text.substr(start, pos - start);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  // Trailing blank lines are tolerated.
  while (!lines.empty() && lines.back().find_first_not_of(" \t\r") == std::string_view::npos) {
    lines.pop_back();
  }
  return lines;
}

template <typename T>
T header_value(std::string_view line, std::string_view key) {
  std::size_t pos = 0;
  const auto name = next_token(line, pos);
  const auto value = next_token(line, pos);
  if (name != key || value.empty() || !next_token(line, pos).empty()) {
    throw FormatError("heightmap: expected '" + std::string(key) + " <value>' header line");
  }
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw FormatError("heightmap: bad value for '" + std::string(key) + "'");
  }
  return out;
}

void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char bytes[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(bytes), 4);
}

void put_f32(std::ostream& os, float f) { put_u32(os, std::bit_cast<std::uint32_t>(f)); }

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

float get_f32(const unsigned char* p) { return std::bit_cast<float>(get_u32(p)); }

}  // namespace

Heightmap parse_heightmap(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.size() < 3) throw FormatError("heightmap: missing header");
  const auto ncols = header_value<long>(lines[0], "ncols");
  const auto nrows = header_value<long>(lines[1], "nrows");
  const auto cellsize = header_value<double>(lines[2], "cellsize");
  if (ncols <= 0 || nrows <= 0) throw FormatError("heightmap: ncols and nrows must be positive");
  if (!(cellsize > 0.0) || !std::isfinite(cellsize)) throw FormatError("heightmap: cellsize must be positive");
  if (lines.size() - 3 != static_cast<std::size_t>(nrows)) {
    throw FormatError("heightmap: expected " + std::to_string(nrows) + " rows, found " +
                      std::to_string(lines.size() - 3));
  }

  Heightmap hm;
  hm.resolution_m = cellsize;
  hm.heights.resize(nrows, ncols);
  for (long file_row = 0; file_row < nrows; ++file_row) {
    const auto line = lines[3 + static_cast<std::size_t>(file_row)];
    const long r = nrows - 1 - file_row;  // north row first in the file
    std::size_t pos = 0;
    long c = 0;
    for (auto tok = next_token(line, pos); !tok.empty(); tok = next_token(line, pos), ++c) {
      if (c >= ncols) {
        throw FormatError("heightmap: row " + std::to_string(file_row + 1) + " has more than " +
                          std::to_string(ncols) + " values");
      }
      double v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw FormatError("heightmap: bad value '" + std::string(tok) + "' in row " + std::to_string(file_row + 1));
      }
      hm.heights(r, c) = v;
    }
    if (c != ncols) {
      throw FormatError("heightmap: row " + std::to_string(file_row + 1) + " has " + std::to_string(c) +
                        " values, expected " + std::to_string(ncols));
    }
  }
  return hm;
}

Heightmap load_heightmap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("terrain: unreadable file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_heightmap(buf.str());
}

void save_heightmap(const Heightmap& hm, const std::filesystem::path& path) {
  hm.validate();
  std::ofstream out(path);
  if (!out) throw IoError("terrain: cannot write " + path.string());
  out << "ncols " << hm.cols() << "\nnrows " << hm.rows() << "\ncellsize " << hm.resolution_m << '\n';
  out.precision(17);
  for (Eigen::Index r = hm.rows() - 1; r >= 0; --r) {
    for (Eigen::Index c = 0; c < hm.cols(); ++c) {
      if (c) out << ' ';
      out << hm.heights(r, c);
    }
    out << '\n';
  }
  if (!out) throw IoError("terrain: cannot write " + path.string());
}

std::size_t write_stl(std::span<const StlTriangle> triangles, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("terrain: cannot write " + path.string());

  char header[kStlHeaderBytes] = {};
  static constexpr char kTag[] = "binary STL terrain";
  std::memcpy(header, kTag, sizeof kTag - 1);
  out.write(header, sizeof header);
  put_u32(out, static_cast<std::uint32_t>(triangles.size()));
  for (const auto& tri : triangles) {
    for (int i = 0; i < 3; ++i) put_f32(out, tri.normal[i]);
    for (const auto& v : tri.corners) {
      for (int i = 0; i < 3; ++i) put_f32(out, v[i]);
    }
    const char attribute[2] = {0, 0};
    out.write(attribute, 2);
  }
  out.flush();
  if (!out) throw IoError("terrain: cannot write " + path.string());
  return kStlHeaderBytes + 4 + kStlTriangleBytes * triangles.size();
}

std::vector<StlTriangle> read_stl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("terrain: unreadable file: " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() < kStlHeaderBytes + 4) throw FormatError("stl: truncated header");
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t count = get_u32(data + kStlHeaderBytes);
  if (bytes.size() != kStlHeaderBytes + 4 + std::size_t(count) * kStlTriangleBytes) {
    throw FormatError("stl: size does not match triangle count");
  }
  std::vector<StlTriangle> out(count);
  const unsigned char* p = data + kStlHeaderBytes + 4;
  for (auto& tri : out) {
    for (int i = 0; i < 3; ++i) tri.normal[i] = get_f32(p + 4 * i);
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < 3; ++i) tri.corners[k][i] = get_f32(p + 12 + 12 * k + 4 * i);
    }
    p += kStlTriangleBytes;
  }
  return out;
}

}  // namespace tweetscape
