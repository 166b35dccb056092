#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "grid.hpp"

namespace chfs {

// Field snapshot, bit-exact and explicitly little-endian:
//   magic "CHFS1" (5 bytes), u8 dim, u32-LE N per axis, f64-LE L,
//   then N^dim f64-LE values in row-major order, x fastest.

namespace detail {

inline void put_u32_le(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_f64_le(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint32_t get_u32_le(std::istream& in, const std::string& what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error("read_snapshot: truncated file (" + what + ")");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

inline double get_f64_le(std::istream& in, const std::string& what) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8))
    throw std::runtime_error("read_snapshot: truncated file (" + what + ")");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace detail

inline void write_snapshot(const GridFunction& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_snapshot: cannot open '" + path + "'");
  out.write("CHFS1", 5);
  unsigned char dim = static_cast<unsigned char>(u.grid.dim);
  out.write(reinterpret_cast<const char*>(&dim), 1);
  for (int a = 0; a < u.grid.dim; ++a)
    detail::put_u32_le(out, static_cast<std::uint32_t>(u.grid.n));
  detail::put_f64_le(out, u.grid.length);
  for (double v : u.values) detail::put_f64_le(out, v);
  if (!out) throw std::runtime_error("write_snapshot: write failed for '" + path + "'");
}

inline GridFunction read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open '" + path + "'");
  char magic[5];
  if (!in.read(magic, 5) || std::memcmp(magic, "CHFS1", 5) != 0)
    throw std::runtime_error("read_snapshot: bad magic in '" + path + "'");
  unsigned char dim_byte;
  if (!in.read(reinterpret_cast<char*>(&dim_byte), 1))
    throw std::runtime_error("read_snapshot: truncated file (dim)");
  int dim = dim_byte;
  if (dim < 1 || dim > 3)
    throw std::runtime_error("read_snapshot: dimension mismatch (dim byte " +
                             std::to_string(dim) + ")");
  std::uint32_t n0 = 0;
  for (int a = 0; a < dim; ++a) {
    std::uint32_t n = detail::get_u32_le(in, "axis count");
    if (a == 0)
      n0 = n;
    else if (n != n0)
      throw std::runtime_error("read_snapshot: dimension mismatch (axes differ)");
  }
  double length = detail::get_f64_le(in, "box length");
  GridFunction u = make_grid_function(make_grid(dim, static_cast<int>(n0), length));
  for (double& v : u.values) v = detail::get_f64_le(in, "payload");
  char extra;
  if (in.read(&extra, 1))
    throw std::runtime_error("read_snapshot: trailing bytes in '" + path + "'");
  return u;
}

}  // namespace chfs
