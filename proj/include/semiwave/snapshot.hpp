#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "semiwave/field.hpp"

namespace semiwave {

/// Bit-exact field snapshot: "WKBF", version u32, ndims u32, dims u32...,
/// eps f64, t f64, then the Fourier coefficients as little-endian f64 pairs.
struct Snapshot {
  std::vector<std::uint32_t> dims;  // {nx} or {nx, ny}
  double eps = 0.0;
  double t = 0.0;
  std::vector<cd> coeffs;
};

namespace detail {

inline constexpr std::uint32_t kSnapshotVersion = 1;

template <typename T>
void put_le(std::ofstream& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));  // host assumed little-endian (x86/arm64)
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::ifstream& in) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace detail

inline void write_snapshot(const Snapshot& snap, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
  out.write("WKBF", 4);
  detail::put_le(out, detail::kSnapshotVersion);
  detail::put_le(out, static_cast<std::uint32_t>(snap.dims.size()));
  std::size_t total = 1;
  for (auto d : snap.dims) {
    detail::put_le(out, d);
    total *= d;
  }
  if (total != snap.coeffs.size())
    throw std::invalid_argument("write_snapshot: dims do not match coefficient count");
  detail::put_le(out, snap.eps);
  detail::put_le(out, snap.t);
  for (const cd& c : snap.coeffs) {
    detail::put_le(out, c.real());
    detail::put_le(out, c.imag());
  }
  if (!out) throw std::runtime_error("write_snapshot: write failed for " + path);
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "WKBF", 4) != 0)
    throw std::runtime_error("read_snapshot: bad magic in " + path);
  const auto version = detail::get_le<std::uint32_t>(in);
  if (version != detail::kSnapshotVersion)
    throw std::runtime_error("read_snapshot: unsupported version " + std::to_string(version));
  const auto ndims = detail::get_le<std::uint32_t>(in);
  if (ndims < 1 || ndims > 2) throw std::runtime_error("read_snapshot: bad rank");
  Snapshot snap;
  std::size_t total = 1;
  for (std::uint32_t i = 0; i < ndims; ++i) {
    snap.dims.push_back(detail::get_le<std::uint32_t>(in));
    total *= snap.dims.back();
  }
  snap.eps = detail::get_le<double>(in);
  snap.t = detail::get_le<double>(in);
  snap.coeffs.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    const double re = detail::get_le<double>(in);
    const double im = detail::get_le<double>(in);
    snap.coeffs[i] = cd(re, im);
  }
  if (!in) throw std::runtime_error("read_snapshot: truncated file " + path);
  return snap;
}

inline Snapshot make_snapshot(const Field1D& f, double eps, double t) {
  Snapshot s;
  s.dims = {static_cast<std::uint32_t>(f.size())};
  s.eps = eps;
  s.t = t;
  s.coeffs = f.coeffs();
  return s;
}

inline Snapshot make_snapshot(const Field2D& f, double eps, double t) {
  Snapshot s;
  s.dims = {static_cast<std::uint32_t>(f.grid().num_points_x),
            static_cast<std::uint32_t>(f.grid().num_points_y)};
  s.eps = eps;
  s.t = t;
  s.coeffs = f.coeffs();
  return s;
}

}  // namespace semiwave
