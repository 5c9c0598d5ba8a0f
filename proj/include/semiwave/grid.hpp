#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace semiwave {

inline constexpr double kPeriod = 6.283185307179586476925286766559;  // 2*pi

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Periodic grid on [0, 2pi) tied to the semiclassical parameter eps = 1/carrier_n.
/// num_points is a power of two resolving at least the third harmonic of the
/// carrier with 8 points per wavelength.
struct TorusGrid1D {
  int carrier_n = 0;        // N, eps = 1/N
  int oversample = 0;       // requested points per carrier wavelength
  std::size_t num_points = 0;

  double eps() const { return 1.0 / carrier_n; }
  double spacing() const { return kPeriod / static_cast<double>(num_points); }
  double point(std::size_t i) const { return static_cast<double>(i) * spacing(); }

  bool operator==(const TorusGrid1D&) const = default;
};

/// Anisotropic 2D grid: x oscillates at k1/eps, y at k2/eps^2 (carrier_ny_sq = carrier_nx^2).
struct TorusGrid2D {
  int carrier_nx = 0;
  int carrier_ny_sq = 0;    // carrier_nx^2
  int oversample = 0;
  int k1 = 1;
  int k2 = 1;
  std::size_t num_points_x = 0;
  std::size_t num_points_y = 0;

  double eps() const { return 1.0 / carrier_nx; }
  double spacing_x() const { return kPeriod / static_cast<double>(num_points_x); }
  double spacing_y() const { return kPeriod / static_cast<double>(num_points_y); }
  double point_x(std::size_t i) const { return static_cast<double>(i) * spacing_x(); }
  double point_y(std::size_t j) const { return static_cast<double>(j) * spacing_y(); }
  std::size_t total_points() const { return num_points_x * num_points_y; }

  bool operator==(const TorusGrid2D&) const = default;
};

/// Resolution rule: next power of two >= max(oversample*N, 8*3*|k1|*N).
inline TorusGrid1D make_grid(int carrier, int oversample, int k1 = 1) {
  if (carrier < 2) throw std::invalid_argument("make_grid: carrier must be >= 2");
  if (oversample < 8) throw std::invalid_argument("make_grid: oversample must be >= 8");
  if (k1 == 0) throw std::invalid_argument("make_grid: k1 must be nonzero");
  const std::size_t n = static_cast<std::size_t>(carrier);
  const std::size_t k = static_cast<std::size_t>(k1 < 0 ? -k1 : k1);
  TorusGrid1D g;
  g.carrier_n = carrier;
  g.oversample = oversample;
  g.num_points = next_pow2(std::max(static_cast<std::size_t>(oversample) * n, 24 * k * n));
  return g;
}

inline TorusGrid2D make_grid2d(int carrier_nx, int oversample, int k1, int k2,
                               std::size_t max_total_points = std::size_t{1} << 26) {
  if (carrier_nx < 2) throw std::invalid_argument("make_grid2d: carrier must be >= 2");
  if (oversample < 8) throw std::invalid_argument("make_grid2d: oversample must be >= 8");
  if (k1 == 0) throw std::invalid_argument("make_grid2d: k1 must be nonzero");
  const std::size_t nx = static_cast<std::size_t>(carrier_nx);
  const std::size_t ny = nx * nx;
  const std::size_t ak1 = static_cast<std::size_t>(k1 < 0 ? -k1 : k1);
  const std::size_t ak2 = static_cast<std::size_t>(k2 < 0 ? -k2 : k2);
  TorusGrid2D g;
  g.carrier_nx = carrier_nx;
  g.carrier_ny_sq = carrier_nx * carrier_nx;
  g.oversample = oversample;
  g.k1 = k1;
  g.k2 = k2;
  g.num_points_x = next_pow2(std::max(static_cast<std::size_t>(oversample) * nx, 24 * ak1 * nx));
  g.num_points_y = next_pow2(std::max(static_cast<std::size_t>(oversample) * ny,
                                      std::max<std::size_t>(24 * ak2 * ny, 24 * ny)));
  if (g.total_points() > max_total_points) {
    throw std::invalid_argument("make_grid2d: requested grid exceeds memory cap (" +
                                std::to_string(g.total_points()) + " points)");
  }
  return g;
}

}  // namespace semiwave
