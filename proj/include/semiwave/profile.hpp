#pragma once

#include <cmath>
#include <stdexcept>

#include "semiwave/grid.hpp"

namespace semiwave {

/// Smooth bump, compactly supported within one period:
///   amplitude * exp(1 - 1/(1 - r^2)),  r = (x - center)/half_width,  |r| < 1,
/// and exactly zero outside. First and second derivatives are closed-form.
struct Bump {
  double center = 0.0;
  double half_width = 0.5;
  double amplitude = 1.0;

  Bump() = default;
  Bump(double c, double w, double a) : center(c), half_width(w), amplitude(a) {
    if (!(w > 0.0 && w < kPeriod / 4.0))
      throw std::invalid_argument("Bump: half_width must be in (0, pi/2)");
    if (!(a > 0.0)) throw std::invalid_argument("Bump: amplitude must be positive");
  }

  // Offset from center, wrapped to [-pi, pi).
  double wrap(double x) const {
    double d = std::fmod(x - center, kPeriod);
    if (d < -kPeriod / 2.0) d += kPeriod;
    if (d >= kPeriod / 2.0) d -= kPeriod;
    return d;
  }

  double value(double x) const {
    const double r = wrap(x) / half_width;
    const double q = 1.0 - r * r;
    if (q <= 0.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / q);
  }

  double d1(double x) const {
    const double r = wrap(x) / half_width;
    const double q = 1.0 - r * r;
    if (q <= 0.0) return 0.0;
    const double g1 = -2.0 * r / (q * q);
    return amplitude * std::exp(1.0 - 1.0 / q) * g1 / half_width;
  }

  double d2(double x) const {
    const double r = wrap(x) / half_width;
    const double q = 1.0 - r * r;
    if (q <= 0.0) return 0.0;
    const double g1 = -2.0 * r / (q * q);
    const double g2 = -2.0 / (q * q) - 8.0 * r * r / (q * q * q);
    return amplitude * std::exp(1.0 - 1.0 / q) * (g1 * g1 + g2) / (half_width * half_width);
  }

  Bump scaled(double factor) const { return Bump(center, half_width, amplitude * factor); }
};

}  // namespace semiwave
