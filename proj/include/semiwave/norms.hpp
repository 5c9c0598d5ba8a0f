#pragma once

#include <cmath>
#include <stdexcept>

#include "semiwave/field.hpp"

namespace semiwave {

/// Selector for the Sobolev, anisotropic Sobolev, and semiclassical norms.
struct NormSpec {
  enum class Kind { sobolev, aniso, semiclassical };
  Kind kind = Kind::sobolev;
  double s1 = 0.0;
  double s2 = 0.0;
  int k = 2;
  double eps = 1.0;
  bool anisotropic = false;

  static NormSpec sobolev(double s) { return {Kind::sobolev, s}; }
  static NormSpec aniso(double s1, double s2) { return {Kind::aniso, s1, s2}; }
  static NormSpec semiclassical(int k, double eps, bool anisotropic = false) {
    if (!(eps > 0.0 && eps <= 1.0))
      throw std::invalid_argument("NormSpec: semiclassical eps must be in (0,1]");
    if (k < 1) throw std::invalid_argument("NormSpec: semiclassical k must be positive");
    NormSpec n;
    n.kind = Kind::semiclassical;
    n.k = k;
    n.eps = eps;
    n.anisotropic = anisotropic;
    return n;
  }
};

inline double l2_norm(const Field1D& f) {
  double s = 0.0;
  for (const cd& c : f.coeffs()) s += std::norm(c);
  return std::sqrt(kPeriod * s);
}

inline double l2_norm(const Field2D& f) {
  double s = 0.0;
  for (const cd& c : f.coeffs()) s += std::norm(c);
  return std::sqrt(kPeriod * kPeriod * s);
}

inline cd mean(const Field1D& f) { return f.mode(0); }

/// L^infty on a 2x zero-padded physical grid.
inline double linf_norm(const Field1D& f) {
  double m = 0.0;
  for (const cd& v : f.samples_padded(2)) m = std::max(m, std::abs(v));
  return m;
}

inline double linf_norm(const Field2D& f) {
  // 2D padding is skipped: the grids in use oversample the carrier by >= 8x.
  double m = 0.0;
  for (const cd& v : f.samples()) m = std::max(m, std::abs(v));
  return m;
}

inline double norm(const Field1D& f, const NormSpec& spec) {
  double s = 0.0;
  switch (spec.kind) {
    case NormSpec::Kind::sobolev:
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double k = f.wavenumber(i);
        s += std::pow(1.0 + k * k, spec.s1) * std::norm(f.coeffs()[i]);
      }
      return std::sqrt(kPeriod * s);
    case NormSpec::Kind::semiclassical: {
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double k = std::abs(static_cast<double>(f.wavenumber(i)));
        const double w = std::pow(spec.eps * k, spec.k);  // |(eps d_x)^k| symbol
        s += (1.0 + w * w) * std::norm(f.coeffs()[i]);
      }
      return std::sqrt(kPeriod * s);
    }
    case NormSpec::Kind::aniso:
      throw std::invalid_argument("norm: anisotropic spec on a 1D field");
  }
  return 0.0;
}

inline double norm(const Field2D& f, const NormSpec& spec) {
  double s = 0.0;
  switch (spec.kind) {
    case NormSpec::Kind::aniso:
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double kx = f.kx(i), ky = f.ky(i);
        s += std::pow(1.0 + kx * kx, spec.s1) * std::pow(1.0 + ky * ky, spec.s2) *
             std::norm(f.coeffs()[i]);
      }
      return std::sqrt(kPeriod * kPeriod * s);
    case NormSpec::Kind::semiclassical:
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double kx = std::abs(static_cast<double>(f.kx(i)));
        const double ky = std::abs(static_cast<double>(f.ky(i)));
        const double wx = std::pow(spec.eps * kx, spec.k);
        double w2 = wx * wx;
        if (spec.anisotropic) {
          const double wy = std::pow(spec.eps * spec.eps * ky, spec.k);
          w2 += wy * wy;
        }
        s += (1.0 + w2) * std::norm(f.coeffs()[i]);
      }
      return std::sqrt(kPeriod * kPeriod * s);
    case NormSpec::Kind::sobolev:
      throw std::invalid_argument("norm: 2D fields use aniso or semiclassical specs");
  }
  return 0.0;
}

}  // namespace semiwave
