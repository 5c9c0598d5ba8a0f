#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "semiwave/fft.hpp"
#include "semiwave/grid.hpp"

namespace semiwave {

using cd = std::complex<double>;

/// Field on a 1D torus, stored as Fourier coefficients in FFT layout
/// (index i holds wavenumber i for i < n/2, i - n otherwise). Convention:
/// c_k = (1/2pi) \int f(x) e^{-ikx} dx, so f(x) = sum_k c_k e^{ikx}.
class Field1D {
 public:
  Field1D() = default;
  explicit Field1D(const TorusGrid1D& grid) : grid_(grid), coeffs_(grid.num_points, cd{}) {}

  static Field1D from_coeffs(const TorusGrid1D& grid, std::vector<cd> coeffs) {
    if (coeffs.size() != grid.num_points) throw std::invalid_argument("coeff size mismatch");
    Field1D f(grid);
    f.coeffs_ = std::move(coeffs);
    return f;
  }

  static Field1D from_samples(const TorusGrid1D& grid, std::vector<cd> samples) {
    Field1D f = from_coeffs(grid, std::move(samples));
    detail::fft_forward_1d(f.coeffs_);
    const double inv = 1.0 / static_cast<double>(grid.num_points);
    for (auto& c : f.coeffs_) c *= inv;
    return f;
  }

  static Field1D from_real_samples(const TorusGrid1D& grid, const std::vector<double>& samples) {
    std::vector<cd> buf(samples.begin(), samples.end());
    return from_samples(grid, std::move(buf));
  }

  template <class F>
  static Field1D from_function(const TorusGrid1D& grid, F&& fn) {
    std::vector<cd> buf(grid.num_points);
    for (std::size_t i = 0; i < grid.num_points; ++i) buf[i] = cd(fn(grid.point(i)));
    return from_samples(grid, std::move(buf));
  }

  const TorusGrid1D& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<cd>& coeffs() const { return coeffs_; }
  std::vector<cd>& coeffs() { return coeffs_; }

  int wavenumber(std::size_t i) const {
    const auto n = static_cast<long>(size());
    const auto k = static_cast<long>(i);
    return static_cast<int>(k < n / 2 ? k : k - n);
  }

  /// Coefficient of mode k (k may be negative).
  cd mode(int k) const {
    const auto n = static_cast<long>(size());
    long i = k >= 0 ? k : k + n;
    if (i < 0 || i >= n) return cd{};
    return coeffs_[static_cast<std::size_t>(i)];
  }
  void set_mode(int k, cd v) {
    const auto n = static_cast<long>(size());
    long i = k >= 0 ? k : k + n;
    if (i < 0 || i >= n) throw std::out_of_range("set_mode: wavenumber outside grid");
    coeffs_[static_cast<std::size_t>(i)] = v;
  }

  std::vector<cd> samples() const {
    std::vector<cd> buf = coeffs_;
    detail::fft_backward_1d(buf);
    return buf;
  }

  /// Physical samples on a grid refined by `factor` (spectral zero-padding).
  std::vector<cd> samples_padded(int factor) const {
    const std::size_t n = size(), m = n * static_cast<std::size_t>(factor);
    std::vector<cd> buf(m, cd{});
    for (std::size_t i = 0; i < n; ++i) {
      const long k = wavenumber(i);
      buf[static_cast<std::size_t>(k >= 0 ? k : k + static_cast<long>(m))] = coeffs_[i];
    }
    detail::fft_backward_1d(buf);
    return buf;
  }

  Field1D derivative(int order) const {
    Field1D out(grid_);
    for (std::size_t i = 0; i < size(); ++i) {
      const cd ik(0.0, static_cast<double>(wavenumber(i)));
      cd w{1.0, 0.0};
      for (int p = 0; p < order; ++p) w *= ik;
      out.coeffs_[i] = coeffs_[i] * w;
    }
    return out;
  }

  /// Inverse of d/dx with mean-zero gauge; requires negligible mean.
  Field1D antiderivative(double mean_tol = 1e-10) const {
    const double scale = linf_coeff();
    if (scale > 0 && std::abs(coeffs_[0]) > mean_tol * scale)
      throw std::invalid_argument("antiderivative: field has non-negligible mean");
    Field1D out(grid_);
    for (std::size_t i = 1; i < size(); ++i) {
      const int k = wavenumber(i);
      if (k != 0) out.coeffs_[i] = coeffs_[i] / cd(0.0, static_cast<double>(k));
    }
    return out;
  }

  /// Two-thirds rule: zero modes with |k| > (2/3) k_max.
  Field1D dealiased() const {
    Field1D out = *this;
    const double cut = (2.0 / 3.0) * (static_cast<double>(size()) / 2.0);
    for (std::size_t i = 0; i < size(); ++i)
      if (std::abs(wavenumber(i)) > cut) out.coeffs_[i] = cd{};
    return out;
  }

  /// Pointwise product computed in physical space (no dealiasing applied).
  Field1D product(const Field1D& other) const {
    check_same_grid(other);
    std::vector<cd> a = samples(), b = other.samples();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return from_samples(grid_, std::move(a));
  }

  Field1D& operator+=(const Field1D& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Field1D& operator-=(const Field1D& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Field1D& operator*=(cd s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend Field1D operator+(Field1D a, const Field1D& b) { return a += b; }
  friend Field1D operator-(Field1D a, const Field1D& b) { return a -= b; }
  friend Field1D operator*(cd s, Field1D a) { return a *= s; }

  double max_imag_sample() const {
    double m = 0.0;
    for (const cd& v : samples()) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  bool has_nan() const {
    for (const cd& c : coeffs_)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return true;
    return false;
  }

  double linf_coeff() const {
    double m = 0.0;
    for (const cd& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  void check_same_grid(const Field1D& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("field grid mismatch");
  }

  TorusGrid1D grid_;
  std::vector<cd> coeffs_;
};

/// Field on an anisotropic 2D torus; coefficients row-major, index j*nx + i
/// with i the x index.
class Field2D {
 public:
  Field2D() = default;
  explicit Field2D(const TorusGrid2D& grid) : grid_(grid), coeffs_(grid.total_points(), cd{}) {}

  static Field2D from_coeffs(const TorusGrid2D& grid, std::vector<cd> coeffs) {
    if (coeffs.size() != grid.total_points()) throw std::invalid_argument("coeff size mismatch");
    Field2D f(grid);
    f.coeffs_ = std::move(coeffs);
    return f;
  }

  static Field2D from_samples(const TorusGrid2D& grid, std::vector<cd> samples) {
    Field2D f = from_coeffs(grid, std::move(samples));
    detail::fft_forward_2d(f.coeffs_, grid.num_points_y, grid.num_points_x);
    const double inv = 1.0 / static_cast<double>(grid.total_points());
    for (auto& c : f.coeffs_) c *= inv;
    return f;
  }

  template <class F>
  static Field2D from_function(const TorusGrid2D& grid, F&& fn) {
    std::vector<cd> buf(grid.total_points());
    for (std::size_t j = 0; j < grid.num_points_y; ++j)
      for (std::size_t i = 0; i < grid.num_points_x; ++i)
        buf[j * grid.num_points_x + i] = cd(fn(grid.point_x(i), grid.point_y(j)));
    return from_samples(grid, std::move(buf));
  }

  const TorusGrid2D& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<cd>& coeffs() const { return coeffs_; }
  std::vector<cd>& coeffs() { return coeffs_; }

  int kx(std::size_t i) const {
    const auto nx = static_cast<long>(grid_.num_points_x);
    const auto k = static_cast<long>(i % grid_.num_points_x);
    return static_cast<int>(k < nx / 2 ? k : k - nx);
  }
  int ky(std::size_t i) const {
    const auto ny = static_cast<long>(grid_.num_points_y);
    const auto k = static_cast<long>(i / grid_.num_points_x);
    return static_cast<int>(k < ny / 2 ? k : k - ny);
  }

  std::vector<cd> samples() const {
    std::vector<cd> buf = coeffs_;
    detail::fft_backward_2d(buf, grid_.num_points_y, grid_.num_points_x);
    return buf;
  }

  Field2D derivative_x(int order) const { return derivative_impl(order, true); }
  Field2D derivative_y(int order) const { return derivative_impl(order, false); }

  /// Inverse of d/dx, zeroing the k_x = 0 plane; requires zero x-mean at every y.
  Field2D antiderivative_x(double mean_tol = 1e-10) const {
    const double scale = linf_coeff();
    if (scale > 0) {
      for (std::size_t i = 0; i < size(); ++i)
        if (kx(i) == 0 && std::abs(coeffs_[i]) > mean_tol * scale)
          throw std::invalid_argument("antiderivative_x: non-negligible x-mean");
    }
    Field2D out(grid_);
    for (std::size_t i = 0; i < size(); ++i) {
      const int k = kx(i);
      if (k != 0) out.coeffs_[i] = coeffs_[i] / cd(0.0, static_cast<double>(k));
    }
    return out;
  }

  Field2D dealiased() const {
    Field2D out = *this;
    const double cx = (2.0 / 3.0) * (static_cast<double>(grid_.num_points_x) / 2.0);
    const double cy = (2.0 / 3.0) * (static_cast<double>(grid_.num_points_y) / 2.0);
    for (std::size_t i = 0; i < size(); ++i)
      if (std::abs(kx(i)) > cx || std::abs(ky(i)) > cy) out.coeffs_[i] = cd{};
    return out;
  }

  Field2D project_zero_x_mean() const {
    Field2D out = *this;
    for (std::size_t i = 0; i < size(); ++i)
      if (kx(i) == 0) out.coeffs_[i] = cd{};
    return out;
  }

  /// Largest |x-mean| over y rows, relative to the field magnitude.
  double relative_x_mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      if (kx(i) == 0) m = std::max(m, std::abs(coeffs_[i]));
    const double scale = linf_coeff();
    return scale > 0 ? m / scale : 0.0;
  }

  Field2D product(const Field2D& other) const {
    check_same_grid(other);
    std::vector<cd> a = samples(), b = other.samples();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return from_samples(grid_, std::move(a));
  }

  Field2D& operator+=(const Field2D& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Field2D& operator-=(const Field2D& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Field2D& operator*=(cd s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
  friend Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
  friend Field2D operator*(cd s, Field2D a) { return a *= s; }

  double max_imag_sample() const {
    double m = 0.0;
    for (const cd& v : samples()) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  bool has_nan() const {
    for (const cd& c : coeffs_)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return true;
    return false;
  }

  double linf_coeff() const {
    double m = 0.0;
    for (const cd& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  Field2D derivative_impl(int order, bool along_x) const {
    Field2D out(grid_);
    for (std::size_t i = 0; i < size(); ++i) {
      const cd ik(0.0, static_cast<double>(along_x ? kx(i) : ky(i)));
      cd w{1.0, 0.0};
      for (int p = 0; p < order; ++p) w *= ik;
      out.coeffs_[i] = coeffs_[i] * w;
    }
    return out;
  }

  void check_same_grid(const Field2D& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("field grid mismatch");
  }

  TorusGrid2D grid_;
  std::vector<cd> coeffs_;
};

}  // namespace semiwave
