#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "semiwave/field.hpp"
#include "semiwave/norms.hpp"
#include "semiwave/profile.hpp"

namespace semiwave {

/// omega(j) = j^3; the phase of harmonic j is phi_j(t,x) = jx + j^3 t.
inline double dispersion_kdv(int j) {
  return static_cast<double>(j) * j * j;
}

/// Quadratic resonance: phi_j + phi_k solves the eikonal equation iff
/// (j+k)^3 = j^3 + k^3, i.e. 3jk(j+k) = 0.
inline bool resonance_pair(long j, long k) {
  return 3 * j * k * (j + k) == 0;
}

/// Cubic (mKdV-type) resonance: both k1+k2+k3 and k1^3+k2^3+k3^3 vanish.
inline bool resonance_triple(long k1, long k2, long k3) {
  return k1 + k2 + k3 == 0 && k1 * k1 * k1 + k2 * k2 * k2 + k3 * k3 * k3 == 0;
}

/// WKB amplitude hierarchy for the semiclassical KdV equation. The leading
/// amplitude transports at speed 3; the zero mode and the correctors are
/// closed-form except b1, which is a quadrature along characteristics:
///   a1(t,x) = alpha(x+3t)            a2 = -a1^2        a3 = -(3/4) a1 a2
///   a0(t,x) = 2(alpha(x+3t)^2 - alpha(x)^2)
///   b1(t,x) = int_0^t [6i(a0 a1 + conj(a1) a2) - 3i dxx a1](s, x+3(t-s)) ds
///   b2      = -2 a1 b1 - 2i a1 dx a1
/// c1 is identically zero.
class KdVAnsatz {
 public:
  KdVAnsatz(Bump profile, double eps, int quadrature_steps = 256)
      : profile_(profile), eps_(eps), quad_steps_(quadrature_steps) {
    const double n = 1.0 / eps;
    if (!(eps > 0.0) || std::abs(n - std::round(n)) > 1e-9 || std::round(n) < 2)
      throw std::invalid_argument("KdVAnsatz: eps must be 1/N for integer N >= 2");
    if (quadrature_steps < 16)
      throw std::invalid_argument("KdVAnsatz: quadrature_steps < 16 under-resolves b1");
    if (quad_steps_ % 2 != 0) ++quad_steps_;  // composite Simpson needs an even count
  }

  const Bump& profile() const { return profile_; }
  double eps() const { return eps_; }
  int carrier() const { return static_cast<int>(std::round(1.0 / eps_)); }
  int quadrature_steps() const { return quad_steps_; }

  double a1_at(double t, double x) const { return profile_.value(x + 3.0 * t); }
  double dx_a1_at(double t, double x) const { return profile_.d1(x + 3.0 * t); }
  double dxx_a1_at(double t, double x) const { return profile_.d2(x + 3.0 * t); }
  double a2_at(double t, double x) const {
    const double a1 = a1_at(t, x);
    return -a1 * a1;
  }
  double a3_at(double t, double x) const { return -0.75 * a1_at(t, x) * a2_at(t, x); }
  double a0_at(double t, double x) const {
    const double ps = profile_.value(x + 3.0 * t);
    const double p0 = profile_.value(x);
    return 2.0 * (ps * ps - p0 * p0);
  }

  /// Composite Simpson along the characteristic through (t, x). The
  /// integrand's a1, a2 and dxx(a1) factors are constant on the
  /// characteristic; only a0 varies.
  cd b1_at(double t, double x) const {
    if (t == 0.0) return cd{};
    const int m = quad_steps_;
    const double h = t / m;
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double s = i * h;
      const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += w * b1_integrand(t, x, s);
    }
    return cd(0.0, acc * h / 3.0);  // integrand is i * (real)
  }

  cd b2_at(double t, double x) const {
    const double a1 = a1_at(t, x);
    return -2.0 * a1 * b1_at(t, x) - cd(0.0, 2.0) * a1 * dx_a1_at(t, x);
  }

  std::vector<double> a1(double t, const TorusGrid1D& g) const { return eval(g, [&](double x) { return a1_at(t, x); }); }
  std::vector<double> a2(double t, const TorusGrid1D& g) const { return eval(g, [&](double x) { return a2_at(t, x); }); }
  std::vector<double> a3(double t, const TorusGrid1D& g) const { return eval(g, [&](double x) { return a3_at(t, x); }); }
  std::vector<double> a0(double t, const TorusGrid1D& g) const { return eval(g, [&](double x) { return a0_at(t, x); }); }
  std::vector<cd> b1(double t, const TorusGrid1D& g) const {
    std::vector<cd> v(g.num_points);
    for (std::size_t i = 0; i < g.num_points; ++i) v[i] = b1_at(t, g.point(i));
    return v;
  }
  std::vector<cd> b2(double t, const TorusGrid1D& g) const {
    std::vector<cd> v(g.num_points);
    for (std::size_t i = 0; i < g.num_points; ++i) v[i] = b2_at(t, g.point(i));
    return v;
  }

 private:
  // Imaginary part of the b1 source evaluated at (s, x + 3(t-s)):
  //   6(a0 a1 + a1 a2) - 3 dxx a1, all amplitudes real.
  double b1_integrand(double t, double x, double s) const {
    const double head = x + 3.0 * t;  // argument transported to time s and back
    const double a1 = profile_.value(head);
    const double a2 = -a1 * a1;
    const double ps = a1;  // alpha(y+3s) with y = x+3(t-s)
    const double p0 = profile_.value(x + 3.0 * (t - s));
    const double a0 = 2.0 * (ps * ps - p0 * p0);
    return 6.0 * (a0 * a1 + a1 * a2) - 3.0 * profile_.d2(head);
  }

  template <class F>
  static std::vector<double> eval(const TorusGrid1D& g, F&& f) {
    std::vector<double> v(g.num_points);
    for (std::size_t i = 0; i < g.num_points; ++i) v[i] = f(g.point(i));
    return v;
  }

  Bump profile_;
  double eps_;
  int quad_steps_;
};

inline KdVAnsatz build_kdv_ansatz(const Bump& profile, double eps, int quadrature_steps = 256) {
  return KdVAnsatz(profile, eps, quadrature_steps);
}

/// u_app(t) = (a1 + eps b1) e^{i phi/eps} + eps (a2 + eps b2) e^{2i phi/eps}
///          + eps^2 a3 e^{3i phi/eps} + c.c. + eps a0,   phi = x + t.
inline Field1D assemble_uapp_kdv(const KdVAnsatz& ansatz, double t, const TorusGrid1D& grid) {
  if (grid.carrier_n != ansatz.carrier())
    throw std::invalid_argument("assemble_uapp_kdv: grid carrier does not match 1/eps");
  const double eps = ansatz.eps();
  const double n = ansatz.carrier();
  std::vector<double> u(grid.num_points);
  for (std::size_t i = 0; i < grid.num_points; ++i) {
    const double x = grid.point(i);
    const double phase = n * (x + t);
    const cd e1 = std::polar(1.0, phase);
    const cd e2 = e1 * e1;
    const cd e3 = e2 * e1;
    const cd h1 = (ansatz.a1_at(t, x) + eps * ansatz.b1_at(t, x)) * e1;
    const cd h2 = eps * (ansatz.a2_at(t, x) + eps * ansatz.b2_at(t, x)) * e2;
    const cd h3 = eps * eps * ansatz.a3_at(t, x) * e3;
    u[i] = 2.0 * (h1 + h2 + h3).real() + eps * ansatz.a0_at(t, x);
  }
  return Field1D::from_real_samples(grid, u);
}

/// Residual Sigma = eps d_t u_app + eps^3 dxxx u_app - 6 eps^2 u_app dx u_app,
/// the time derivative by 4th-order central differences of assembled fields.
inline Field1D residual_kdv(const KdVAnsatz& ansatz, double t, const TorusGrid1D& grid,
                            double dt_fd) {
  const double eps = ansatz.eps();
  const Field1D um2 = assemble_uapp_kdv(ansatz, t - 2.0 * dt_fd, grid);
  const Field1D um1 = assemble_uapp_kdv(ansatz, t - dt_fd, grid);
  const Field1D u = assemble_uapp_kdv(ansatz, t, grid);
  const Field1D up1 = assemble_uapp_kdv(ansatz, t + dt_fd, grid);
  const Field1D up2 = assemble_uapp_kdv(ansatz, t + 2.0 * dt_fd, grid);
  Field1D dudt = (cd(-1.0 / (12.0 * dt_fd)) * up2) + (cd(8.0 / (12.0 * dt_fd)) * up1) +
                 (cd(-8.0 / (12.0 * dt_fd)) * um1) + (cd(1.0 / (12.0 * dt_fd)) * um2);
  Field1D nonlinear = u.product(u.derivative(1)).dealiased();
  return cd(eps) * dudt + cd(eps * eps * eps) * u.derivative(3) -
         cd(6.0 * eps * eps) * nonlinear;
}

struct ResidualCheck {
  Field1D residual;
  double norm_h2eps = 0.0;
  double halving_rel_change = 0.0;
  bool converged = false;
};

/// Residual with a step-halving consistency check on the time differencing.
inline ResidualCheck residual_kdv_checked(const KdVAnsatz& ansatz, double t,
                                          const TorusGrid1D& grid, double dt_fd) {
  ResidualCheck out;
  out.residual = residual_kdv(ansatz, t, grid, dt_fd);
  const NormSpec h2 = NormSpec::semiclassical(2, ansatz.eps());
  out.norm_h2eps = norm(out.residual, h2);
  const double half = norm(residual_kdv(ansatz, t, grid, dt_fd / 2.0), h2);
  out.halving_rel_change = std::abs(half - out.norm_h2eps) / std::max(half, 1e-300);
  out.converged = out.halving_rel_change <= 0.05;
  return out;
}

}  // namespace semiwave
