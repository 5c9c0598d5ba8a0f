#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "semiwave/field.hpp"
#include "semiwave/norms.hpp"
#include "semiwave/profile.hpp"

namespace semiwave {

/// omega = k1^3 - lambda k2^2/k1 (KP dispersion relation); lambda = +1 is
/// KP-II, -1 is KP-I.
inline double kp_dispersion(int k1, int k2, int lambda) {
  if (k1 == 0) throw std::invalid_argument("kp_dispersion: k1 must be nonzero");
  if (lambda != 1 && lambda != -1) throw std::invalid_argument("kp_dispersion: lambda is +-1");
  const double dk1 = k1, dk2 = k2;
  return dk1 * dk1 * dk1 - lambda * dk2 * dk2 / dk1;
}

struct KPPhase {
  int k1 = 1;
  int k2 = 1;
  int lambda = 1;
  double omega = 0.0;

  KPPhase() : omega(kp_dispersion(1, 1, 1)) {}
  KPPhase(int k1_, int k2_, int lambda_)
      : k1(k1_), k2(k2_), lambda(lambda_), omega(kp_dispersion(k1_, k2_, lambda_)) {}

  /// Transport speed of the leading amplitude: 3 k1^2 + lambda k2^2/k1^2.
  double transport_speed() const {
    const double dk1 = k1, dk2 = k2;
    return 3.0 * dk1 * dk1 + lambda * dk2 * dk2 / (dk1 * dk1);
  }
};

/// WKB hierarchy for the semiclassical KP equation with a separable profile
/// alpha_1(x,y) = X(x) Y(y). Tilded amplitudes (a~_j = i j k1 a_j) satisfy:
///   a~1(t,x,y) = i k1 X(x+ct) Y(y),   c = transport speed
///   a~2 = a~1^2 / (6 k1^2)            a~3 = a~1 a~2 / (8 k1^2)
///   b~2 = a~1 b~1/(3 k1^2) + i a~1 dx a~1/(3 k1^3)
///   d_t a0 = -k1^2 dx |a1|^2, a0(0) = 0, solved in closed form
/// and b~1 is a quadrature of its transport equation along characteristics.
class KPAnsatz {
 public:
  KPAnsatz(Bump profile_x, Bump profile_y, KPPhase phase, double eps, int quadrature_steps = 256)
      : px_(profile_x), py_(profile_y), phase_(phase), eps_(eps), quad_steps_(quadrature_steps) {
    const double n = 1.0 / eps;
    if (!(eps > 0.0) || std::abs(n - std::round(n)) > 1e-9 || std::round(n) < 2)
      throw std::invalid_argument("KPAnsatz: eps must be 1/N for integer N >= 2");
    if (quadrature_steps < 16)
      throw std::invalid_argument("KPAnsatz: quadrature_steps < 16 under-resolves b1");
    if (quad_steps_ % 2 != 0) ++quad_steps_;
    if (std::abs(phase_.transport_speed()) < 1e-12)
      throw std::invalid_argument("KPAnsatz: degenerate transport speed c = 0");
  }

  const Bump& profile_x() const { return px_; }
  const Bump& profile_y() const { return py_; }
  const KPPhase& phase() const { return phase_; }
  double eps() const { return eps_; }
  int carrier() const { return static_cast<int>(std::round(1.0 / eps_)); }

  double speed() const { return phase_.transport_speed(); }

  // Untilded leading amplitude and zero mode (both real).
  double a1_at(double t, double x, double y) const {
    return px_.value(x + speed() * t) * py_.value(y);
  }
  double a0_at(double t, double x, double y) const {
    const double c = speed();
    const double k1 = phase_.k1;
    const double xs = px_.value(x + c * t), x0 = px_.value(x);
    const double yy = py_.value(y);
    return (k1 * k1 / c) * (x0 * x0 - xs * xs) * yy * yy;
  }

  cd ta1_at(double t, double x, double y) const {
    return cd(0.0, phase_.k1) * a1_at(t, x, y);
  }
  cd ta2_at(double t, double x, double y) const {
    const cd t1 = ta1_at(t, x, y);
    return t1 * t1 / (6.0 * static_cast<double>(phase_.k1) * phase_.k1);
  }
  cd ta3_at(double t, double x, double y) const {
    return ta1_at(t, x, y) * ta2_at(t, x, y) / (8.0 * static_cast<double>(phase_.k1) * phase_.k1);
  }

  /// Transport source for b~1 (sign: d_t b~1 - c dx b~1 = F):
  ///   F = -[ 3i dxx a~1 + 2 lambda (k2/k1) dy a~1
  ///          - i lambda (k2^2/k1^3) dxx a~1 + i k1 (a0 a~1 + conj(a~1) a~2) ].
  cd tb1_source_at(double t, double x, double y) const {
    const double k1 = phase_.k1, k2 = phase_.k2, la = phase_.lambda;
    const double X = px_.value(x + speed() * t);
    const double Xpp = px_.d2(x + speed() * t);
    const double Yv = py_.value(y), Yp = py_.d1(y);
    const cd ta1 = cd(0.0, k1) * X * Yv;
    const cd dxx_ta1 = cd(0.0, k1) * Xpp * Yv;
    const cd dy_ta1 = cd(0.0, k1) * X * Yp;
    const cd ta2 = ta1 * ta1 / (6.0 * k1 * k1);
    const double a0 = a0_at(t, x, y);
    return -(cd(0.0, 3.0) * dxx_ta1 + 2.0 * la * (k2 / k1) * dy_ta1 -
             cd(0.0, la * k2 * k2 / (k1 * k1 * k1)) * dxx_ta1 +
             cd(0.0, k1) * (a0 * ta1 + std::conj(ta1) * ta2));
  }

  /// Along the characteristic through (t,x,y), only the a0 factor in the
  /// source varies; the quadrature reduces to a 1D Simpson integral of
  /// X(x + c(t-s))^2 in s.
  cd tb1_at(double t, double x, double y) const {
    if (t == 0.0) return cd{};
    const double c = speed();
    const double k1 = phase_.k1;
    const double head = x + c * t;
    const double X = px_.value(head), Yv = py_.value(y);
    const cd ta1 = cd(0.0, k1) * X * Yv;

    // Constant (in s) part of the source, times t.
    const double k2 = phase_.k2, la = phase_.lambda;
    const cd dxx_ta1 = cd(0.0, k1) * px_.d2(head) * Yv;
    const cd dy_ta1 = cd(0.0, k1) * X * py_.d1(y);
    const cd ta2 = ta1 * ta1 / (6.0 * k1 * k1);
    const cd const_part = -(cd(0.0, 3.0) * dxx_ta1 + 2.0 * la * (k2 / k1) * dy_ta1 -
                            cd(0.0, la * k2 * k2 / (k1 * k1 * k1)) * dxx_ta1 +
                            cd(0.0, k1) * std::conj(ta1) * ta2);

    // Varying part: -i k1 ta1 * int_0^t a0(s, x + c(t-s), y) ds with
    // a0(s, x+c(t-s), y) = (k1^2/c) (X(x+c(t-s))^2 - X(x+ct)^2) Y(y)^2.
    const double int_a0 = (k1 * k1 / c) * (int_xsq(t, x) - t * X * X) * Yv * Yv;
    return t * const_part - cd(0.0, k1) * ta1 * int_a0;
  }

  /// Simpson quadrature of X(x + c(t-s))^2 over s in [0,t]; this is the only
  /// part of the b~1 source that varies along the characteristic.
  double int_xsq(double t, double x) const {
    if (t == 0.0) return 0.0;
    const double c = speed();
    const int m = quad_steps_;
    const double h = t / m;
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const double Xs = px_.value(x + c * (t - i * h));
      acc += w * Xs * Xs;
    }
    return acc * h / 3.0;
  }

  cd tb2_at(double t, double x, double y) const {
    const double k1 = phase_.k1;
    const cd ta1 = ta1_at(t, x, y);
    const cd dx_ta1 = cd(0.0, k1) * px_.d1(x + speed() * t) * py_.value(y);
    return ta1 * tb1_at(t, x, y) / (3.0 * k1 * k1) +
           cd(0.0, 1.0) * ta1 * dx_ta1 / (3.0 * k1 * k1 * k1);
  }

 private:
  Bump px_, py_;
  KPPhase phase_;
  double eps_;
  int quad_steps_;
};

inline KPAnsatz build_kp_ansatz(const Bump& profile_x, const Bump& profile_y,
                                const KPPhase& phase, double eps, int quadrature_steps = 256) {
  return KPAnsatz(profile_x, profile_y, phase, eps, quadrature_steps);
}

/// u_app = eps dx( sum_j eps^{j-1} (a_j + eps b_j) e^{i j phi} + c.c. ) + eps a0,
/// with the outer dx applied spectrally to the assembled oscillatory sum.
/// Untilded amplitudes recovered via a_j = a~_j/(i j k1), b_j = (b~_j - dx a_j)/(i j k1).
inline Field2D assemble_uapp_kp(const KPAnsatz& ansatz, double t, const TorusGrid2D& grid) {
  if (grid.carrier_nx != ansatz.carrier())
    throw std::invalid_argument("assemble_uapp_kp: grid carrier does not match 1/eps");
  const KPPhase& ph = ansatz.phase();
  if (grid.k1 != ph.k1 || grid.k2 != ph.k2)
    throw std::invalid_argument("assemble_uapp_kp: grid (k1,k2) does not match phase");
  const double eps = ansatz.eps();
  const double n = ansatz.carrier();
  const double k1 = ph.k1;
  const double c = ansatz.speed();

  // Per-column data: the b~1 quadrature depends on x alone, so evaluate it
  // once per column instead of once per point.
  const std::size_t nx = grid.num_points_x, ny = grid.num_points_y;
  std::vector<double> Xh(nx), Xp(nx), Xpp(nx), X0(nx), Jx(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = grid.point_x(i);
    Xh[i] = ansatz.profile_x().value(x + c * t);
    Xp[i] = ansatz.profile_x().d1(x + c * t);
    Xpp[i] = ansatz.profile_x().d2(x + c * t);
    X0[i] = ansatz.profile_x().value(x);
    Jx[i] = ansatz.int_xsq(t, x);
  }
  const double k2 = ph.k2, la = ph.lambda;

  std::vector<cd> osc(grid.total_points());
  std::vector<double> zero(grid.total_points());
  for (std::size_t j = 0; j < ny; ++j) {
    const double y = grid.point_y(j);
    const double Yv = ansatz.profile_y().value(y);
    const double Yp = ansatz.profile_y().d1(y);
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = grid.point_x(i);
      const std::size_t idx = j * nx + i;
      const double theta = ph.k1 * n * x + ph.k2 * n * n * y + ph.omega * n * t;
      const cd e1 = std::polar(1.0, theta);
      const cd e2 = e1 * e1;
      const cd e3 = e2 * e1;

      const cd ta1 = cd(0.0, k1) * Xh[i] * Yv;
      const cd dx_ta1 = cd(0.0, k1) * Xp[i] * Yv;
      const cd dxx_ta1 = cd(0.0, k1) * Xpp[i] * Yv;
      const cd dy_ta1 = cd(0.0, k1) * Xh[i] * Yp;
      const cd ta2 = ta1 * ta1 / (6.0 * k1 * k1);
      const cd ta3 = ta1 * ta2 / (8.0 * k1 * k1);
      const cd const_part = -(cd(0.0, 3.0) * dxx_ta1 + 2.0 * la * (k2 / k1) * dy_ta1 -
                              cd(0.0, la * k2 * k2 / (k1 * k1 * k1)) * dxx_ta1 +
                              cd(0.0, k1) * std::conj(ta1) * ta2);
      const double int_a0 = (k1 * k1 / c) * (Jx[i] - t * Xh[i] * Xh[i]) * Yv * Yv;
      const cd tb1 = t * const_part - cd(0.0, k1) * ta1 * int_a0;
      const cd tb2 = ta1 * tb1 / (3.0 * k1 * k1) +
                     cd(0.0, 1.0) * ta1 * dx_ta1 / (3.0 * k1 * k1 * k1);

      const cd a1 = ta1 / cd(0.0, k1);
      const cd b1 = (tb1 - dx_ta1 / cd(0.0, k1)) / cd(0.0, k1);
      const cd a2 = ta2 / cd(0.0, 2.0 * k1);
      const cd dx_a2 = ta1 * dx_ta1 / (cd(0.0, 2.0 * k1) * 3.0 * k1 * k1);
      const cd b2 = (tb2 - dx_a2) / cd(0.0, 2.0 * k1);
      const cd a3 = ta3 / cd(0.0, 3.0 * k1);

      const cd h1 = (a1 + eps * b1) * e1;
      const cd h2 = eps * (a2 + eps * b2) * e2;
      const cd h3 = eps * eps * a3 * e3;
      osc[idx] = h1 + h2 + h3;
      const double a0 = (k1 * k1 / c) * (X0[i] * X0[i] - Xh[i] * Xh[i]) * Yv * Yv;
      zero[idx] = eps * a0;
    }
  }
  // Real oscillatory sum (ansatz + c.c.), then the outer eps * d/dx.
  std::vector<cd> osc_real(osc.size());
  for (std::size_t i = 0; i < osc.size(); ++i) osc_real[i] = 2.0 * osc[i].real();
  Field2D S = Field2D::from_samples(grid, std::move(osc_real));
  Field2D u = cd(eps) * S.derivative_x(1);
  std::vector<cd> z(zero.begin(), zero.end());
  u += Field2D::from_samples(grid, std::move(z));
  return u;
}

/// Residual recovered through the conservative form:
///   E = eps^2 dx dt u + eps^4 dxxxx u + lambda eps^4 dyy u + (eps/2)(eps dx)^2 u^2,
/// then Sigma = (eps dx)^{-1} E. E must be an exact x-derivative.
inline Field2D residual_kp(const KPAnsatz& ansatz, double t, const TorusGrid2D& grid,
                           double dt_fd) {
  const double eps = ansatz.eps();
  const int lambda = ansatz.phase().lambda;
  const Field2D um2 = assemble_uapp_kp(ansatz, t - 2.0 * dt_fd, grid);
  const Field2D um1 = assemble_uapp_kp(ansatz, t - dt_fd, grid);
  const Field2D u = assemble_uapp_kp(ansatz, t, grid);
  const Field2D up1 = assemble_uapp_kp(ansatz, t + dt_fd, grid);
  const Field2D up2 = assemble_uapp_kp(ansatz, t + 2.0 * dt_fd, grid);
  Field2D dudt = (cd(-1.0 / (12.0 * dt_fd)) * up2) + (cd(8.0 / (12.0 * dt_fd)) * up1) +
                 (cd(-8.0 / (12.0 * dt_fd)) * um1) + (cd(1.0 / (12.0 * dt_fd)) * um2);

  const double e2 = eps * eps, e4 = e2 * e2;
  Field2D usq = u.product(u).dealiased();
  Field2D expr = cd(e2) * dudt.derivative_x(1) + cd(e4) * u.derivative_x(4) +
                 cd(static_cast<double>(lambda) * e4) * u.derivative_y(2) +
                 cd(0.5 * eps * e2) * usq.derivative_x(2);
  if (expr.relative_x_mean() > 1e-7)
    throw std::runtime_error("residual_kp: pre-inversion expression has non-negligible x-mean");
  return cd(1.0 / eps) * expr.project_zero_x_mean().antiderivative_x(1.0);
}

struct KPResidualCheck {
  Field2D residual;
  double norm_h2eps = 0.0;
  double halving_rel_change = 0.0;
  bool converged = false;
};

inline KPResidualCheck residual_kp_checked(const KPAnsatz& ansatz, double t,
                                           const TorusGrid2D& grid, double dt_fd) {
  KPResidualCheck out;
  out.residual = residual_kp(ansatz, t, grid, dt_fd);
  const NormSpec h2 = NormSpec::semiclassical(2, ansatz.eps(), /*anisotropic=*/true);
  out.norm_h2eps = norm(out.residual, h2);
  const double half = norm(residual_kp(ansatz, t, grid, dt_fd / 2.0), h2);
  out.halving_rel_change = std::abs(half - out.norm_h2eps) / std::max(half, 1e-300);
  out.converged = out.halving_rel_change <= 0.05;
  return out;
}

}  // namespace semiwave
