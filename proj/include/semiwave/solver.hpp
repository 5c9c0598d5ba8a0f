#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semiwave/field.hpp"
#include "semiwave/norms.hpp"
#include "semiwave/wkb_kp.hpp"

namespace semiwave {

struct SolverConfig {
  double dt_factor = 0.1;          // dt = dt_factor * eps
  double final_time = 0.0;         // tau, in WKB time
  bool dealias = true;
  int num_snapshots = 16;
  int conservation_check_interval = 16;
  double nonlinear_coeff = 1.0;    // test hook: 0 disables the nonlinearity
  double richardson_tol = 1e-6;
  int max_halvings = 3;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class FieldT>
struct Trajectory {
  std::vector<double> times;
  std::vector<FieldT> snapshots;
  std::vector<cd> mass;                   // zero mode per snapshot
  std::vector<double> l2;                 // L2 norm per snapshot
  std::vector<double> bootstrap_series;   // ||eps dx (u - u_app)||_Linf, if reference given
  double dt_used = 0.0;

  const FieldT& final_state() const { return snapshots.back(); }
  double final_time() const { return times.back(); }

  double mass_drift() const {
    double m = 0.0;
    const double scale = std::max(std::abs(mass.front()), 1.0);
    for (const cd& v : mass) m = std::max(m, std::abs(v - mass.front()) / scale);
    return m;
  }
  double l2_drift() const {
    double m = 0.0;
    for (double v : l2) m = std::max(m, std::abs(v - l2.front()) / l2.front());
    return m;
  }
  double bootstrap_max() const {
    double m = 0.0;
    for (double v : bootstrap_series) m = std::max(m, v);
    return m;
  }
};

using Trajectory1D = Trajectory<Field1D>;
using Trajectory2D = Trajectory<Field2D>;

namespace detail {

template <class State>
void axpy(State& y, double a, const State& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

/// Integrating-factor RK4 (Cox-Matthews staging): the stiff linear part is
/// propagated exactly by its unitary symbol E = e^{L dt/2}; RK4 handles the
/// transformed nonlinear term.
///   k1 = N(c)
///   k2 = N(E (c + dt/2 k1))
///   k3 = N(E c + dt/2 k2)
///   k4 = N(E^2 c + dt E k3)
///   c <- E^2 c + dt/6 (E^2 k1 + 2 E (k2 + k3) + k4)
template <class State, class Propagate, class Nonlinear, class Record>
void ifrk4_integrate(State& c, double dt, int steps, Propagate&& half_step, Nonlinear&& nonlin,
                     Record&& record) {
  record(0);
  for (int s = 0; s < steps; ++s) {
    State k1 = nonlin(c);

    State stage = c;
    axpy(stage, dt / 2.0, k1);
    half_step(stage);
    State k2 = nonlin(stage);

    State ec = c;
    half_step(ec);  // E c
    stage = ec;
    axpy(stage, dt / 2.0, k2);
    State k3 = nonlin(stage);

    State e2c = ec;
    half_step(e2c);  // E^2 c
    stage = k3;
    half_step(stage);
    State k4_arg = e2c;
    axpy(k4_arg, dt, stage);
    State k4 = nonlin(k4_arg);

    half_step(k1);
    half_step(k1);  // E^2 k1
    half_step(k2);  // E k2
    half_step(k3);  // E k3
    c = std::move(e2c);
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] += (dt / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    record(s + 1);
  }
}

}  // namespace detail

/// Semiclassical KdV:  eps d_t u + eps^3 dxxx u = 6 eps^2 u dx u.
/// After dividing by eps: d_t u = -eps^2 dxxx u + 6 eps u dx u; per-mode
/// linear symbol exp(i eps^2 k^3 dt).
inline Trajectory1D solve_kdv(const Field1D& u0, double eps, const SolverConfig& cfg,
                              const std::function<Field1D(double)>& reference = {}) {
  const TorusGrid1D grid = u0.grid();
  if (grid.carrier_n != static_cast<int>(std::round(1.0 / eps)))
    throw std::invalid_argument("solve_kdv: grid not commensurate with eps");
  if (u0.max_imag_sample() > 1e-8 * std::max(1.0, u0.linf_coeff()))
    throw std::invalid_argument("solve_kdv: initial data must be real-valued");

  const double umax = linf_norm(u0) * std::abs(cfg.nonlinear_coeff);
  double dt = cfg.dt_factor * eps;
  const double cfl = 0.5 * grid.spacing() / (6.0 * eps * std::max(umax, 1e-12));
  if (umax > 0.0 && dt > cfl)
    throw SolverError("solve_kdv: dt violates nonlinear CFL bound");

  int steps = std::max(1, static_cast<int>(std::ceil(cfg.final_time / dt - 1e-12)));
  dt = cfg.final_time / steps;

  const std::size_t n = grid.num_points;
  std::vector<cd> half_symbol(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = (i < n / 2) ? static_cast<double>(i)
                                 : static_cast<double>(i) - static_cast<double>(n);
    half_symbol[i] = std::polar(1.0, eps * eps * k * k * k * dt / 2.0);
  }

  std::vector<cd> c = (cfg.dealias ? u0.dealiased() : u0).coeffs();

  auto half_step = [&](std::vector<cd>& v) {
    for (std::size_t i = 0; i < n; ++i) v[i] *= half_symbol[i];
  };
  auto nonlin = [&](const std::vector<cd>& v) {
    Field1D f = Field1D::from_coeffs(grid, v);
    Field1D g = f.product(f.derivative(1));
    if (cfg.dealias) g = g.dealiased();
    std::vector<cd> out = g.coeffs();
    const double a = 6.0 * eps * cfg.nonlinear_coeff;
    for (auto& w : out) w *= a;
    return out;
  };

  Trajectory1D traj;
  traj.dt_used = dt;
  const int stride = std::max(1, steps / std::max(1, cfg.num_snapshots));
  auto record = [&](int step) {
    Field1D f = Field1D::from_coeffs(grid, c);
    if (f.has_nan()) throw SolverError("solve_kdv: NaN at step " + std::to_string(step));
    if (step != steps && step % stride != 0) return;
    const double t = step * dt;
    traj.times.push_back(t);
    traj.snapshots.push_back(f);
    traj.mass.push_back(mean(f));
    traj.l2.push_back(l2_norm(f));
    if (reference) {
      Field1D w = f - reference(t);
      traj.bootstrap_series.push_back(linf_norm(cd(eps) * w.derivative(1)));
    }
  };

  detail::ifrk4_integrate(c, dt, steps, half_step, nonlin, record);
  return traj;
}

/// Semiclassical KP:
///   eps d_t u + eps^3 dxxx u + lambda eps^3 dx^{-1} dyy u + eps^2 u dx u = 0.
/// The k_x = 0 plane is projected out after every stage.
inline Trajectory2D solve_kp(const Field2D& u0, const KPPhase& phase, double eps,
                             const SolverConfig& cfg,
                             const std::function<Field2D(double)>& reference = {}) {
  const TorusGrid2D grid = u0.grid();
  if (grid.carrier_nx != static_cast<int>(std::round(1.0 / eps)))
    throw std::invalid_argument("solve_kp: grid not commensurate with eps");
  if (u0.relative_x_mean() > 1e-8)
    throw std::invalid_argument("solve_kp: initial data must have zero x-mean at every y");

  const double umax = linf_norm(u0) * std::abs(cfg.nonlinear_coeff);
  double dt = cfg.dt_factor * eps;
  const double cfl = 0.5 * grid.spacing_x() / (eps * std::max(umax, 1e-12));
  if (umax > 0.0 && dt > cfl)
    throw SolverError("solve_kp: dt violates nonlinear CFL bound");

  int steps = std::max(1, static_cast<int>(std::ceil(cfg.final_time / dt - 1e-12)));
  dt = cfg.final_time / steps;

  Field2D shape(grid);
  const std::size_t n = grid.total_points();
  std::vector<cd> half_symbol(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double kx = shape.kx(i), ky = shape.ky(i);
    if (kx == 0.0) {
      half_symbol[i] = cd{};  // projected plane
    } else {
      const double w = eps * eps * (kx * kx * kx - phase.lambda * ky * ky / kx);
      half_symbol[i] = std::polar(1.0, w * dt / 2.0);
    }
  }

  std::vector<cd> c = (cfg.dealias ? u0.dealiased() : u0).project_zero_x_mean().coeffs();

  auto half_step = [&](std::vector<cd>& v) {
    for (std::size_t i = 0; i < n; ++i) v[i] *= half_symbol[i];
  };
  auto nonlin = [&](const std::vector<cd>& v) {
    Field2D f = Field2D::from_coeffs(grid, v);
    Field2D g = f.product(f).derivative_x(1);
    if (cfg.dealias) g = g.dealiased();
    std::vector<cd> out = g.coeffs();
    const double a = -0.5 * eps * cfg.nonlinear_coeff;
    for (std::size_t i = 0; i < n; ++i) out[i] = (shape.kx(i) == 0) ? cd{} : out[i] * a;
    return out;
  };

  Trajectory2D traj;
  traj.dt_used = dt;
  const int stride = std::max(1, steps / std::max(1, cfg.num_snapshots));
  auto record = [&](int step) {
    Field2D f = Field2D::from_coeffs(grid, c);
    if (f.has_nan()) throw SolverError("solve_kp: NaN at step " + std::to_string(step));
    if (f.relative_x_mean() > 1e-8)
      throw SolverError("solve_kp: x-mean growth at step " + std::to_string(step));
    if (step != steps && step % stride != 0) return;
    const double t = step * dt;
    traj.times.push_back(t);
    traj.snapshots.push_back(f);
    traj.mass.push_back(f.coeffs()[0]);
    traj.l2.push_back(l2_norm(f));
    if (reference) {
      Field2D w = f - reference(t);
      traj.bootstrap_series.push_back(linf_norm(cd(eps) * w.derivative_x(1)));
    }
  };

  detail::ifrk4_integrate(c, dt, steps, half_step, nonlin, record);
  return traj;
}

/// Runs at dt and dt/2, halving (up to cfg.max_halvings) until the final
/// states agree in L2 within cfg.richardson_tol; returns the finer run.
template <class Solve>
auto solve_with_richardson(Solve&& solve, SolverConfig cfg, double* achieved_diff = nullptr) {
  auto coarse = solve(cfg);
  for (int attempt = 0;; ++attempt) {
    SolverConfig fine_cfg = cfg;
    fine_cfg.dt_factor = cfg.dt_factor / 2.0;
    auto fine = solve(fine_cfg);
    const double diff = l2_norm(fine.final_state() - coarse.final_state());
    if (achieved_diff) *achieved_diff = diff;
    if (diff <= cfg.richardson_tol || attempt >= cfg.max_halvings) {
      if (diff > cfg.richardson_tol)
        throw SolverError("Richardson check failed after max halvings (diff=" +
                          std::to_string(diff) + ")");
      return fine;
    }
    cfg = fine_cfg;
    coarse = std::move(fine);
  }
}

}  // namespace semiwave
