// Acceptance harness: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each check states the measured number next to its bound.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "semiwave/analysis.hpp"
#include "semiwave/inflation.hpp"
#include "semiwave/solver.hpp"
#include "semiwave/wkb_kdv.hpp"
#include "semiwave/wkb_kp.hpp"

using namespace semiwave;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  (%s)\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

// ---- 1: KdV residual order ----------------------------------------------

void criterion_1() {
  const double t0 = now_seconds();
  Bump profile(0.0, 1.2, 1.0);
  std::vector<double> eps_list{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::vector<double> residuals;
  for (double eps : eps_list) {
    auto grid = make_grid(static_cast<int>(std::lround(1.0 / eps)), 16);
    KdVAnsatz ansatz(profile, eps);
    const double tau = choose_tau(profile);
    const double dt_fd = 0.05 * std::pow(eps, 1.25);
    residuals.push_back(residual_kdv_checked(ansatz, tau, grid, dt_fd).norm_h2eps);
  }
  auto fit = fit_power_law(eps_list, residuals);
  const double dt = now_seconds() - t0;
  report(1, fit.slope >= 2.7 && fit.r_squared >= 0.99 && dt < 120.0,
         "residual slope " + fmt(fit.slope) + " >= 2.7, r2 " + fmt(fit.r_squared) +
             " >= 0.99, " + fmt(dt) + "s < 120s");
}

// ---- 2: KdV WKB error order ---------------------------------------------

void criterion_2() {
  const double t0 = now_seconds();
  // Short horizon and a wide profile keep the envelope-dispersion remainder
  // (whose constant involves high derivatives of the profile) inside its
  // asymptotic regime over an affordable eps window.
  Bump profile(0.0, 1.4, 0.25);
  const double tau = 0.05;
  std::vector<double> eps_list{1.0 / 96, 1.0 / 192, 1.0 / 384, 1.0 / 768};
  std::vector<double> errors;
  double worst_bootstrap = 0.0;
  for (double eps : eps_list) {
    const int n = static_cast<int>(std::lround(1.0 / eps));
    auto grid = make_grid(n, 16);
    KdVAnsatz ansatz(profile, eps);
    auto u0 = assemble_uapp_kdv(ansatz, 0.0, grid);
    SolverConfig cfg;
    cfg.final_time = tau;
    cfg.dt_factor = std::min(
        0.01, 0.45 * grid.spacing() / (6.0 * eps * eps * std::max(linf_norm(u0), 1e-12)));
    auto reference = [&](double t) { return assemble_uapp_kdv(ansatz, t, grid); };
    auto traj = solve_kdv(u0, eps, cfg, reference);
    errors.push_back(wkb_error_kdv(traj, ansatz).sup);
    worst_bootstrap = std::max(worst_bootstrap, traj.bootstrap_max());
  }
  auto fit = fit_power_law(eps_list, errors);
  const double dt = now_seconds() - t0;
  report(2, fit.slope >= 1.8 && worst_bootstrap <= 1.0 && dt < 600.0,
         "error slope " + fmt(fit.slope) + " >= 1.8, bootstrap max " + fmt(worst_bootstrap) +
             " <= 1, " + fmt(dt) + "s < 600s");
}

// ---- 3: zero-mode emergence ---------------------------------------------

void criterion_3() {
  Bump profile(0.0, 1.2, 3.0);
  const double tau = choose_tau(profile);
  std::vector<double> eps_list{1.0 / 32, 1.0 / 64, 1.0 / 128};
  std::vector<double> defects;
  double zm_rel = -1.0;
  for (double eps : eps_list) {
    const int n = static_cast<int>(std::lround(1.0 / eps));
    auto grid = make_grid(n, 16);
    KdVAnsatz ansatz(profile, eps);
    auto u0 = assemble_uapp_kdv(ansatz, 0.0, grid);
    SolverConfig cfg;
    cfg.final_time = tau;
    cfg.dt_factor = std::min(
        0.1, 0.45 * grid.spacing() / (6.0 * eps * eps * std::max(linf_norm(u0), 1e-12)));
    auto traj = solve_kdv(u0, eps, cfg);
    const auto& u_final = traj.snapshots.back();
    defects.push_back(zero_mode_check(u_final, ansatz, tau));
    if (eps == eps_list.back()) {
      const double zm = l2_norm(extract_harmonic(u_final, 0, eps));
      const double target = eps * l2_norm(Field1D::from_real_samples(grid, ansatz.a0(tau, grid)));
      zm_rel = std::abs(zm - target) / target;
    }
  }
  auto fit = fit_power_law(eps_list, defects);
  report(3, fit.slope >= 0.9 && zm_rel >= 0.0 && zm_rel <= 0.10,
         "zero-mode defect slope " + fmt(fit.slope) + " >= 0.9, L2 mismatch " + fmt(zm_rel) +
             " <= 0.10");
}

// ---- 4: dilated-profile Sobolev exponents -------------------------------

void criterion_4() {
  Bump profile(0.0, 1.4, 1.0);
  std::vector<double> eps_list{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  struct Tuple {
    double beta, kappa, s, expected;
  };
  const std::vector<Tuple> tuples{
      {2.0, 1.0, -1.0, 1.0},
      {2.0, 1.0, -1.5, 1.5},
      {1.5, 0.0, -2.0, -1.0 / 12.0},
      {2.0, 0.0, -1.0, 0.0},
  };
  bool pass = true;
  std::string detail;
  for (auto& tp : tuples) {
    auto res = lemma51_measure(profile, tp.beta, tp.s, tp.kappa, eps_list);
    const bool ok = std::abs(res.fit.slope - tp.expected) <= 0.1 &&
                    std::abs(res.predicted_exponent - tp.expected) < 1e-12;
    pass = pass && ok;
    if (!detail.empty()) detail += ", ";
    detail += fmt(res.fit.slope) + "~" + fmt(tp.expected);
  }
  report(4, pass, "measured~predicted exponents " + detail + " (tol 0.1)");
}

// ---- 5 & 6: KdV norm inflation ------------------------------------------

void criteria_5_6() {
  InflationConfig cfg;
  cfg.equation = Equation::kdv;
  cfg.s1 = -1.5;
  cfg.sigma_list = {-1.5, -2.0, -3.0};
  cfg.K = 3.0;
  cfg.beta = 2.0;
  cfg.eps_list = {1.0 / 32, 1.0 / 64, 1.0 / 128};
  cfg.profile = Bump(0.0, 1.2, 1.0);
  cfg.solver.num_snapshots = 4;

  auto rep2 = run_inflation(cfg);
  bool pass5 = rep2.data_fit && std::abs(rep2.data_fit->slope - 0.5) <= 0.1;
  std::string detail = "beta=2 data slope " + fmt(rep2.data_fit ? rep2.data_fit->slope : 0.0) +
                       "~0.5, ratio slopes";
  for (auto& f : rep2.ratio_fits) {
    pass5 = pass5 && std::abs(f.slope + 0.5) <= 0.1;
    detail += " " + fmt(f.slope);
  }
  detail += "~-0.5";

  // beta < 2: the ratio at sigma = s1. The low-frequency H^sigma weight on the
  // emergent mean converges slowly in eps, so a wide profile at unit amplitude
  // keeps its content at the smallest physical frequencies.
  cfg.beta = 1.7;
  cfg.sigma_list = {-1.5};
  cfg.profile = Bump(0.0, 1.4, 1.0);
  cfg.boost = 1.0;
  auto rep17 = run_inflation(cfg);
  bool pass17 = !rep17.ratio_fits.empty();
  for (auto& f : rep17.ratio_fits) pass17 = pass17 && std::abs(f.slope + 0.3) <= 0.15;
  detail += "; beta=1.7 ratio slope";
  for (auto& f : rep17.ratio_fits) detail += " " + fmt(f.slope);
  detail += "~-0.3";
  report(5, pass5 && pass17, detail);

  // criterion 6 reuses the beta=2 sweep: sigma = -2 is index 1
  const bool have = rep2.a0_fits.size() == 3;
  const double slope6 = have ? rep2.a0_fits[1].slope : 0.0;
  report(6, have && slope6 >= 0.9,
         "||v - a0||_{H^-2} slope " + fmt(slope6) + " >= 0.9");
}

// ---- 7: KP residual order -----------------------------------------------

void criterion_7() {
  const double t0 = now_seconds();
  Bump px(0.0, 1.2, 1.0), py(0.0, 1.2, 1.0);
  std::vector<double> eps_list{1.0 / 4, 1.0 / 6, 1.0 / 8};
  bool pass = true;
  std::string detail;
  for (int lambda : {1, -1}) {
    KPPhase phase(1, 1, lambda);
    std::vector<double> residuals;
    for (double eps : eps_list) {
      const int n = static_cast<int>(std::lround(1.0 / eps));
      auto grid = make_grid2d(n, 8, phase.k1, phase.k2);
      KPAnsatz ansatz(px, py, phase, eps);
      const double dt_fd = 0.05 * std::pow(eps, 1.25);
      residuals.push_back(residual_kp_checked(ansatz, 0.2, grid, dt_fd).norm_h2eps);
    }
    auto fit = fit_power_law(eps_list, residuals);
    pass = pass && fit.slope >= 2.5;
    if (!detail.empty()) detail += ", ";
    detail += "lambda=" + std::to_string(lambda) + " slope " + fmt(fit.slope);
  }
  const double dt = now_seconds() - t0;
  report(7, pass && dt < 900.0, detail + " >= 2.5, " + fmt(dt) + "s < 900s");
}

// ---- 8: KP norm inflation -----------------------------------------------

void criterion_8() {
  InflationConfig cfg;
  cfg.equation = Equation::kp;
  cfg.s1 = -1.0;
  cfg.s2 = -0.25;
  cfg.sigma_pairs = {{-1.0, -0.25}};
  cfg.eps_list = {1.0 / 4, 1.0 / 6, 1.0 / 8};
  cfg.profile = Bump(0.0, 1.2, 1.0);
  cfg.profile_y = Bump(0.0, 1.2, 1.0);
  cfg.phase = KPPhase(1, 1, 1);
  cfg.oversample = 8;
  cfg.solver.num_snapshots = 2;
  // Amplified profile: the emergent mean grows quadratically with amplitude
  // while the oscillatory part grows linearly, so the ratio's decay only
  // becomes visible at coarse eps once the mean dominates the H^sigma norm.
  cfg.boost = 6.0;

  auto rep = run_inflation(cfg);
  bool all_ok = true;
  for (auto& r : rep.rows) all_ok = all_ok && r.ok;
  const bool have = !rep.ratio_fits.empty();
  const double slope = have ? rep.ratio_fits[0].slope : 0.0;
  report(8, all_ok && have && std::abs(slope + 0.5) <= 0.2,
         "KP ratio slope " + fmt(slope) + " within -0.5 +- 0.2");
}

// ---- 9: conservation and unitarity --------------------------------------

void criterion_9() {
  Bump profile(0.0, 1.2, 1.0);
  const double eps = 1.0 / 32;
  auto grid = make_grid(32, 16);
  KdVAnsatz ansatz(profile, eps);
  auto u0 = assemble_uapp_kdv(ansatz, 0.0, grid);

  SolverConfig cfg;
  cfg.final_time = 0.4;
  cfg.dt_factor = 0.01;
  auto traj = solve_kdv(u0, eps, cfg);
  const double mass = traj.mass_drift();
  const double l2 = traj.l2_drift();

  SolverConfig lin = cfg;
  lin.nonlinear_coeff = 0.0;
  lin.dt_factor = 0.1;
  auto ltraj = solve_kdv(u0, eps, lin);
  const double iso = ltraj.l2_drift();

  report(9, mass <= 1e-7 && l2 <= 1e-7 && iso <= 1e-12,
         "mass drift " + fmt(mass) + ", L2 drift " + fmt(l2) +
             " <= 1e-7; isometry defect " + fmt(iso) + " <= 1e-12");
}

// ---- 10: resonance oracle -----------------------------------------------

void criterion_10() {
  bool pairs_ok = true, triples_ok = true, zero_ok = true;
  for (long j = -50; j <= 50; ++j)
    for (long k = -50; k <= 50; ++k) {
      // independent oracle: the dispersion sum omega(j)+omega(k)-omega(j+k)
      const long lhs = j * j * j + k * k * k - (j + k) * (j + k) * (j + k);
      if (resonance_pair(j, k) != (lhs == 0)) pairs_ok = false;
    }
  for (long a = -50; a <= 50; ++a)
    for (long b = a; b <= 50; ++b)
      for (long c = b; c <= 50; ++c) {
        const bool res = (a + b + c == 0) && (a * a * a + b * b * b + c * c * c == 0);
        if (resonance_triple(a, b, c) != res) triples_ok = false;
        if (res && a != 0 && b != 0 && c != 0) zero_ok = false;
      }
  report(10, pairs_ok && triples_ok && zero_ok,
         std::string("pair/triple tables match exhaustive evaluation for |k| <= 50; ") +
             "every resonant triple contains a zero");
}

// ---- 11: KP zero mode, closed form vs quadrature ------------------------

void criterion_11() {
  Bump px(0.0, 1.2, 1.0), py(0.0, 1.2, 1.0);
  double worst = 0.0;
  for (int lambda : {1, -1}) {
    KPPhase phase(1, 1, lambda);
    const double eps = 1.0 / 8;
    KPAnsatz ansatz(px, py, phase, eps);
    const double tau = choose_tau_kp(px, phase);
    auto grid = make_grid2d(8, 8, phase.k1, phase.k2);

    // d/dt a0 = -k1^2 d/dx (a1^2), integrated with 64-node Gauss-Legendre
    // panels from the closed-form a1
    const double c = phase.transport_speed();
    const double k1 = phase.k1;
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    double err2 = 0.0;
    for (std::size_t jy = 0; jy < grid.num_points_y; ++jy) {
      const double y = grid.point_y(jy);
      const double Y = py.value(y);
      for (std::size_t ix = 0; ix < grid.num_points_x; ++ix) {
        const double x = grid.point_x(ix);
        // dx a1^2 evaluated via the profile derivative (a1 = X(x+ct) Y(y))
        double acc = 0.0;
        const int panels = 256;
        for (int p = 0; p < panels; ++p) {
          const double s0 = tau * p / panels, s1 = tau * (p + 1) / panels;
          const double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
          for (int q = 0; q < 4; ++q) {
            const double s = mid + half * gx[q];
            const double arg = x + c * (tau - s);
            acc += gw[q] * half * 2.0 * px.value(arg) * px.d1(arg);
          }
        }
        const double quadrature = -k1 * k1 * Y * Y * acc;
        err2 += std::pow(quadrature - ansatz.a0_at(tau, x, y), 2);
      }
    }
    const double l2 = std::sqrt(kPeriod * kPeriod * err2 / grid.total_points());
    worst = std::max(worst, l2);
  }
  report(11, worst <= 1e-10, "closed form vs quadrature L2 difference " + fmt(worst) +
                                 " <= 1e-10");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criteria_5_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (g_failures) {
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
