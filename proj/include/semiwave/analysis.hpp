#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "semiwave/field.hpp"
#include "semiwave/norms.hpp"
#include "semiwave/profile.hpp"
#include "semiwave/wkb_kdv.hpp"

namespace semiwave {

/// Demodulated amplitude of harmonic j: the window |k - jN| < N/2 shifted
/// down to baseband and rotated by the carrier's time phase (jN·t for KdV,
/// passed in by the caller as `time_phase`; harmonic 0 is not demodulated).
inline Field1D extract_harmonic(const Field1D& f, int j, double eps, double time_phase = 0.0) {
  const auto& grid = f.grid();
  const long n_carrier = std::lround(1.0 / eps);
  if (grid.carrier_n != n_carrier)
    throw std::invalid_argument("extract_harmonic: grid not commensurate with eps");
  if (std::abs(j) > 3) throw std::invalid_argument("extract_harmonic: |j| <= 3");
  const long shift = j * n_carrier;
  const long half = n_carrier / 2;  // window |k - jN| < N/2, half-open
  Field1D out(grid);
  const cd rot = std::polar(1.0, -static_cast<double>(j) * n_carrier * time_phase);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const long k = f.wavenumber(i);
    const long d = k - shift;
    if (d >= -half && d < half + (n_carrier % 2)) {
      // place at baseband wavenumber d
      out.set_mode(d, f.coeffs()[i] * (j == 0 ? cd(1.0) : rot));
    }
  }
  return out;
}

struct HarmonicDecomposition {
  double eps = 0.0;
  double time_phase = 0.0;
  std::vector<int> harmonics;        // j values, -3..3
  std::vector<Field1D> amplitudes;   // demodulated, baseband
  Field1D residual;                  // everything outside all windows

  const Field1D& amplitude(int j) const {
    for (std::size_t i = 0; i < harmonics.size(); ++i)
      if (harmonics[i] == j) return amplitudes[i];
    throw std::out_of_range("HarmonicDecomposition: no such harmonic");
  }

  /// Remodulated sum plus residual; equals the decomposed field.
  Field1D reconstruct() const {
    Field1D acc = residual;
    const long n_carrier = std::lround(1.0 / eps);
    for (std::size_t i = 0; i < harmonics.size(); ++i) {
      const int j = harmonics[i];
      const long shift = j * n_carrier;
      const cd rot = std::polar(1.0, static_cast<double>(j) * n_carrier * time_phase);
      const Field1D& a = amplitudes[i];
      for (std::size_t m = 0; m < a.size(); ++m) {
        const long k = a.wavenumber(m);
        if (a.coeffs()[m] == cd{}) continue;
        acc.set_mode(k + shift, acc.mode(k + shift) + a.coeffs()[m] * (j == 0 ? cd(1.0) : rot));
      }
    }
    return acc;
  }
};

inline HarmonicDecomposition decompose(const Field1D& f, double eps, double time_phase = 0.0) {
  HarmonicDecomposition out;
  out.eps = eps;
  out.time_phase = time_phase;
  out.residual = f;
  const long n_carrier = std::lround(1.0 / eps);
  const long half = n_carrier / 2;
  for (int j = -3; j <= 3; ++j) {
    out.harmonics.push_back(j);
    out.amplitudes.push_back(extract_harmonic(f, j, eps, time_phase));
  }
  // zero every windowed frequency in the residual
  Field1D res = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const long k = f.wavenumber(i);
    for (int j = -3; j <= 3; ++j) {
      const long d = k - j * n_carrier;
      if (d >= -half && d < half + (n_carrier % 2)) {
        res.coeffs()[i] = cd{};
        break;
      }
    }
  }
  out.residual = res;
  return out;
}

struct ErrorSeries {
  std::vector<double> times;
  std::vector<double> values;
  double sup = 0.0;
};

/// ||u(t) - u_app(t)||_{H^2_eps} at every snapshot of the trajectory.
template <class Traj>
ErrorSeries wkb_error_kdv(const Traj& traj, const KdVAnsatz& ansatz) {
  ErrorSeries out;
  const NormSpec h2 = NormSpec::semiclassical(2, ansatz.eps());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& u = traj.snapshots[i];
    Field1D diff = u - assemble_uapp_kdv(ansatz, traj.times[i], u.grid());
    const double v = norm(diff, h2);
    out.times.push_back(traj.times[i]);
    out.values.push_back(v);
    out.sup = std::max(out.sup, v);
  }
  return out;
}

struct PowerLawFit {
  std::vector<double> eps_list;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line through (log eps, log value).
inline PowerLawFit fit_power_law(const std::vector<double>& eps_list,
                                 const std::vector<double>& values) {
  if (eps_list.size() != values.size() || eps_list.size() < 3)
    throw std::invalid_argument("fit_power_law: need >= 3 matching points");
  const std::size_t n = eps_list.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(eps_list[i] > 0.0) || !(values[i] > 0.0))
      throw std::invalid_argument("fit_power_law: nonpositive input");
    lx[i] = std::log(eps_list[i]);
    ly[i] = std::log(values[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += lx[i]; my += ly[i]; }
  mx /= n; my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_power_law: degenerate eps list");
  PowerLawFit fit;
  fit.eps_list = eps_list;
  fit.values = values;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

struct Lemma51Result {
  PowerLawFit fit;
  double predicted_exponent = 0.0;
  std::vector<long> rounded_modes;  // oscillation mode actually used, per eps
};

namespace detail {

/// H^s norm of f(x) = sum d_m e^{imx/P} on the torus of period 2 pi P:
/// ||f||^2 = 2 pi P sum (1 + (m/P)^2)^s |d_m|^2.
inline double hs_norm_dilated(const std::vector<cd>& coeffs, double P, double s) {
  const std::size_t n = coeffs.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = (i < n / 2) ? static_cast<double>(i)
                                 : static_cast<double>(i) - static_cast<double>(n);
    const double xi = m / P;
    acc += std::pow(1.0 + xi * xi, s) * std::norm(coeffs[i]);
  }
  return std::sqrt(kPeriod * P * acc);
}

}  // namespace detail

/// Torus analogue of the oscillatory-dilation scaling: measures
/// I(x) = f(x eps^{(2-beta)/3}) e^{i kappa x / eps^{(1+beta)/3}} in H^s on a
/// period large enough for the dilated support, and fits the norm against the
/// predicted exponent. Oscillation frequency rounded to the nearest mode.
inline Lemma51Result lemma51_measure(const Bump& profile, double beta, double s, double kappa,
                                     const std::vector<double>& eps_list) {
  if (!(beta > 0.0 && beta <= 2.0)) throw std::invalid_argument("lemma51_measure: 0 < beta <= 2");
  if (s > 0.0) throw std::invalid_argument("lemma51_measure: s <= 0 required");
  Lemma51Result out;
  std::vector<double> norms;
  for (double eps : eps_list) {
    const double lam = std::pow(eps, (2.0 - beta) / 3.0);  // dilation: f(lam x)
    const double freq = kappa / std::pow(eps, (1.0 + beta) / 3.0);
    // period 2 pi P with the dilated support |x| <= hw/lam well inside
    const double need = profile.half_width / lam / kPeriod * 2.0;  // in units of P
    const long P = static_cast<long>(next_pow2(static_cast<std::size_t>(std::ceil(std::max(1.0, 1.5 * need)))));
    const long m_osc = std::lround(freq * P);
    // dilated profile occupies ~P*lam modes; oscillation sits at m_osc
    const std::size_t pts = next_pow2(static_cast<std::size_t>(
        16 * (std::labs(m_osc) + 64 * std::max<long>(1, static_cast<long>(P * lam) + 1))));
    if (pts > (1u << 24)) throw std::invalid_argument("lemma51_measure: grid overflow");
    std::vector<cd> c(pts);
    const double h = kPeriod * P / pts;
    for (std::size_t i = 0; i < pts; ++i) {
      const double x = -kPeriod * P / 2.0 + i * h;
      if (std::abs(lam * x) >= profile.half_width) continue;
      c[i] = profile.value(profile.center + lam * x) *
             std::polar(1.0, static_cast<double>(m_osc) * x / P);
    }
    detail::fft_forward_1d(c);
    const double inv = 1.0 / pts;
    for (auto& v : c) v *= inv;
    norms.push_back(detail::hs_norm_dilated(c, static_cast<double>(P), s));
    out.rounded_modes.push_back(m_osc);
  }
  out.fit = fit_power_law(eps_list, norms);
  if (kappa != 0.0)
    out.predicted_exponent = (beta - 2.0) / 6.0 + std::abs(s) * (beta + 1.0) / 3.0;
  else
    out.predicted_exponent = (beta < 2.0) ? (beta - 2.0) / 6.0 : 0.0;
  return out;
}

/// || eps^{-1} * zero-mode window of u(t)  -  a0(t) ||_{L2}.
inline double zero_mode_check(const Field1D& u, const KdVAnsatz& ansatz, double t) {
  const double eps = ansatz.eps();
  Field1D z = cd(1.0 / eps) * extract_harmonic(u, 0, eps);
  Field1D a0 = Field1D::from_real_samples(u.grid(), ansatz.a0(t, u.grid()));
  // compare inside the window only; a0's own tail above N/2 is not part of
  // what the window can see
  Field1D a0w = extract_harmonic(a0, 0, eps);
  return l2_norm(z - a0w);
}

}  // namespace semiwave
