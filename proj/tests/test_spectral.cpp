#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "semiwave/field.hpp"
#include "semiwave/grid.hpp"
#include "semiwave/norms.hpp"
#include "semiwave/profile.hpp"

using namespace semiwave;
using std::numbers::pi;

TEST_CASE("grid sizing follows the carrier rule") {
  auto g = make_grid(16, 16);
  CHECK(g.num_points == 512);
  CHECK(g.eps() == Catch::Approx(1.0 / 16.0));
  auto g2 = make_grid(2, 8);
  CHECK(g2.num_points == 64);
  auto g3 = make_grid(16, 16, 3);  // 24*3*16 = 1152 -> 2048
  CHECK(g3.num_points == 2048);
  CHECK_THROWS(make_grid(1, 16));
  CHECK_THROWS(make_grid(16, 4));
}

TEST_CASE("2d grid respects the memory cap") {
  auto g = make_grid2d(4, 8, 1, 1);
  CHECK(g.num_points_x * g.num_points_y == g.total_points());
  CHECK(g.num_points_y >= 24u * 16u);  // 24 * k2 * N^2
  CHECK_THROWS(make_grid2d(64, 16, 1, 1, 1u << 20));
}

TEST_CASE("fft round trip and mode access") {
  auto g = make_grid(4, 16);
  auto f = Field1D::from_function(g, [](double x) { return std::cos(3 * x) + 0.5 * std::sin(x); });
  CHECK(std::abs(f.mode(3) - cd(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(f.mode(-3) - cd(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(f.mode(1) - cd(0.0, -0.25)) < 1e-12);
  auto back = f.samples();
  for (std::size_t i = 0; i < g.num_points; ++i) {
    double x = g.point(i);
    CHECK(back[i].real() == Catch::Approx(std::cos(3 * x) + 0.5 * std::sin(x)).margin(1e-12));
    CHECK(std::abs(back[i].imag()) < 1e-12);
  }
}

TEST_CASE("spectral derivative is exact on trig polynomials") {
  auto g = make_grid(4, 16);
  auto f = Field1D::from_function(g, [](double x) { return std::sin(5 * x); });
  auto d3 = f.derivative(3);
  auto s = d3.samples();
  for (std::size_t i = 0; i < g.num_points; i += 7) {
    double x = g.point(i);
    CHECK(s[i].real() == Catch::Approx(-125.0 * std::cos(5 * x)).margin(1e-9));
  }
}

TEST_CASE("antiderivative inverts the derivative on zero-mean fields") {
  auto g = make_grid(4, 16);
  auto f = Field1D::from_function(g, [](double x) { return std::cos(2 * x) + std::sin(7 * x); });
  auto rt = f.derivative(1).antiderivative();
  for (int k = -8; k <= 8; ++k)
    CHECK(std::abs(rt.mode(k) - f.mode(k)) < 1e-12);
  auto with_mean = Field1D::from_function(g, [](double) { return 1.0; });
  CHECK_THROWS(with_mean.antiderivative());
}

TEST_CASE("parseval: l2 norm matches quadrature") {
  auto g = make_grid(4, 16);
  Bump b{0.0, 0.7, 1.3};
  auto f = Field1D::from_function(g, [&](double x) { return b.value(x); });
  // trapezoid on the fine grid is spectrally accurate for smooth periodic f
  double acc = 0.0;
  for (std::size_t i = 0; i < g.num_points; ++i) {
    double v = b.value(g.point(i));
    acc += v * v;
  }
  acc *= g.spacing();
  CHECK(l2_norm(f) == Catch::Approx(std::sqrt(acc)).epsilon(1e-10));
}

TEST_CASE("sobolev norm of a single harmonic") {
  auto g = make_grid(4, 16);
  auto f = Field1D::from_function(g, [](double x) { return std::cos(4 * x); });
  // cos(4x) has coeffs 1/2 at k = +-4; ||f||_{H^s}^2 = 2pi * 2 * (1/4) (1+16)^s
  for (double s : {-2.0, -1.0, 0.0, 1.5}) {
    double want = std::sqrt(2 * pi * 0.5 * std::pow(17.0, s));
    CHECK(norm(f, NormSpec::sobolev(s)) == Catch::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("semiclassical norm interpolates between scales") {
  auto g = make_grid(8, 16);
  double eps = g.eps();
  auto f = Field1D::from_function(g, [eps](double x) { return std::cos(x / eps); });
  // ||f||^2 + ||eps^k d^k f||^2 with d^k cos(Nx) giving N^k and eps N = 1
  double l2sq = 2 * pi * 0.5;
  for (int k : {1, 2}) {
    double want = std::sqrt(l2sq + l2sq);  // eps^k N^k = 1
    CHECK(norm(f, NormSpec::semiclassical(k, eps)) == Catch::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("anisotropic norm on a 2d harmonic") {
  auto g = make_grid2d(2, 8, 1, 1);
  auto f = Field2D::from_function(g, [](double x, double y) { return std::cos(2 * x + 3 * y); });
  // coeffs 1/2 at (2,3) and (-2,-3); weight (1+4)^{s1} (1+9)^{s2}
  double s1 = -1.0, s2 = -0.25;
  double want = std::sqrt(4 * pi * pi * 0.5 * std::pow(5.0, s1) * std::pow(10.0, s2));
  CHECK(norm(f, NormSpec::aniso(s1, s2)) == Catch::Approx(want).epsilon(1e-10));
}

TEST_CASE("dealiasing zeroes the top third") {
  auto g = make_grid(4, 16);  // n = 128
  auto f = Field1D::from_function(g, [](double x) { return std::cos(60 * x) + std::cos(10 * x); });
  auto d = f.dealiased();
  CHECK(std::abs(d.mode(60)) == 0.0);
  CHECK(std::abs(d.mode(10) - cd(0.5, 0.0)) < 1e-12);
}

TEST_CASE("2d partial derivatives and x-antiderivative") {
  auto g = make_grid2d(2, 8, 1, 1);
  auto f = Field2D::from_function(g, [](double x, double y) { return std::sin(x) * std::cos(2 * y); });
  auto fx = f.derivative_x(1);
  auto fyy = f.derivative_y(2);
  auto sx = fx.samples();
  auto syy = fyy.samples();
  std::size_t idx = 5 * g.num_points_x + 3;
  double x = g.point_x(3), y = g.point_y(5);
  CHECK(sx[idx].real() == Catch::Approx(std::cos(x) * std::cos(2 * y)).margin(1e-10));
  CHECK(syy[idx].real() == Catch::Approx(-4.0 * std::sin(x) * std::cos(2 * y)).margin(1e-10));
  auto rt = fx.antiderivative_x();
  auto srt = rt.samples();
  CHECK(srt[idx].real() == Catch::Approx(std::sin(x) * std::cos(2 * y)).margin(1e-10));
}

TEST_CASE("bump profile derivatives match finite differences") {
  Bump b{0.3, 0.9, 2.0};
  const double h = 1e-5;
  for (double x : {-0.4, 0.0, 0.31, 1.0, 1.19}) {
    double fd1 = (b.value(x + h) - b.value(x - h)) / (2 * h);
    double fd2 = (b.value(x + h) - 2 * b.value(x) + b.value(x - h)) / (h * h);
    CHECK(b.d1(x) == Catch::Approx(fd1).margin(1e-6));
    CHECK(b.d2(x) == Catch::Approx(fd2).margin(1e-4));
  }
  CHECK(b.value(0.3 + 0.9) == 0.0);
  CHECK(b.value(0.3 + 2 * pi) == Catch::Approx(b.value(0.3)));
  CHECK_THROWS(Bump(0.0, 2.0, 1.0));
}
