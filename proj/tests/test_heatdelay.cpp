#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "delaykit/errors.hpp"
#include "delaykit/heatdelay.hpp"
#include "delaykit/ivpsolver.hpp"

using namespace delaykit;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("sine coefficients pick out an exact mode") {
  const auto c = fourier_coeffs([](double x) { return std::sin(3.0 * x); }, 6, 64);
  for (int n = 1; n <= 6; ++n) {
    CHECK(std::abs(c[n - 1] - (n == 3 ? 1.0 : 0.0)) <= 1e-12);
  }
}

TEST_CASE("sine coefficients of zero vanish") {
  const auto c = fourier_coeffs([](double) { return 0.0; }, 8, 64);
  for (double v : c) CHECK(v == 0.0);
}

TEST_CASE("parabolic profile has the textbook odd-mode coefficients") {
  // f = x (pi - x): coefficients 8 / (pi n^3) for odd n, 0 for even n.
  const auto c = fourier_coeffs([](double x) { return x * (kPi - x); }, 64, 64);
  for (int n = 1; n <= 64; ++n) {
    const double want = (n % 2 == 1) ? 8.0 / (kPi * n * n * n) : 0.0;
    CHECK(std::abs(c[n - 1] - want) <= 1e-10);
  }
}

TEST_CASE("undelayed single mode decays exactly") {
  HeatProblem p;
  p.a = 1.0;
  p.b = 0.0;
  p.tau = 1.0;
  p.phi = [](double x, double) { return std::sin(x); };
  SpectralConfig cfg;
  cfg.n_modes = 8;
  const auto xs = linspace(0.0, kPi, 21);
  const auto ts = linspace(0.0, 2.0, 6);
  const auto g = solve_spectral(p, cfg, xs, ts);
  for (std::size_t j = 0; j < g.ts.size(); ++j)
    for (std::size_t i = 0; i < g.xs.size(); ++i)
      CHECK(std::abs(g.values[j][i] - std::exp(-g.ts[j]) * std::sin(g.xs[i])) <= 1e-6);
}

TEST_CASE("boundary values are exactly zero") {
  HeatProblem p;
  p.a = 0.8;
  p.b = 0.4;
  p.tau = 1.0;
  p.phi = [](double x, double t) { return std::sin(2.0 * x) * (1.0 + t); };
  p.psi = [](double x, double t) { return std::sin(x) * std::cos(t); };
  SpectralConfig cfg;
  cfg.n_modes = 8;
  const auto xs = linspace(0.0, kPi, 9);
  const auto ts = linspace(0.0, 2.0, 4);
  const auto g = solve_spectral(p, cfg, xs, ts);
  for (std::size_t j = 0; j < g.ts.size(); ++j) {
    CHECK(g.values[j][0] == 0.0);
    CHECK(g.values[j][8] == 0.0);
  }
}

TEST_CASE("single-mode data stays on its mode") {
  HeatProblem p;
  p.a = 1.0;
  p.b = 0.3;
  p.tau = 1.0;
  p.phi = [](double x, double) { return std::sin(2.0 * x); };
  SpectralConfig cfg;
  cfg.n_modes = 6;
  const auto ts = linspace(0.0, 1.5, 4);
  // probe at x where modes 1..6 all differ from zero except the driven one
  const auto xs = linspace(0.0, kPi, 13);
  const auto g = solve_spectral(p, cfg, xs, ts);
  // recover mode amplitudes from the grid by discrete sine projection
  for (int n = 1; n <= 6; ++n) {
    if (n == 2) continue;
    for (std::size_t j = 0; j < g.ts.size(); ++j) {
      double amp = 0.0;
      for (std::size_t i = 1; i + 1 < g.xs.size(); ++i) {
        amp += g.values[j][i] * std::sin(n * g.xs[i]);
      }
      amp *= 2.0 / (g.xs.size() - 1);
      CHECK(std::abs(amp) <= 1e-8);
    }
  }
}

TEST_CASE("delayed single mode matches the scalar method-of-steps oracle") {
  HeatProblem p;
  p.a = 1.0;
  p.b = 0.5;
  p.tau = 1.0;
  p.phi = [](double x, double) { return std::sin(2.0 * x); };
  SpectralConfig cfg;
  cfg.n_modes = 8;
  const auto ts = linspace(0.0, 2.0, 9);
  const double xs[1] = {kPi / 4.0};
  const auto g = solve_spectral(p, cfg, std::span<const double>(xs, 1), ts);

  DelaySystem mode;
  mode.a0 = Matrix::from_rows({{-4.0}});
  mode.a1 = Matrix::from_rows({{0.5}});
  mode.tau = 1.0;
  mode.history = [](double) { return Vector::from({1.0}); };
  const auto oracle = solve_method_of_steps(mode, 2.0, 1.0 / 400.0, ts);
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double want = oracle.values[j][0] * std::sin(2.0 * xs[0]);
    CHECK(std::abs(g.values[j][0] - want) <= 1e-7);
  }
}

TEST_CASE("history-value and history-derivative spectral routes agree") {
  HeatProblem p;
  p.a = 1.0;
  p.b = 0.5;
  p.tau = 1.0;
  p.phi = [](double x, double t) { return std::sin(x) * std::exp(t) + std::sin(2.0 * x) * t; };
  p.phi_t = [](double x, double t) { return std::sin(x) * std::exp(t) + std::sin(2.0 * x); };
  SpectralConfig value_route;
  value_route.n_modes = 6;
  SpectralConfig deriv_route = value_route;
  deriv_route.route = SpectralRoute::HistoryDerivative;
  const auto xs = linspace(0.0, kPi, 9);
  const auto ts = linspace(0.0, 2.0, 5);
  const auto a = solve_spectral(p, value_route, xs, ts);
  const auto b = solve_spectral(p, deriv_route, xs, ts);
  for (std::size_t j = 0; j < ts.size(); ++j)
    for (std::size_t i = 0; i < xs.size(); ++i)
      CHECK(std::abs(a.values[j][i] - b.values[j][i]) <= 1e-7);
}

TEST_CASE("derivative route without phi_t is unsupported") {
  HeatProblem p;
  p.a = 1.0;
  p.b = 0.2;
  p.tau = 1.0;
  p.phi = [](double x, double) { return std::sin(x); };
  SpectralConfig cfg;
  cfg.route = SpectralRoute::HistoryDerivative;
  const auto xs = linspace(0.0, kPi, 5);
  const auto ts = linspace(0.0, 1.0, 3);
  CHECK_THROWS_AS(solve_spectral(p, cfg, xs, ts), UnsupportedError);
}

TEST_CASE("incompatible history is rejected") {
  HeatProblem p;
  p.phi = [](double, double) { return 1.0; };  // nonzero on the boundary
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("finite-difference oracle reproduces the classical benchmark") {
  HeatProblem p;
  p.a = 1.0;
  p.b = 0.0;
  p.tau = 1.0;
  p.phi = [](double x, double) { return std::sin(x); };
  const auto g = solve_fd_oracle(p, 40, 1.0 / 50.0, 1.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.ts.size(); ++j)
    for (std::size_t i = 0; i < g.xs.size(); ++i)
      worst = std::max(worst,
                       std::abs(g.values[j][i] - std::exp(-g.ts[j]) * std::sin(g.xs[i])));
  const double dx = kPi / 41.0;
  CHECK(worst <= 2.0 * dx * dx);
}

TEST_CASE("doubling the interior resolution quarters the error") {
  HeatProblem p;
  p.a = 1.0;
  p.b = 0.5;
  p.tau = 1.0;
  p.phi = [](double x, double t) { return std::sin(x) * (1.0 + 0.5 * t); };
  SpectralConfig cfg;
  cfg.n_modes = 16;

  auto err_at = [&](int m) {
    const auto fd = solve_fd_oracle(p, m, 1.0 / 100.0, 1.0);
    std::vector<double> ts = {0.25, 0.5, 1.0};
    const auto sp = solve_spectral(p, cfg, fd.xs, ts);
    double worst = 0.0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const auto fj = static_cast<std::size_t>(std::llround(ts[j] * 100.0));
      for (std::size_t i = 0; i < fd.xs.size(); ++i)
        worst = std::max(worst, std::abs(fd.values[fj][i] - sp.values[j][i]));
    }
    return worst;
  };
  const double coarse = err_at(24);
  const double fine = err_at(49);  // dx exactly halves: 25 -> 50 intervals
  CHECK(coarse / fine > 2.5);
  CHECK(coarse / fine < 6.5);
}

TEST_CASE("spectral and finite-difference routes agree on smooth data") {
  HeatProblem p;
  p.a = 1.0;
  p.b = 0.5;
  p.tau = 1.0;
  p.phi = [](double x, double t) { return x * (kPi - x) * (1.0 + t); };
  p.psi = [](double x, double t) { return std::sin(x) * std::cos(t); };
  const auto fd = solve_fd_oracle(p, 100, 1.0 / 200.0, 2.0);
  SpectralConfig cfg;
  cfg.n_modes = 48;
  std::vector<double> ts;
  for (std::size_t j = 0; j < fd.ts.size(); j += 50) ts.push_back(fd.ts[j]);
  const auto sp = solve_spectral(p, cfg, fd.xs, ts);
  double worst = 0.0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const std::size_t fj = j * 50;
    for (std::size_t i = 0; i < fd.xs.size(); ++i)
      worst = std::max(worst, std::abs(fd.values[fj][i] - sp.values[j][i]));
  }
  CHECK(worst <= std::max(1e-4, 2.0 * fd.dx * fd.dx));
}

TEST_CASE("spectral vs finite-difference across a family of smooth problems") {
  struct Case {
    double a, b;
    std::function<double(double, double)> phi;
    std::function<double(double, double)> psi;
  };
  const std::vector<Case> cases = {
      {1.0, 0.4, [](double x, double t) { return std::sin(x) * (1.0 + 0.5 * t); }, nullptr},
      {1.0, 0.5, [](double x, double) { return x * (kPi - x); },
       [](double x, double t) { return std::sin(2.0 * x) * std::cos(t); }},
      {1.0, -0.3, [](double x, double t) { return std::sin(3.0 * x) * std::exp(t); },
       [](double x, double t) { return std::sin(x) * std::sin(t); }},
      {0.8, 0.7, [](double x, double t) { return std::sin(x) * std::exp(t); },
       [](double x, double t) { return std::sin(3.0 * x) * (1.0 - 0.5 * t); }},
      {1.2, 0.2, [](double x, double t) { return std::sin(x) + 0.3 * std::sin(2.0 * x) * t; },
       [](double x, double t) { return 0.2 * std::sin(2.0 * x) * (1.0 + t); }},
  };
  SpectralConfig cfg;
  cfg.n_modes = 24;
  for (const auto& c : cases) {
    HeatProblem p;
    p.a = c.a;
    p.b = c.b;
    p.tau = 1.0;
    p.phi = c.phi;
    p.psi = c.psi;
    const auto fd = solve_fd_oracle(p, 60, 1.0 / 100.0, 2.0);
    std::vector<double> ts = {0.5, 1.0, 1.5, 2.0};
    const auto sp = solve_spectral(p, cfg, fd.xs, ts);
    double worst = 0.0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const auto fj = static_cast<std::size_t>(std::llround(ts[j] * 100.0));
      for (std::size_t i = 0; i < fd.xs.size(); ++i)
        worst = std::max(worst, std::abs(fd.values[fj][i] - sp.values[j][i]));
    }
    CHECK(worst <= std::max(1e-3, 3.0 * fd.dx * fd.dx));
  }
}

TEST_CASE("small delays approach the absorbed-coefficient heat solution") {
  // smoke check: per mode, c' = -c + b c(t - tau) with tau -> 0 behaves like
  // c' = (b - 1) c, so u is close to exp((b - 1) t) sin x
  HeatProblem p;
  p.a = 1.0;
  p.b = 0.25;
  p.tau = 0.01;
  p.phi = [](double x, double) { return std::sin(x); };
  SpectralConfig cfg;
  cfg.n_modes = 4;
  const auto xs = linspace(0.0, kPi, 9);
  const auto ts = linspace(0.0, 1.0, 3);
  const auto g = solve_spectral(p, cfg, xs, ts);
  for (std::size_t j = 0; j < ts.size(); ++j)
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double limit = std::exp((p.b - 1.0) * g.ts[j]) * std::sin(g.xs[i]);
      CHECK(std::abs(g.values[j][i] - limit) <= 2e-2);
    }
}

TEST_CASE("runaway growth trips the divergence guard") {
  HeatProblem p;
  p.a = 0.2;
  p.b = 4.0;  // delayed term dominates and feeds back positively
  p.tau = 1.0;
  p.phi = [](double x, double) { return std::sin(x); };
  CHECK_THROWS_AS(solve_fd_oracle(p, 8, 0.5, 40.0), DivergedError);
}

TEST_CASE("oracle validates its arguments") {
  HeatProblem p;
  p.phi = [](double x, double) { return std::sin(x); };
  CHECK_THROWS_AS(solve_fd_oracle(p, 4, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_fd_oracle(p, 16, 0.3, 1.0), std::invalid_argument);
}
