#include "delaykit/heatdelay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "delaykit/errors.hpp"
#include "delaykit/fundsol.hpp"
#include "delaykit/ivpsolver.hpp"
#include "delaykit/quadrature.hpp"

namespace delaykit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// (2/pi) * integral of f(xi) sin(n xi) over [0, pi] with enough panels to
// resolve the oscillation of mode n.
double sine_coefficient(const std::function<double(double)>& f, int n, int quad_points_x) {
  static constexpr int kOrder = 8;
  const int panels = std::max(n, (quad_points_x + kOrder - 1) / kOrder);
  const GaussLegendre rule(kOrder);
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = kPi * p / panels;
    const double b = kPi * (p + 1) / panels;
    acc += gauss_panel(rule, [&](double xi) { return f(xi) * std::sin(n * xi); }, a, b);
  }
  return acc * (2.0 / kPi);
}

}  // namespace

void HeatProblem::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("HeatProblem: tau must be > 0");
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("HeatProblem: non-finite coefficient");
  }
  if (!phi) throw std::invalid_argument("HeatProblem: history phi is required");
  double scale = 1.0;
  for (double t : {-tau, -0.5 * tau, 0.0}) {
    scale = std::max({scale, std::abs(phi(0.5 * kPi, t))});
  }
  for (double t : {-tau, -0.5 * tau, 0.0}) {
    if (std::abs(phi(0.0, t)) > 1e-9 * scale || std::abs(phi(kPi, t)) > 1e-9 * scale) {
      throw std::invalid_argument("HeatProblem: history does not vanish on the boundary");
    }
  }
}

void SpectralConfig::validate() const {
  if (n_modes < 1) throw std::invalid_argument("SpectralConfig: n_modes must be >= 1");
  if (quad_points_x < 2) throw std::invalid_argument("SpectralConfig: quad_points_x must be >= 2");
  if (!(time_quad_tol > 0.0)) throw std::invalid_argument("SpectralConfig: bad quadrature tol");
}

std::vector<double> fourier_coeffs(const std::function<double(double)>& f, int n_max,
                                   int quad_points_x) {
  if (!f) throw std::invalid_argument("fourier_coeffs: missing integrand");
  if (n_max < 1) throw std::invalid_argument("fourier_coeffs: n_max must be >= 1");
  if (quad_points_x < 2) throw std::invalid_argument("fourier_coeffs: quad_points_x must be >= 2");
  std::vector<double> out(n_max);
  for (int n = 1; n <= n_max; ++n) out[n - 1] = sine_coefficient(f, n, quad_points_x);
  return out;
}

SpaceTimeGrid solve_spectral(const HeatProblem& p, const SpectralConfig& cfg,
                             std::span<const double> xs, std::span<const double> ts) {
  p.validate();
  cfg.validate();
  if (xs.empty() || ts.empty()) throw std::invalid_argument("solve_spectral: empty grid");
  for (double x : xs) {
    if (!(x >= 0.0) || !(x <= kPi + 1e-12)) {
      throw std::invalid_argument("solve_spectral: x outside [0, pi]");
    }
  }
  if (cfg.route == SpectralRoute::HistoryDerivative && !p.phi_t) {
    throw UnsupportedError("solve_spectral: history-derivative route needs phi_t");
  }

  SpaceTimeGrid grid;
  grid.xs.assign(xs.begin(), xs.end());
  grid.ts.assign(ts.begin(), ts.end());
  grid.values.assign(ts.size(), std::vector<double>(xs.size(), 0.0));
  grid.method = "spectral";
  grid.n_modes = cfg.n_modes;

  SolveOptions opts;
  opts.quad_tol = cfg.time_quad_tol;
  opts.use_history_derivative = cfg.route == SpectralRoute::HistoryDerivative;

  for (int n = 1; n <= cfg.n_modes; ++n) {
    const double lam = p.a * p.a * n * n;
    DelaySystem sys;
    sys.a0 = Matrix::from_rows({{-lam}});
    sys.a1 = Matrix::from_rows({{p.b}});
    sys.tau = p.tau;
    sys.history = [&p, &cfg, n](double s) {
      return Vector::from({sine_coefficient([&](double xi) { return p.phi(xi, s); }, n,
                                            cfg.quad_points_x)});
    };
    if (p.phi_t) {
      sys.history_deriv = [&p, &cfg, n](double s) {
        return Vector::from({sine_coefficient([&](double xi) { return p.phi_t(xi, s); }, n,
                                              cfg.quad_points_x)});
      };
    }
    if (p.psi) {
      sys.forcing = [&p, &cfg, n](double s) {
        return Vector::from({sine_coefficient([&](double xi) { return p.psi(xi, s); }, n,
                                              cfg.quad_points_x)});
      };
    }
    // Factored scalar kernel: exp(-a^2 n^2 (t - k tau)) b^k (t - k tau)^k / k!,
    // summed over the active pieces.
    Kernel kernel = [lam, b = p.b, tau = p.tau](double t) {
      return Matrix::from_rows({{scalar_fundamental(-lam, b, tau, t)}});
    };

    SolutionGrid mode;
    if (p.psi) {
      mode = solve_nonhomogeneous(sys, kernel, ts, opts);
    } else if (opts.use_history_derivative) {
      mode = solve_homogeneous_c1(sys, kernel, ts, opts);
    } else {
      mode = solve_homogeneous(sys, kernel, ts, opts);
    }

    double amp = 0.0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const double c = mode.values[j][0];
      amp = std::max(amp, std::abs(c));
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = grid.xs[i];
        if (x == 0.0 || x == kPi) continue;  // exact boundary zeros
        grid.values[j][i] += c * std::sin(n * x);
      }
    }
    if (n == cfg.n_modes) grid.tail_estimate = amp;
  }
  return grid;
}

namespace {

// Dense method-of-lines state at history resolution h, with RHS values kept
// for cubic Hermite lag interpolation.
struct LinesState {
  const HeatProblem* p = nullptr;
  int m = 0;
  double dx = 0.0;
  double h = 0.0;
  std::vector<double> xs_int;
  std::vector<double> ts;
  std::vector<std::vector<double>> us;
  std::vector<std::vector<double>> fs;

  std::vector<double> lag(double t) const {
    std::vector<double> out(m);
    if (t <= 0.0) {
      for (int i = 0; i < m; ++i) out[i] = p->phi(xs_int[i], t);
      return out;
    }
    const auto idx = static_cast<std::size_t>(std::floor(t / h + 1e-12));
    if (idx + 1 >= ts.size()) {
      if (t <= ts.back() + 1e-9 * h) return us.back();
      throw std::logic_error("fd oracle: lag beyond stored history");
    }
    const double theta = (t - ts[idx]) / h;
    if (theta <= 1e-12) return us[idx];
    if (theta >= 1.0 - 1e-12) return us[idx + 1];
    const double h00 = (1.0 + 2.0 * theta) * (1.0 - theta) * (1.0 - theta);
    const double h10 = theta * (1.0 - theta) * (1.0 - theta);
    const double h01 = theta * theta * (3.0 - 2.0 * theta);
    const double h11 = theta * theta * (theta - 1.0);
    for (int i = 0; i < m; ++i) {
      out[i] = h00 * us[idx][i] + h10 * h * fs[idx][i] + h01 * us[idx + 1][i] +
               h11 * h * fs[idx + 1][i];
    }
    return out;
  }

  std::vector<double> rhs(double t, const std::vector<double>& u) const {
    const double coef = p->a * p->a / (dx * dx);
    const std::vector<double> lagged = lag(t - p->tau);
    std::vector<double> f(m);
    for (int i = 0; i < m; ++i) {
      const double left = i > 0 ? u[i - 1] : 0.0;
      const double right = i + 1 < m ? u[i + 1] : 0.0;
      f[i] = coef * (left - 2.0 * u[i] + right) + p->b * lagged[i];
      if (p->psi) f[i] += p->psi(xs_int[i], t);
    }
    return f;
  }
};

}  // namespace

SpaceTimeGrid solve_fd_oracle(const HeatProblem& p, int m_interior, double h, double t_end) {
  p.validate();
  if (m_interior < 8) throw std::invalid_argument("solve_fd_oracle: m_interior must be >= 8");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("solve_fd_oracle: h must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("solve_fd_oracle: t_end must be >= 0");
  }
  const double ratio = p.tau / h;
  const auto per_tau = static_cast<long long>(std::llround(ratio));
  if (per_tau < 1 || std::abs(ratio - static_cast<double>(per_tau)) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("solve_fd_oracle: h must divide tau exactly");
  }

  LinesState st;
  st.p = &p;
  st.m = m_interior;
  st.dx = kPi / (m_interior + 1);
  st.h = h;
  st.xs_int.resize(m_interior);
  for (int i = 0; i < m_interior; ++i) st.xs_int[i] = st.dx * (i + 1);

  // Internal substeps keep the explicit stencil inside the RK4 stability
  // region; the history grid stays at resolution h.
  const double rho = 4.0 * p.a * p.a / (st.dx * st.dx) + std::abs(p.b);
  const int n_sub = std::max(1, static_cast<int>(std::ceil(h * rho / 2.5)));
  const double h_sub = h / n_sub;

  const auto n_steps = t_end == 0.0 ? 0LL : static_cast<long long>(std::ceil(t_end / h - 1e-9));
  st.ts.reserve(n_steps + 1);
  st.us.reserve(n_steps + 1);
  st.fs.reserve(n_steps + 1);
  st.ts.push_back(0.0);
  {
    std::vector<double> u0(m_interior);
    for (int i = 0; i < m_interior; ++i) u0[i] = p.phi(st.xs_int[i], 0.0);
    st.us.push_back(u0);
    st.fs.push_back(st.rhs(0.0, u0));
  }

  auto axpy = [&](std::vector<double> y, double alpha, const std::vector<double>& k) {
    for (int i = 0; i < m_interior; ++i) y[i] += alpha * k[i];
    return y;
  };

  for (long long j = 0; j < n_steps; ++j) {
    std::vector<double> u = st.us[j];
    double t = st.ts[j];
    for (int sub = 0; sub < n_sub; ++sub) {
      const std::vector<double> k1 = st.rhs(t, u);
      const std::vector<double> k2 = st.rhs(t + 0.5 * h_sub, axpy(u, 0.5 * h_sub, k1));
      const std::vector<double> k3 = st.rhs(t + 0.5 * h_sub, axpy(u, 0.5 * h_sub, k2));
      const std::vector<double> k4 = st.rhs(t + h_sub, axpy(u, h_sub, k3));
      for (int i = 0; i < m_interior; ++i) {
        u[i] += h_sub / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
      t += h_sub;
    }
    double peak = 0.0;
    for (double v : u) peak = std::max(peak, std::abs(v));
    if (peak > 1e12) {
      throw DivergedError("solve_fd_oracle: solution magnitude passed 1e12; use a smaller h");
    }
    const double t_next = st.ts[j] + h;
    st.ts.push_back(t_next);
    st.us.push_back(u);
    st.fs.push_back(st.rhs(t_next, u));
  }

  SpaceTimeGrid grid;
  grid.method = "finite_difference";
  grid.dx = st.dx;
  grid.step = h;
  grid.ts = st.ts;
  grid.xs.resize(m_interior + 2);
  grid.xs[0] = 0.0;
  for (int i = 0; i < m_interior; ++i) grid.xs[i + 1] = st.xs_int[i];
  grid.xs[m_interior + 1] = kPi;
  grid.values.reserve(st.us.size());
  for (const auto& u : st.us) {
    std::vector<double> row(m_interior + 2, 0.0);
    for (int i = 0; i < m_interior; ++i) row[i + 1] = u[i];
    grid.values.push_back(std::move(row));
  }
  return grid;
}

}  // namespace delaykit
