#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "delaykit/matrix.hpp"

namespace delaykit {

/// Dirichlet problem on [0, pi] for
///   u_t = a^2 u_xx + b u(x, t - tau) + psi(x, t),
/// with history u = phi on [-tau, 0]. phi must vanish at x = 0 and x = pi.
/// phi_t (time derivative of the history) is optional and only needed by the
/// history-derivative spectral route; psi is optional (zero when absent).
struct HeatProblem {
  double a = 1.0;
  double b = 0.0;
  double tau = 1.0;
  std::function<double(double, double)> phi;    // (x, t), t in [-tau, 0]
  std::function<double(double, double)> phi_t;  // optional
  std::function<double(double, double)> psi;    // optional, (x, t), t >= 0

  void validate() const;
};

enum class SpectralRoute { HistoryValue, HistoryDerivative };

struct SpectralConfig {
  int n_modes = 64;
  int quad_points_x = 64;   // floor on total x-quadrature nodes per coefficient
  double time_quad_tol = 1e-8;
  SpectralRoute route = SpectralRoute::HistoryValue;

  void validate() const;
};

/// Sampled space-time solution values[t index][x index] with run metadata.
struct SpaceTimeGrid {
  std::vector<double> xs;
  std::vector<double> ts;
  std::vector<std::vector<double>> values;
  std::string method;
  int n_modes = 0;
  double tail_estimate = 0.0;  // amplitude of the last retained mode
  double dx = 0.0;
  double step = 0.0;
};

/// Sine-series coefficients (2/pi) * integral of f(xi) sin(n xi) over [0, pi]
/// for n = 1..n_max. The node count grows with n so the oscillatory weight
/// stays resolved; quad_points_x is the floor on the total node count.
std::vector<double> fourier_coeffs(const std::function<double(double)>& f, int n_max,
                                   int quad_points_x);

/// Spectral solve: each sine mode n satisfies a scalar delay equation
/// c' = -a^2 n^2 c + b c(t - tau) + Psi_n(t) driven by the Fourier
/// coefficients of the history and forcing; modes are solved with the scalar
/// fundamental solution in factored form (never forming b * exp(a^2 n^2 tau))
/// and the solution is reconstructed as sum_n c_n(t) sin(n x). Boundary
/// values are exactly zero.
SpaceTimeGrid solve_spectral(const HeatProblem& p, const SpectralConfig& cfg,
                             std::span<const double> xs, std::span<const double> ts);

/// Method-of-lines oracle, independent of the spectral formulas:
/// second-order central differences on m_interior uniform interior points,
/// advanced by classical RK4 method of steps. h fixes the history grid the
/// delayed term reads from (cubic Hermite between nodes); when h violates the
/// explicit stability limit of the diffusion stencil the stepper subdivides
/// each h internally, which leaves the stated O(dx^2) + O(h^4) convergence
/// intact. Throws DivergedError when values pass 1e12.
SpaceTimeGrid solve_fd_oracle(const HeatProblem& p, int m_interior, double h, double t_end);

}  // namespace delaykit
