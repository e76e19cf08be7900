#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "delaykit/fundsol.hpp"
#include "delaykit/matrix.hpp"

namespace delaykit {

/// One delay initial value problem u'(t) = A0 u(t) + A1 u(t - tau) + g(t)
/// with history u = phi on [-tau, 0]. History and forcing are callables;
/// history_deriv is optional and only needed by the history-derivative
/// solution formula. A missing forcing means g = 0.
struct DelaySystem {
  Matrix a0, a1;
  double tau = 1.0;
  std::function<Vector(double)> history;
  std::function<Vector(double)> history_deriv;
  std::function<Vector(double)> forcing;

  int dim() const { return a0.dim(); }
  void validate() const;
};

enum class KernelChoice { Auto, PureDelayed, Permutable, NonPermutable, DysonPhillips };

struct SolveOptions {
  KernelChoice kernel = KernelChoice::Auto;
  double quad_tol = 1e-8;
  int quad_order = 8;
  TruncationPolicy trunc{};
  /// Nonhomogeneous solves build their homogeneous part from the
  /// history-derivative formula instead of the history-value one.
  bool use_history_derivative = false;
};

/// Sampled solution values with the parameters that produced them.
struct SolutionGrid {
  std::vector<double> times;
  std::vector<Vector> values;
  std::string method;
  double quad_tol = 0.0;
  double trunc_tol = 0.0;
  double step = 0.0;

  const Vector& at(std::size_t i) const { return values[i]; }
};

/// S(t; tau) supplied as a callable, so scalar or otherwise specialised
/// kernels can drive the same quadrature engine.
using Kernel = std::function<Matrix(double)>;

/// Resolves opts.kernel (Auto picks Permutable for commuting pairs, else
/// NonPermutable) and returns the cached evaluator, valid through t_max.
/// When name is non-null it receives the resolved method tag.
Kernel make_fundsol_kernel(const DelaySystem& sys, const SolveOptions& opts, double t_max,
                           std::string* name = nullptr);

/// u(t) = S(t) phi(0) + integral over [-tau, 0] of S(t - tau - s) A1 phi(s) ds,
/// evaluated at each grid time (all >= 0). Quadrature panels split where the
/// kernel argument crosses a multiple of tau.
SolutionGrid solve_homogeneous(const DelaySystem& sys, std::span<const double> times,
                               const SolveOptions& opts = {});
SolutionGrid solve_homogeneous(const DelaySystem& sys, const Kernel& kernel,
                               std::span<const double> times, const SolveOptions& opts = {});

/// u(t) = S(t + tau) phi(-tau) + integral over [-tau, 0] of
/// S(t - s) [phi'(s) - A0 phi(s)] ds; needs history_deriv, valid for
/// t >= -tau. Equals solve_homogeneous for differentiable histories.
SolutionGrid solve_homogeneous_c1(const DelaySystem& sys, std::span<const double> times,
                                  const SolveOptions& opts = {});
SolutionGrid solve_homogeneous_c1(const DelaySystem& sys, const Kernel& kernel,
                                  std::span<const double> times, const SolveOptions& opts = {});

/// Superposition: homogeneous part plus the forced response
/// integral over [0, t] of S(t - s) g(s) ds.
SolutionGrid solve_nonhomogeneous(const DelaySystem& sys, std::span<const double> times,
                                  const SolveOptions& opts = {});
SolutionGrid solve_nonhomogeneous(const DelaySystem& sys, const Kernel& kernel,
                                  std::span<const double> times, const SolveOptions& opts = {});

/// Classical RK4 method of steps, independent of every closed-form route.
/// h must divide tau so the lag always lands on stored nodes; lag values at
/// RK4 stage times come from cubic Hermite interpolation of the stored
/// history. Inherently sequential in time; single-threaded per solve.
SolutionGrid solve_method_of_steps(const DelaySystem& sys, double t_end, double h);

/// Same integration, sampled at the given times (each in [0, t_end]) via the
/// stored dense output instead of every node.
SolutionGrid solve_method_of_steps(const DelaySystem& sys, double t_end, double h,
                                   std::span<const double> sample_times);

/// Evenly spaced sample times, endpoints included.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace delaykit
