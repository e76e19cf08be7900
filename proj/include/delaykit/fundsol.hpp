#pragma once

#include <memory>
#include <optional>

#include "delaykit/matrix.hpp"
#include "delaykit/qkernel.hpp"
#include "delaykit/quadrature.hpp"

namespace delaykit {

/// Truncation and quadrature knobs for the series evaluators.
struct TruncationPolicy {
  double tol = 1e-10;   // target absolute entrywise error of series tails
  int kmax = 200;       // cap on the series power index
  int quad_points = 16; // Gauss-Legendre points per panel (Dyson-Phillips)

  void validate() const;
};

enum class SolveMethod { PureDelayed, Permutable, NonPermutable, DysonPhillips };

/// Pure delayed matrix exponential: zero for t < 0, identity at t = 0, and
/// sum_{l=0..n} A1^l (t - l*tau)^l / l! on (n*tau, (n+1)*tau]. Finite sum,
/// exact up to floating point.
Matrix eval_pure_delayed(const Matrix& a1, double tau, double t);

/// Fundamental solution for commuting coefficients:
/// exp(A0*t) * pure_delayed(A1*exp(-A0*tau); t). Rejects pairs whose
/// commutator norm exceeds 1e-10 * (1 + ||A0|| * ||A1||).
Matrix eval_permutable(const Matrix& a0, const Matrix& a1, double tau, double t);

/// Fundamental solution by the Q-family power series
/// sum_{l=0..n} sum_{k=l..K} Q_{k+1}(l*tau) (t - l*tau)^k / k!, with K chosen
/// so the exponential tail bound (||A0|| + ||A1||)^k t^k / k! summed past K
/// stays below trunc.tol. Throws TruncationError when kmax is hit first.
Matrix eval_nonpermutable(const Matrix& a0, const Matrix& a1, double tau, double t,
                          const TruncationPolicy& trunc = {});

/// Partial sum of the delayed Dyson-Phillips series:
///   S_0(t) = exp(A0 t),
///   S_n(t) = integral over [n*tau, t] of exp(A0 (t-s)) A1 S_{n-1}(s - tau) ds,
/// summed for n = 0..terms where t >= n*tau. Each convolution is evaluated
/// with composite Gauss-Legendre panels aligned to the multiples of tau where
/// the inner factor has kinks. On (n*tau, (n+1)*tau] the sum is exact in
/// `terms` once terms >= n; accuracy is then set by quad_points alone.
Matrix dyson_phillips_partial(const Matrix& a0, const Matrix& a1, double tau, double t, int terms,
                              int quad_points);

/// Residual of the truncated resolvent Neumann series: with
/// R0 = (lambda0 I - A0)^{-1} and q = exp(-lambda0 tau), returns
/// || (lambda0 I - A0 - A1 q) * sum_{n=0..terms} R0 (A1 R0)^n q^n  -  I ||.
/// Decays geometrically in `terms` with ratio <= ||A1 R0|| q. Requires
/// lambda0 > ||A0|| + ||A1||; throws when lambda0 I - A0 is singular.
double resolvent_series_check(const Matrix& a0, const Matrix& a1, double tau, double lambda0,
                              int terms);

/// Scalar fundamental solution in overflow-safe factored form:
/// sum_{k=0..n} a1^k exp(a0 (t - k*tau)) (t - k*tau)^k / k!. Never forms the
/// exp(-a0*tau)-scaled coefficient, so a0 << 0 (stiff modes) stays finite.
/// Throws NumericRangeError when a single term exceeds the floating range.
double scalar_fundamental(double a0, double a1, double tau, double t);

/// Piece index n with n*tau < t <= (n+1)*tau for t > 0 (0 for t <= tau).
int piece_index(double t, double tau);

/// Cached evaluator for S(t; tau) on [-tau, t_max]. Immutable after
/// construction; safe to share across threads. The NonPermutable method
/// builds its Q-table once, sized for t_max and trunc.tol.
class FundamentalSolution {
 public:
  FundamentalSolution(Matrix a0, Matrix a1, double tau, SolveMethod method,
                      TruncationPolicy trunc, double t_max);

  /// S(t; tau); requires t <= t_max.
  Matrix operator()(double t) const;

  SolveMethod method() const { return method_; }
  double tau() const { return tau_; }
  double t_max() const { return t_max_; }
  int dim() const { return a0_.dim(); }
  const Matrix& a0() const { return a0_; }
  const Matrix& a1() const { return a1_; }
  const TruncationPolicy& trunc() const { return trunc_; }

 private:
  Matrix a0_, a1_;
  double tau_;
  SolveMethod method_;
  TruncationPolicy trunc_;
  double t_max_;

  Matrix a2_;                        // Permutable: A1 * exp(-A0 * tau)
  std::shared_ptr<const QTable> q_;  // NonPermutable
  int series_order_ = 0;
};

}  // namespace delaykit
