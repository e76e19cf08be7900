#include "delaykit/fundsol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "delaykit/errors.hpp"

namespace delaykit {

namespace {

// Smallest K with sum_{k>K} x^k / k! < tol. Throws when kmax is reached.
int series_order_for(double x, double tol, int kmax) {
  if (x < 0) throw std::invalid_argument("series_order_for: negative argument");
  double term = 1.0;  // x^(k+1) / (k+1)! while iterating k
  for (int k = 0; k <= kmax; ++k) {
    term *= x / (k + 1);
    if (k + 2 > x) {
      const double tail = term * (k + 2) / ((k + 2) - x);
      if (tail < tol) return k;
    }
  }
  // Report the geometric bound that was actually reachable at kmax.
  double at_cap = 1.0;
  for (int k = 0; k <= kmax; ++k) at_cap *= x / (k + 1);
  const double achieved = (kmax + 2 > x) ? at_cap * (kmax + 2) / ((kmax + 2) - x)
                                         : std::numeric_limits<double>::infinity();
  std::ostringstream msg;
  msg << "series truncation: tail bound " << achieved << " above tolerance " << tol << " at kmax "
      << kmax;
  throw TruncationError(msg.str(), achieved);
}

void check_pair(const Matrix& a0, const Matrix& a1) {
  if (a0.dim() != a1.dim()) throw std::invalid_argument("fundsol: dimension mismatch");
}

void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("fundsol: tau must be > 0");
}

void check_time(double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("fundsol: non-finite time");
}

// Series sum through the cached table: sum_{l=0..n} sum_{k=l..K} Q (t-l*tau)^k/k!.
Matrix series_from_table(const QTable& q, int order, double tau, double t) {
  const int n = std::min(piece_index(t, tau), q.max_delay());
  Matrix s = Matrix::zero(q.dim());
  for (int l = 0; l <= n; ++l) {
    const double u = t - l * tau;
    if (u < 0.0) continue;
    double coeff = 1.0;  // u^k / k!, starting at k = l
    for (int j = 1; j <= l; ++j) coeff *= u / j;
    for (int k = l; k <= order; ++k) {
      if (coeff != 0.0) s += q.entry(k, l) * coeff;
      coeff *= u / (k + 1);
    }
  }
  return s;
}

Matrix dyson_term(const Matrix& a0, const Matrix& a1, double tau, double t, int n,
                  const GaussLegendre& rule) {
  if (n == 0) return expm(a0, t);
  const double lo = n * tau;
  if (t <= lo) return Matrix::zero(a0.dim());
  // Kinks of s -> S_{n-1}(s - tau) at s = k*tau.
  std::vector<double> breaks;
  for (int k = n + 1; k * tau < t; ++k) breaks.push_back(k * tau);
  auto f = [&](double s) {
    return expm(a0, t - s) * (a1 * dyson_term(a0, a1, tau, s - tau, n - 1, rule));
  };
  return integrate_fixed(f, lo, t, breaks, rule);
}

}  // namespace

void TruncationPolicy::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("TruncationPolicy: tol must be > 0");
  if (kmax < 1) throw std::invalid_argument("TruncationPolicy: kmax must be >= 1");
  if (quad_points < 2) throw std::invalid_argument("TruncationPolicy: quad_points must be >= 2");
}

int piece_index(double t, double tau) {
  if (t <= 0.0) return 0;
  const int n = static_cast<int>(std::floor(t / tau));
  return std::max(n, 0);
}

Matrix eval_pure_delayed(const Matrix& a1, double tau, double t) {
  check_tau(tau);
  check_time(t);
  const int dim = a1.dim();
  if (t < 0.0) return Matrix::zero(dim);
  if (t == 0.0) return Matrix::identity(dim);
  const int n = piece_index(t, tau);
  Matrix s = Matrix::identity(dim);
  Matrix power = Matrix::identity(dim);
  for (int l = 1; l <= n; ++l) {
    const double u = t - l * tau;
    if (u < 0.0) break;
    power = power * a1;
    double coeff = 1.0;
    for (int j = 1; j <= l; ++j) coeff *= u / j;
    s += power * coeff;
  }
  return s;
}

Matrix eval_permutable(const Matrix& a0, const Matrix& a1, double tau, double t) {
  check_pair(a0, a1);
  check_tau(tau);
  check_time(t);
  const double comm = opnorm(commutator(a0, a1));
  const double allowed = 1e-10 * (1.0 + opnorm(a0) * opnorm(a1));
  if (comm > allowed) {
    std::ostringstream msg;
    msg << "eval_permutable: coefficients do not commute (commutator norm " << comm
        << " exceeds " << allowed << ")";
    throw std::invalid_argument(msg.str());
  }
  if (t < 0.0) return Matrix::zero(a0.dim());
  if (t == 0.0) return Matrix::identity(a0.dim());
  const Matrix a2 = a1 * expm(a0, -tau);
  return expm(a0, t) * eval_pure_delayed(a2, tau, t);
}

Matrix eval_nonpermutable(const Matrix& a0, const Matrix& a1, double tau, double t,
                          const TruncationPolicy& trunc) {
  check_pair(a0, a1);
  check_tau(tau);
  check_time(t);
  trunc.validate();
  if (t < 0.0) return Matrix::zero(a0.dim());
  if (t == 0.0) return Matrix::identity(a0.dim());
  const double sigma = opnorm(a0) + opnorm(a1);
  const int n = piece_index(t, tau);
  const int order = std::max(series_order_for(sigma * t, trunc.tol, trunc.kmax), n);
  const QTable q = QTable::build(a0, a1, order, n);
  return series_from_table(q, order, tau, t);
}

Matrix dyson_phillips_partial(const Matrix& a0, const Matrix& a1, double tau, double t, int terms,
                              int quad_points) {
  check_pair(a0, a1);
  check_tau(tau);
  check_time(t);
  if (terms < 0) throw std::invalid_argument("dyson_phillips_partial: terms must be >= 0");
  if (quad_points < 2) {
    throw std::invalid_argument("dyson_phillips_partial: quad_points must be >= 2");
  }
  if (t < 0.0) return Matrix::zero(a0.dim());
  const GaussLegendre rule(quad_points);
  Matrix s = Matrix::zero(a0.dim());
  for (int n = 0; n <= terms; ++n) {
    if (t < n * tau) break;
    s += dyson_term(a0, a1, tau, t, n, rule);
  }
  return s;
}

double resolvent_series_check(const Matrix& a0, const Matrix& a1, double tau, double lambda0,
                              int terms) {
  check_pair(a0, a1);
  check_tau(tau);
  if (!std::isfinite(lambda0)) throw std::invalid_argument("resolvent_series_check: bad lambda0");
  if (terms < 0) throw std::invalid_argument("resolvent_series_check: terms must be >= 0");
  const int dim = a0.dim();
  const Matrix eye = Matrix::identity(dim);
  const Matrix shifted = lambda0 * eye - a0;
  const Matrix r0 = solve(shifted, eye);  // throws on singular lambda0*I - A0
  if (lambda0 <= opnorm(a0) + opnorm(a1)) {
    throw std::invalid_argument(
        "resolvent_series_check: lambda0 must exceed ||A0|| + ||A1|| for guaranteed convergence");
  }
  const double q = std::exp(-lambda0 * tau);
  const Matrix step = a1 * r0;
  Matrix term = r0;
  Matrix partial = r0;
  for (int n = 1; n <= terms; ++n) {
    term = (term * step) * q;
    partial += term;
  }
  const Matrix lhs = shifted - a1 * q;
  return opnorm(lhs * partial - eye);
}

double scalar_fundamental(double a0, double a1, double tau, double t) {
  check_tau(tau);
  check_time(t);
  if (t < 0.0) return 0.0;
  if (t == 0.0) return 1.0;
  const int n = piece_index(t, tau);
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double u = t - k * tau;
    if (u < 0.0) break;
    // c = (a1 * u)^k / k!
    double c = 1.0;
    for (int j = 1; j <= k; ++j) c *= a1 * u / j;
    if (c == 0.0) continue;
    const double growth = a0 * u;
    double term;
    if (growth <= 700.0) {
      term = c * std::exp(growth);
    } else {
      const double lg = growth + std::log(std::abs(c));
      if (lg > 708.0) {
        throw NumericRangeError("scalar_fundamental: term magnitude exceeds floating range");
      }
      term = (c > 0 ? 1.0 : -1.0) * std::exp(lg);
    }
    if (!std::isfinite(term)) {
      throw NumericRangeError("scalar_fundamental: term magnitude exceeds floating range");
    }
    s += term;
  }
  return s;
}

FundamentalSolution::FundamentalSolution(Matrix a0, Matrix a1, double tau, SolveMethod method,
                                         TruncationPolicy trunc, double t_max)
    : a0_(std::move(a0)),
      a1_(std::move(a1)),
      tau_(tau),
      method_(method),
      trunc_(trunc),
      t_max_(t_max) {
  check_pair(a0_, a1_);
  check_tau(tau_);
  trunc_.validate();
  if (!(t_max_ > 0.0) || !std::isfinite(t_max_)) {
    throw std::invalid_argument("FundamentalSolution: t_max must be positive and finite");
  }
  switch (method_) {
    case SolveMethod::PureDelayed:
      if (max_abs(a0_) != 0.0) {
        throw std::invalid_argument("FundamentalSolution: PureDelayed requires A0 = 0");
      }
      break;
    case SolveMethod::Permutable: {
      const double comm = opnorm(commutator(a0_, a1_));
      const double allowed = 1e-10 * (1.0 + opnorm(a0_) * opnorm(a1_));
      if (comm > allowed) {
        std::ostringstream msg;
        msg << "FundamentalSolution: Permutable requires commuting coefficients (commutator norm "
            << comm << " exceeds " << allowed << ")";
        throw std::invalid_argument(msg.str());
      }
      a2_ = a1_ * expm(a0_, -tau_);
      break;
    }
    case SolveMethod::NonPermutable: {
      const double sigma = opnorm(a0_) + opnorm(a1_);
      const int pieces = piece_index(t_max_, tau_) + 1;
      series_order_ = std::max(series_order_for(sigma * t_max_, trunc_.tol, trunc_.kmax), pieces);
      q_ = std::make_shared<const QTable>(QTable::build(a0_, a1_, series_order_, pieces));
      break;
    }
    case SolveMethod::DysonPhillips:
      break;
  }
}

Matrix FundamentalSolution::operator()(double t) const {
  check_time(t);
  if (t > t_max_ * (1.0 + 1e-12) + 1e-12) {
    throw std::invalid_argument("FundamentalSolution: t exceeds t_max of the cached evaluator");
  }
  if (t < 0.0) return Matrix::zero(dim());
  if (t == 0.0) return Matrix::identity(dim());
  switch (method_) {
    case SolveMethod::PureDelayed:
      return eval_pure_delayed(a1_, tau_, t);
    case SolveMethod::Permutable:
      return expm(a0_, t) * eval_pure_delayed(a2_, tau_, t);
    case SolveMethod::NonPermutable:
      return series_from_table(*q_, series_order_, tau_, t);
    case SolveMethod::DysonPhillips:
      return dyson_phillips_partial(a0_, a1_, tau_, t, piece_index(t, tau_) + 1,
                                    trunc_.quad_points);
  }
  throw std::logic_error("FundamentalSolution: unknown method");
}

}  // namespace delaykit
