#include "delaykit/ivpsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>

#include "delaykit/errors.hpp"
#include "delaykit/quadrature.hpp"

namespace delaykit {

namespace {

void check_times(std::span<const double> times, double lo) {
  if (times.empty()) throw std::invalid_argument("solve: empty time grid");
  double prev = -std::numeric_limits<double>::infinity();
  for (double t : times) {
    if (!std::isfinite(t)) throw std::invalid_argument("solve: non-finite grid time");
    if (t < lo) throw std::invalid_argument("solve: grid time below the valid range");
    if (t <= prev) throw std::invalid_argument("solve: grid times must be strictly increasing");
    prev = t;
  }
}

struct NamedKernel {
  Kernel eval;
  std::string name;
};

NamedKernel make_kernel(const DelaySystem& sys, const SolveOptions& opts, double t_max) {
  SolveMethod method;
  switch (opts.kernel) {
    case KernelChoice::PureDelayed:
      method = SolveMethod::PureDelayed;
      break;
    case KernelChoice::Permutable:
      method = SolveMethod::Permutable;
      break;
    case KernelChoice::NonPermutable:
      method = SolveMethod::NonPermutable;
      break;
    case KernelChoice::DysonPhillips:
      method = SolveMethod::DysonPhillips;
      break;
    case KernelChoice::Auto: {
      const double comm = opnorm(commutator(sys.a0, sys.a1));
      const bool commuting = comm <= 1e-10 * (1.0 + opnorm(sys.a0) * opnorm(sys.a1));
      method = commuting ? SolveMethod::Permutable : SolveMethod::NonPermutable;
      break;
    }
  }
  auto fs = std::make_shared<FundamentalSolution>(sys.a0, sys.a1, sys.tau, method, opts.trunc,
                                                  t_max);
  std::string name;
  switch (method) {
    case SolveMethod::PureDelayed:
      name = "pure_delayed";
      break;
    case SolveMethod::Permutable:
      name = "permutable";
      break;
    case SolveMethod::NonPermutable:
      name = "non_permutable";
      break;
    case SolveMethod::DysonPhillips:
      name = "dyson_phillips";
      break;
  }
  return {[fs](double t) { return (*fs)(t); }, name};
}

SolutionGrid grid_shell(std::span<const double> times, std::string method,
                        const SolveOptions& opts) {
  SolutionGrid g;
  g.times.assign(times.begin(), times.end());
  g.values.reserve(times.size());
  g.method = std::move(method);
  g.quad_tol = opts.quad_tol;
  g.trunc_tol = opts.trunc.tol;
  return g;
}

Vector homogeneous_value(const DelaySystem& sys, const Kernel& kernel, double t,
                         const SolveOptions& opts) {
  Vector u = kernel(t) * sys.history(0.0);
  auto integrand = [&](double s) { return kernel(t - sys.tau - s) * (sys.a1 * sys.history(s)); };
  const auto kinks = lag_kinks(-sys.tau, 0.0, t - sys.tau, sys.tau);
  u += integrate_adaptive(integrand, -sys.tau, 0.0, kinks, opts.quad_order, opts.quad_tol);
  return u;
}

Vector homogeneous_c1_value(const DelaySystem& sys, const Kernel& kernel, double t,
                            const SolveOptions& opts) {
  Vector u = kernel(t + sys.tau) * sys.history(-sys.tau);
  auto integrand = [&](double s) {
    return kernel(t - s) * (sys.history_deriv(s) - sys.a0 * sys.history(s));
  };
  const auto kinks = lag_kinks(-sys.tau, 0.0, t, sys.tau);
  u += integrate_adaptive(integrand, -sys.tau, 0.0, kinks, opts.quad_order, opts.quad_tol);
  return u;
}

Vector forced_value(const DelaySystem& sys, const Kernel& kernel, double t,
                    const SolveOptions& opts) {
  if (t <= 0.0) return Vector::zero(sys.dim());
  auto integrand = [&](double s) { return kernel(t - s) * sys.forcing(s); };
  const auto kinks = lag_kinks(0.0, t, t, sys.tau);
  return integrate_adaptive(integrand, 0.0, t, kinks, opts.quad_order, opts.quad_tol);
}

}  // namespace

Kernel make_fundsol_kernel(const DelaySystem& sys, const SolveOptions& opts, double t_max,
                           std::string* name) {
  sys.validate();
  auto named = make_kernel(sys, opts, t_max);
  if (name) *name = named.name;
  return std::move(named.eval);
}

void DelaySystem::validate() const {
  if (a0.dim() != a1.dim()) throw std::invalid_argument("DelaySystem: A0/A1 dimension mismatch");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("DelaySystem: tau must be > 0");
  if (!history) throw std::invalid_argument("DelaySystem: history is required");
  if (history(0.0).dim() != a0.dim()) {
    throw std::invalid_argument("DelaySystem: history dimension mismatch");
  }
  if (history_deriv && history_deriv(0.0).dim() != a0.dim()) {
    throw std::invalid_argument("DelaySystem: history derivative dimension mismatch");
  }
  if (forcing && forcing(0.0).dim() != a0.dim()) {
    throw std::invalid_argument("DelaySystem: forcing dimension mismatch");
  }
}

SolutionGrid solve_homogeneous(const DelaySystem& sys, std::span<const double> times,
                               const SolveOptions& opts) {
  sys.validate();
  check_times(times, 0.0);
  const auto named = make_kernel(sys, opts, times.back() + 2.0 * sys.tau);
  auto g = solve_homogeneous(sys, named.eval, times, opts);
  g.method = named.name;
  return g;
}

SolutionGrid solve_homogeneous(const DelaySystem& sys, const Kernel& kernel,
                               std::span<const double> times, const SolveOptions& opts) {
  sys.validate();
  check_times(times, 0.0);
  SolutionGrid g = grid_shell(times, "custom_kernel", opts);
  for (double t : times) g.values.push_back(homogeneous_value(sys, kernel, t, opts));
  return g;
}

SolutionGrid solve_homogeneous_c1(const DelaySystem& sys, std::span<const double> times,
                                  const SolveOptions& opts) {
  sys.validate();
  if (!sys.history_deriv) {
    throw UnsupportedError("solve_homogeneous_c1: history derivative not supplied");
  }
  check_times(times, -sys.tau);
  const auto named = make_kernel(sys, opts, times.back() + 2.0 * sys.tau);
  auto g = solve_homogeneous_c1(sys, named.eval, times, opts);
  g.method = named.name;
  return g;
}

SolutionGrid solve_homogeneous_c1(const DelaySystem& sys, const Kernel& kernel,
                                  std::span<const double> times, const SolveOptions& opts) {
  sys.validate();
  if (!sys.history_deriv) {
    throw UnsupportedError("solve_homogeneous_c1: history derivative not supplied");
  }
  check_times(times, -sys.tau);
  SolutionGrid g = grid_shell(times, "custom_kernel", opts);
  for (double t : times) g.values.push_back(homogeneous_c1_value(sys, kernel, t, opts));
  return g;
}

SolutionGrid solve_nonhomogeneous(const DelaySystem& sys, std::span<const double> times,
                                  const SolveOptions& opts) {
  sys.validate();
  check_times(times, 0.0);
  const auto named = make_kernel(sys, opts, times.back() + 2.0 * sys.tau);
  auto g = solve_nonhomogeneous(sys, named.eval, times, opts);
  g.method = named.name;
  return g;
}

SolutionGrid solve_nonhomogeneous(const DelaySystem& sys, const Kernel& kernel,
                                  std::span<const double> times, const SolveOptions& opts) {
  sys.validate();
  check_times(times, 0.0);
  if (opts.use_history_derivative && !sys.history_deriv) {
    throw UnsupportedError("solve_nonhomogeneous: history derivative not supplied");
  }
  SolutionGrid g = grid_shell(times, "custom_kernel", opts);
  for (double t : times) {
    Vector u = opts.use_history_derivative ? homogeneous_c1_value(sys, kernel, t, opts)
                                           : homogeneous_value(sys, kernel, t, opts);
    if (sys.forcing) u += forced_value(sys, kernel, t, opts);
    g.values.push_back(std::move(u));
  }
  return g;
}

namespace {

// Dense RK4 method-of-steps state: node values plus node derivatives for
// cubic Hermite lag interpolation between nodes.
struct StepsState {
  const DelaySystem* sys = nullptr;
  double h = 0.0;
  std::vector<double> ts;
  std::vector<Vector> us;
  std::vector<Vector> fs;

  Vector lag(double t) const {
    if (t <= 0.0) return sys->history(t);
    const auto idx = static_cast<std::size_t>(std::floor(t / h + 1e-12));
    if (idx + 1 >= ts.size()) {
      const double last = ts.back();
      if (t <= last + 1e-9 * h) return us.back();
      throw std::logic_error("method of steps: lag beyond stored history");
    }
    const double t0 = ts[idx];
    const double theta = (t - t0) / h;
    if (theta <= 1e-12) return us[idx];
    if (theta >= 1.0 - 1e-12) return us[idx + 1];
    const double h00 = (1.0 + 2.0 * theta) * (1.0 - theta) * (1.0 - theta);
    const double h10 = theta * (1.0 - theta) * (1.0 - theta);
    const double h01 = theta * theta * (3.0 - 2.0 * theta);
    const double h11 = theta * theta * (theta - 1.0);
    return h00 * us[idx] + (h10 * h) * fs[idx] + h01 * us[idx + 1] + (h11 * h) * fs[idx + 1];
  }

  Vector rhs(double t, const Vector& y) const {
    Vector f = sys->a0 * y + sys->a1 * lag(t - sys->tau);
    if (sys->forcing) f += sys->forcing(t);
    return f;
  }
};

StepsState run_method_of_steps(const DelaySystem& sys, double t_end, double h) {
  sys.validate();
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("method of steps: h must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("method of steps: t_end must be >= 0");
  }
  const double ratio = sys.tau / h;
  const auto per_tau = static_cast<long long>(std::llround(ratio));
  if (per_tau < 1 || std::abs(ratio - static_cast<double>(per_tau)) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("method of steps: h must divide tau exactly");
  }
  const auto n_steps =
      t_end == 0.0 ? 0LL : static_cast<long long>(std::ceil(t_end / h - 1e-9));

  StepsState st;
  st.sys = &sys;
  st.h = h;
  st.ts.reserve(n_steps + 1);
  st.us.reserve(n_steps + 1);
  st.fs.reserve(n_steps + 1);
  st.ts.push_back(0.0);
  st.us.push_back(sys.history(0.0));
  st.fs.push_back(st.rhs(0.0, st.us[0]));

  for (long long j = 0; j < n_steps; ++j) {
    const double t = st.ts[j];
    const Vector& y = st.us[j];
    const Vector k1 = st.fs[j];
    const Vector k2 = st.rhs(t + 0.5 * h, y + (0.5 * h) * k1);
    const Vector k3 = st.rhs(t + 0.5 * h, y + (0.5 * h) * k2);
    const Vector k4 = st.rhs(t + h, y + h * k3);
    Vector next = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = t + h;
    st.ts.push_back(t_next);
    st.us.push_back(next);
    st.fs.push_back(st.rhs(t_next, next));
  }
  return st;
}

}  // namespace

SolutionGrid solve_method_of_steps(const DelaySystem& sys, double t_end, double h) {
  StepsState st = run_method_of_steps(sys, t_end, h);
  SolutionGrid g;
  g.times = st.ts;
  g.values = st.us;
  g.method = "method_of_steps";
  g.step = h;
  return g;
}

SolutionGrid solve_method_of_steps(const DelaySystem& sys, double t_end, double h,
                                   std::span<const double> sample_times) {
  check_times(sample_times, -sys.tau);
  if (sample_times.back() > t_end + 1e-9 * h) {
    throw std::invalid_argument("method of steps: sample time beyond t_end");
  }
  StepsState st = run_method_of_steps(sys, t_end, h);
  SolutionGrid g;
  g.times.assign(sample_times.begin(), sample_times.end());
  g.values.reserve(sample_times.size());
  for (double t : sample_times) g.values.push_back(st.lag(t));
  g.method = "method_of_steps";
  g.step = h;
  return g;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace: need at least one point");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out[n - 1] = hi;
  return out;
}

}  // namespace delaykit
