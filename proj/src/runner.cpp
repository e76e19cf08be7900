#include "delaykit/runner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "delaykit/fundsol.hpp"
#include "delaykit/heatdelay.hpp"
#include "delaykit/ivpsolver.hpp"
#include "delaykit/parallel.hpp"
#include "delaykit/qkernel.hpp"

namespace delaykit::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string to_s(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

SolveMethod resolve_method(const std::string& name, const Matrix& a0, const Matrix& a1) {
  if (name == "pure") return SolveMethod::PureDelayed;
  if (name == "permutable") return SolveMethod::Permutable;
  if (name == "nonpermutable") return SolveMethod::NonPermutable;
  if (name == "dyson") return SolveMethod::DysonPhillips;
  // auto
  const double comm = opnorm(commutator(a0, a1));
  const bool commuting = comm <= 1e-10 * (1.0 + opnorm(a0) * opnorm(a1));
  return commuting ? SolveMethod::Permutable : SolveMethod::NonPermutable;
}

std::string method_tag(SolveMethod m) {
  switch (m) {
    case SolveMethod::PureDelayed:
      return "pure_delayed";
    case SolveMethod::Permutable:
      return "permutable";
    case SolveMethod::NonPermutable:
      return "non_permutable";
    case SolveMethod::DysonPhillips:
      return "dyson_phillips";
  }
  return "unknown";
}

RunResult run_fundsol(const ProblemConfig& cfg) {
  const Matrix& a0 = *cfg.a0;
  const Matrix& a1 = *cfg.a1;
  const int dim = a0.dim();
  TruncationPolicy trunc;
  trunc.tol = cfg.tol;
  trunc.quad_points = cfg.quad_points;
  const SolveMethod method = resolve_method(cfg.method, a0, a1);
  const double t_max = std::max(cfg.grid.t_end, cfg.tau) + cfg.tau;
  const FundamentalSolution fundsol(a0, a1, cfg.tau, method, trunc, t_max);

  const auto times = linspace(cfg.grid.t_start, cfg.grid.t_end, cfg.grid.n_points);

  RunResult out;
  out.table.columns.push_back("t");
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      std::ostringstream name;
      name << "S_" << r << "_" << c;
      out.table.columns.push_back(name.str());
    }
  out.table.columns.push_back("semigroup_gap");

  out.table.rows.assign(times.size(), {});
  parallel_for(times.size(), [&](std::size_t i) {
    const double t = times[i];
    const Matrix s = fundsol(t);
    std::vector<double> row;
    row.reserve(2 + static_cast<std::size_t>(dim) * dim);
    row.push_back(t);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) row.push_back(s(r, c));
    double gap = 0.0;
    if (t > 0.0) {
      const Matrix half = fundsol(0.5 * t);
      gap = opnorm(half * half - s);
    }
    row.push_back(gap);
    out.table.rows[i] = std::move(row);
  });

  out.table.meta["kind"] = "fundsol";
  out.table.meta["method"] = method_tag(method);
  out.table.meta["tau"] = to_s(cfg.tau);
  out.table.meta["trunc_tol"] = to_s(trunc.tol);
  out.table.meta["quad_points"] = to_s(trunc.quad_points);
  return out;
}

RunResult run_ivp(const ProblemConfig& cfg) {
  DelaySystem sys;
  sys.a0 = *cfg.a0;
  sys.a1 = *cfg.a1;
  sys.tau = cfg.tau;
  const int dim = sys.dim();

  const std::vector<Expression> phi = cfg.phi;
  sys.history = [phi, dim](double t) {
    Vector v = Vector::zero(dim);
    for (int i = 0; i < dim; ++i) v[i] = phi[phi.size() == 1 ? 0 : i].eval1(t);
    return v;
  };
  if (!cfg.g.empty()) {
    const std::vector<Expression> g = cfg.g;
    sys.forcing = [g, dim](double t) {
      Vector v = Vector::zero(dim);
      for (int i = 0; i < dim; ++i) v[i] = g[g.size() == 1 ? 0 : i].eval1(t);
      return v;
    };
  }

  const auto times = linspace(cfg.grid.t_start, cfg.grid.t_end, cfg.grid.n_points);
  const double h = cfg.step > 0.0 ? cfg.step : cfg.tau / 200.0;

  SolutionGrid grid;
  std::string tag;
  if (cfg.method == "steps") {
    grid = solve_method_of_steps(sys, cfg.grid.t_end, h, times);
    tag = grid.method;
  } else {
    SolveOptions opts;
    opts.quad_tol = cfg.tol;
    opts.trunc.tol = std::max(cfg.tol * 1e-2, 1e-13);
    opts.trunc.quad_points = cfg.quad_points;
    if (cfg.method == "pure") opts.kernel = KernelChoice::PureDelayed;
    if (cfg.method == "permutable") opts.kernel = KernelChoice::Permutable;
    if (cfg.method == "nonpermutable") opts.kernel = KernelChoice::NonPermutable;
    if (cfg.method == "dyson") opts.kernel = KernelChoice::DysonPhillips;
    const Kernel kernel = make_fundsol_kernel(sys, opts, times.back() + 2.0 * sys.tau, &tag);

    grid.times = times;
    grid.values.assign(times.size(), Vector::zero(dim));
    parallel_for(times.size(), [&](std::size_t i) {
      const double one_time[1] = {times[i]};
      const auto g = cfg.g.empty()
                         ? solve_homogeneous(sys, kernel, std::span<const double>(one_time, 1), opts)
                         : solve_nonhomogeneous(sys, kernel, std::span<const double>(one_time, 1),
                                                opts);
      grid.values[i] = g.values[0];
    });
  }

  RunResult out;
  out.table.columns.push_back("t");
  for (int i = 0; i < dim; ++i) {
    std::ostringstream name;
    name << "u_" << i;
    out.table.columns.push_back(name.str());
  }
  for (std::size_t i = 0; i < grid.times.size(); ++i) {
    std::vector<double> row;
    row.reserve(1 + dim);
    row.push_back(grid.times[i]);
    for (int c = 0; c < dim; ++c) row.push_back(grid.values[i][c]);
    out.table.rows.push_back(std::move(row));
  }
  out.table.meta["kind"] = "ivp";
  out.table.meta["method"] = tag;
  out.table.meta["tau"] = to_s(cfg.tau);
  out.table.meta["quad_tol"] = to_s(cfg.tol);
  out.table.meta["step"] = to_s(h);
  return out;
}

RunResult run_heat(const ProblemConfig& cfg) {
  HeatProblem p;
  p.a = cfg.heat_a;
  p.b = cfg.heat_b;
  p.tau = cfg.tau;
  const Expression phi = *cfg.heat_phi;
  p.phi = [phi](double x, double t) { return phi.eval2(x, t); };
  if (cfg.heat_psi) {
    const Expression psi = *cfg.heat_psi;
    p.psi = [psi](double x, double t) { return psi.eval2(x, t); };
  }

  const auto ts = linspace(cfg.grid.t_start, cfg.grid.t_end, cfg.grid.n_points);

  RunResult out;
  out.table.columns = {"t", "x", "u"};
  out.table.meta["kind"] = "heat";
  out.table.meta["tau"] = to_s(cfg.tau);

  if (cfg.method == "spectral") {
    const auto xs = linspace(0.0, kPi, cfg.grid.x_points);
    SpectralConfig sc;
    sc.n_modes = cfg.n_modes;
    sc.quad_points_x = std::max(64, cfg.quad_points);
    sc.time_quad_tol = cfg.tol;
    const auto grid = solve_spectral(p, sc, xs, ts);
    for (std::size_t j = 0; j < grid.ts.size(); ++j)
      for (std::size_t i = 0; i < grid.xs.size(); ++i)
        out.table.rows.push_back({grid.ts[j], grid.xs[i], grid.values[j][i]});
    out.table.meta["method"] = grid.method;
    out.table.meta["n_modes"] = to_s(grid.n_modes);
    out.table.meta["tail_estimate"] = to_s(grid.tail_estimate);
  } else {
    const int m_interior = cfg.grid.x_points - 2;
    const double h = cfg.step > 0.0 ? cfg.step : cfg.tau / 400.0;
    const auto grid = solve_fd_oracle(p, m_interior, h, cfg.grid.t_end);
    for (double t : ts) {
      // snap to the nearest stored node
      const auto j = static_cast<std::size_t>(
          std::clamp(std::llround(t / h), 0LL, static_cast<long long>(grid.ts.size() - 1)));
      for (std::size_t i = 0; i < grid.xs.size(); ++i)
        out.table.rows.push_back({grid.ts[j], grid.xs[i], grid.values[j][i]});
    }
    out.table.meta["method"] = grid.method;
    out.table.meta["dx"] = to_s(grid.dx);
    out.table.meta["step"] = to_s(grid.step);
  }
  return out;
}

// ---------------------------------------------------------------------------
// verify suite (fixed seed, deterministic)
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  bool passed;
  double value;
  double threshold;
};

Matrix rand_matrix(std::mt19937& rng, int dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = u(rng);
  return Matrix(std::move(m));
}

Matrix rand_matrix_opnorm(std::mt19937& rng, int dim, double target) {
  Matrix m = rand_matrix(rng, dim, -1.0, 1.0);
  const double n = opnorm(m);
  return n > 0 ? (target / n) * m : m;
}

// A1 as a low-degree polynomial in A0: commuting by construction.
Matrix rand_commuting_partner(std::mt19937& rng, const Matrix& a0, double target) {
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  Matrix m = u(rng) * Matrix::identity(a0.dim()) + u(rng) * a0 + u(rng) * (a0 * a0);
  const double n = opnorm(m);
  return n > 0 ? (target / n) * m : m;
}

Vector rand_vector(std::mt19937& rng, int dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = u(rng);
  return Vector(std::move(v));
}

// Definitional sum for the Q family, used as the independent oracle against
// the recursion-built table.
Matrix q_definitional(const Matrix& a0, const Matrix& a1, int k, int l) {
  if (l > k) return Matrix::zero(a0.dim());
  if (l == 0) return mpow(a0, k);
  Matrix sum = Matrix::zero(a0.dim());
  for (int m = l; m <= k; ++m) {
    sum += mpow(a0, k - m) * (a1 * q_definitional(a0, a1, m - 1, l - 1));
  }
  return sum;
}

DelaySystem random_system(std::mt19937& rng, int dim, bool with_forcing) {
  DelaySystem sys;
  sys.a0 = rand_matrix_opnorm(rng, dim, 0.9);
  sys.a1 = rand_matrix_opnorm(rng, dim, 0.9);
  sys.tau = 1.0;
  const Vector p = rand_vector(rng, dim, -1.0, 1.0);
  const Vector q = rand_vector(rng, dim, -0.5, 0.5);
  const Vector r = rand_vector(rng, dim, -0.5, 0.5);
  sys.history = [p, q, r](double s) { return p + s * q + std::sin(s) * r; };
  sys.history_deriv = [q, r](double s) { return q + std::cos(s) * r; };
  if (with_forcing) {
    const Vector v = rand_vector(rng, dim, -1.0, 1.0);
    const Vector w = rand_vector(rng, dim, -1.0, 1.0);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    const double omega = u(rng);
    sys.forcing = [v, w, omega](double t) {
      return std::sin(omega * t) * v + std::cos(omega * t) * w;
    };
  }
  return sys;
}

std::vector<Check> verify_checks() {
  std::vector<Check> checks;
  std::mt19937 rng(20250811u);
  const double tau = 1.0;

  // Defining ODE residual for the Q-series evaluator.
  {
    double worst = 0.0;
    const double h = 1e-5;
    TruncationPolicy tight;
    tight.tol = 1e-12;
    for (int trial = 0; trial < 3; ++trial) {
      const Matrix a0 = rand_matrix(rng, 3, -1.0, 1.0);
      const Matrix a1 = rand_matrix(rng, 3, -1.0, 1.0);
      const FundamentalSolution s(a0, a1, tau, SolveMethod::NonPermutable, tight, 3.5);
      for (int i = 0; i < 12; ++i) {
        double t = 0.07 + 2.9 * i / 11.0;
        if (std::abs(t - std::round(t)) < 1e-3) t += 5e-3;
        const Matrix ds = (1.0 / (2.0 * h)) * (s(t + h) - s(t - h));
        const Matrix rhs = a0 * s(t) + a1 * s(t - tau);
        worst = std::max(worst, max_abs_diff(ds, rhs));
      }
    }
    checks.push_back({"ode_residual_nonpermutable", worst <= 1e-5, worst, 1e-5});
  }

  // Permutable closed form vs Q-series vs Dyson-Phillips partial sums.
  {
    double worst = 0.0;
    TruncationPolicy tight;
    tight.tol = 1e-10;
    for (int trial = 0; trial < 3; ++trial) {
      const Matrix a0 = rand_matrix_opnorm(rng, 3, 0.9);
      const Matrix a1 = rand_commuting_partner(rng, a0, 0.9);
      for (int i = 0; i < 8; ++i) {
        const double t = 0.2 + 2.8 * i / 7.0;
        const Matrix sp = eval_permutable(a0, a1, tau, t);
        const Matrix sn = eval_nonpermutable(a0, a1, tau, t, tight);
        const Matrix sd = dyson_phillips_partial(a0, a1, tau, t, 3, 16);
        worst = std::max({worst, max_abs_diff(sp, sn), max_abs_diff(sp, sd)});
      }
    }
    checks.push_back({"cross_formula_commuting", worst <= 1e-7, worst, 1e-7});
  }

  // Q family identities against the definitional sum and closed forms.
  {
    const Matrix a0 = rand_matrix(rng, 3, -1.0, 1.0);
    const Matrix a1 = rand_matrix(rng, 3, -1.0, 1.0);
    const QTable q = QTable::build(a0, a1, 8, 8);
    double decomp = 0.0, rowsum = 0.0, tri = 0.0;
    for (int k = 0; k <= 8; ++k) {
      Matrix sum = Matrix::zero(3);
      for (int l = 0; l <= k; ++l) {
        decomp = std::max(decomp, max_abs_diff(q.entry(k, l), q_definitional(a0, a1, k, l)));
        sum += q.entry(k, l);
      }
      rowsum = std::max(rowsum, max_abs_diff(sum, mpow(a0 + a1, k)));
      for (int l = k + 1; l <= 8; ++l) tri = std::max(tri, max_abs(q.entry(k, l)));
    }
    checks.push_back({"qtable_definitional_sum", decomp <= 1e-12, decomp, 1e-12});
    checks.push_back({"qtable_row_sums", rowsum <= 1e-10, rowsum, 1e-10});
    checks.push_back({"qtable_triangularity", tri == 0.0, tri, 0.0});

    const Matrix c0 = rand_matrix_opnorm(rng, 3, 0.9);
    const Matrix c1 = rand_commuting_partner(rng, c0, 0.9);
    const QTable qc = QTable::build(c0, c1, 8, 8);
    double collapse = 0.0;
    for (int k = 0; k <= 8; ++k)
      for (int l = 0; l <= k; ++l)
        collapse = std::max(collapse, max_abs_diff(qc.entry(k, l), commuting_entry(c0, c1, k, l)));
    checks.push_back({"qtable_commuting_collapse", collapse <= 1e-12, collapse, 1e-12});
  }

  // Resolvent Neumann series residual.
  {
    const Matrix a0 = rand_matrix(rng, 3, -1.0, 1.0);
    const Matrix a1 = rand_matrix(rng, 3, -1.0, 1.0);
    const double lambda0 = 2.0 * (opnorm(a0) + opnorm(a1)) + 1.0;
    const double res = resolvent_series_check(a0, a1, tau, lambda0, 40);
    checks.push_back({"resolvent_residual", res <= 1e-10, res, 1e-10});
  }

  // Uniform continuity bound ||S(t) - I|| <= exp((||A0||+||A1||) t) - 1.
  {
    double worst = -1e300;
    TruncationPolicy tight;
    tight.tol = 1e-11;
    for (int trial = 0; trial < 4; ++trial) {
      const Matrix a0 = rand_matrix(rng, 3, -1.0, 1.0);
      const Matrix a1 = rand_matrix(rng, 3, -1.0, 1.0);
      const double sigma = opnorm(a0) + opnorm(a1);
      const Matrix eye = Matrix::identity(3);
      const FundamentalSolution s(a0, a1, tau, SolveMethod::NonPermutable, tight, 3.2);
      for (int i = 1; i <= 5; ++i) {
        const double t = 3.0 * i / 5.0;
        const double lhs = opnorm(s(t) - eye);
        const double bound = std::exp(sigma * t) - 1.0;
        worst = std::max(worst, lhs - bound);
      }
    }
    checks.push_back({"uniform_continuity_bound", worst <= 0.0, worst, 0.0});
  }

  // No-semigroup counterexample: gap plus the displayed diagonal value.
  {
    const Matrix i2 = Matrix::identity(2);
    const Matrix a1 = -1.0 * i2;
    const Matrix s12 = eval_permutable(i2, a1, 1.0, 1.2);
    const Matrix s06 = eval_permutable(i2, a1, 1.0, 0.6);
    const double gap = opnorm(s06 * s06 - s12);
    checks.push_back({"counterexample_gap", gap > 0.01, gap, 0.01});
    const double expect = std::exp(0.2) * (std::exp(1.0) + 1.0 - 1.2);
    const double err = std::abs(s12(0, 0) - expect);
    checks.push_back({"counterexample_value", err <= 1e-10, err, 1e-10});
  }

  // Hand value for u' = u(t-1), phi = 1: u(2) = 3.5 by both routes.
  {
    DelaySystem sys;
    sys.a0 = Matrix::from_rows({{0.0}});
    sys.a1 = Matrix::from_rows({{1.0}});
    sys.tau = 1.0;
    sys.history = [](double) { return Vector::from({1.0}); };
    const double t2[1] = {2.0};
    const auto formula = solve_homogeneous(sys, std::span<const double>(t2, 1));
    const auto steps = solve_method_of_steps(sys, 2.0, 1.0 / 200.0);
    const double err = std::max(std::abs(formula.values[0][0] - 3.5),
                                std::abs(steps.values.back()[0] - 3.5));
    checks.push_back({"hand_value_u2", err <= 1e-6, err, 1e-6});
  }

  // Formula routes vs the RK4 method-of-steps oracle.
  {
    double worst = 0.0;
    for (int trial = 0; trial < 2; ++trial) {
      const DelaySystem sys = random_system(rng, 3, true);
      const auto times = linspace(0.0, 3.0, 10);
      SolveOptions opts;
      opts.quad_tol = 1e-8;
      opts.trunc.tol = 1e-10;
      const auto formula = solve_nonhomogeneous(sys, times, opts);
      const auto oracle = solve_method_of_steps(sys, 3.0, tau / 200.0, times);
      for (std::size_t i = 0; i < times.size(); ++i) {
        worst = std::max(worst, max_abs_diff(formula.values[i], oracle.values[i]));
      }
    }
    checks.push_back({"ivp_oracle_agreement", worst <= 1e-5, worst, 1e-5});
  }

  // History-value route vs history-derivative route.
  {
    double worst = 0.0;
    for (int trial = 0; trial < 2; ++trial) {
      const DelaySystem sys = random_system(rng, 3, false);
      const auto times = linspace(0.0, 3.0, 10);
      SolveOptions opts;
      opts.quad_tol = 1e-9;
      opts.trunc.tol = 1e-11;
      const auto a = solve_homogeneous(sys, times, opts);
      const auto b = solve_homogeneous_c1(sys, times, opts);
      for (std::size_t i = 0; i < times.size(); ++i) {
        worst = std::max(worst, max_abs_diff(a.values[i], b.values[i]));
      }
    }
    checks.push_back({"history_routes_agree", worst <= 1e-7, worst, 1e-7});
  }

  // Heat: undelayed single mode decays exactly.
  {
    HeatProblem p;
    p.a = 1.0;
    p.b = 0.0;
    p.tau = 1.0;
    p.phi = [](double x, double) { return std::sin(x); };
    SpectralConfig sc;
    sc.n_modes = 8;
    const auto xs = linspace(0.0, kPi, 17);
    const auto ts = linspace(0.0, 2.0, 5);
    const auto g = solve_spectral(p, sc, xs, ts);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.ts.size(); ++j)
      for (std::size_t i = 0; i < g.xs.size(); ++i)
        worst = std::max(worst,
                         std::abs(g.values[j][i] - std::exp(-g.ts[j]) * std::sin(g.xs[i])));
    checks.push_back({"heat_undelayed_decay", worst <= 1e-6, worst, 1e-6});
  }

  // Heat: delayed single mode against the scalar method-of-steps oracle.
  {
    HeatProblem p;
    p.a = 1.0;
    p.b = 0.5;
    p.tau = 1.0;
    p.phi = [](double x, double) { return std::sin(2.0 * x); };
    SpectralConfig sc;
    sc.n_modes = 8;
    const auto ts = linspace(0.0, 2.0, 9);
    const double x_probe[1] = {kPi / 4.0};
    const auto g = solve_spectral(p, sc, std::span<const double>(x_probe, 1), ts);

    DelaySystem mode;
    mode.a0 = Matrix::from_rows({{-4.0}});
    mode.a1 = Matrix::from_rows({{0.5}});
    mode.tau = 1.0;
    mode.history = [](double) { return Vector::from({1.0}); };
    const auto oracle = solve_method_of_steps(mode, 2.0, 1.0 / 400.0, ts);
    double worst = 0.0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const double want = oracle.values[j][0] * std::sin(2.0 * x_probe[0]);
      worst = std::max(worst, std::abs(g.values[j][0] - want));
    }
    checks.push_back({"heat_mode_oracle", worst <= 1e-7, worst, 1e-7});
  }

  return checks;
}

}  // namespace

RunResult run_verify() {
  const auto checks = verify_checks();
  RunResult out;
  out.table.columns = {"check", "passed", "value", "threshold"};
  out.table.meta["kind"] = "verify";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    out.table.rows.push_back(
        {static_cast<double>(i + 1), c.passed ? 1.0 : 0.0, c.value, c.threshold});
    std::ostringstream key;
    key << "check_" << (i + 1);
    out.table.meta[key.str()] = c.name;
    if (!c.passed) out.verify_failed = true;
  }
  return out;
}

RunResult run(const ProblemConfig& cfg) {
  if (cfg.kind == "fundsol") return run_fundsol(cfg);
  if (cfg.kind == "ivp") return run_ivp(cfg);
  if (cfg.kind == "heat") return run_heat(cfg);
  if (cfg.kind == "verify") return run_verify();
  throw std::invalid_argument("run: unknown kind " + cfg.kind);
}

}  // namespace delaykit::cli
