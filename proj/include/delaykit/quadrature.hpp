#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "delaykit/matrix.hpp"

namespace delaykit {

/// Gauss-Legendre rule on (-1, 1), nodes ascending.
struct GaussLegendre {
  explicit GaussLegendre(int points);

  int size() const { return static_cast<int>(nodes.size()); }

  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Interior breakpoints of [a, b] where `shift - s` crosses a nonnegative
/// multiple of tau; these are the kink locations of s -> S(shift - s; tau).
std::vector<double> lag_kinks(double a, double b, double shift, double tau);

/// Sorted panel edges a = e0 < e1 < ... < em = b from the interior points
/// that actually fall inside (a, b); near-duplicates are merged.
std::vector<double> panel_edges(double a, double b, std::span<const double> interior);

/// Single Gauss-Legendre panel. T needs T+=T and T*double.
template <class F>
auto gauss_panel(const GaussLegendre& rule, F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto acc = f(mid + half * rule.nodes[0]) * (half * rule.weights[0]);
  for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
    acc += f(mid + half * rule.nodes[i]) * (half * rule.weights[i]);
  }
  return acc;
}

namespace detail {

template <class F>
auto adaptive_panel(const GaussLegendre& rule, F&& f, double a, double b, double tol, int depth)
    -> decltype(f(a) * 1.0) {
  auto coarse = gauss_panel(rule, f, a, b);
  const double mid = 0.5 * (a + b);
  auto fine = gauss_panel(rule, f, a, mid);
  fine += gauss_panel(rule, f, mid, b);
  if (max_abs(coarse - fine) <= tol || depth >= 24) {
    return fine;
  }
  auto left = adaptive_panel(rule, f, a, mid, 0.5 * tol, depth + 1);
  left += adaptive_panel(rule, f, mid, b, 0.5 * tol, depth + 1);
  return left;
}

}  // namespace detail

/// Composite fixed-order rule over [a, b] split at the interior breakpoints.
/// Requires a < b.
template <class F>
auto integrate_fixed(F&& f, double a, double b, std::span<const double> interior,
                     const GaussLegendre& rule) {
  const auto edges = panel_edges(a, b, interior);
  auto acc = gauss_panel(rule, f, edges[0], edges[1]);
  for (std::size_t i = 1; i + 1 < edges.size(); ++i) {
    acc += gauss_panel(rule, f, edges[i], edges[i + 1]);
  }
  return acc;
}

/// Composite adaptive rule: panels split at the interior breakpoints, each
/// bisected until two successive refinements differ by less than its share
/// of `tol` (absolute, max-norm). Requires a < b.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, std::span<const double> interior, int order,
                        double tol) {
  const GaussLegendre rule(order);
  const auto edges = panel_edges(a, b, interior);
  const double total = b - a;
  auto panel_tol = [&](std::size_t i) {
    return std::max(tol * (edges[i + 1] - edges[i]) / total, 1e-300);
  };
  auto acc = detail::adaptive_panel(rule, f, edges[0], edges[1], panel_tol(0), 0);
  for (std::size_t i = 1; i + 1 < edges.size(); ++i) {
    acc += detail::adaptive_panel(rule, f, edges[i], edges[i + 1], panel_tol(i), 0);
  }
  return acc;
}

}  // namespace delaykit
