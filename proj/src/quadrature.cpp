#include "delaykit/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace delaykit {

GaussLegendre::GaussLegendre(int points) {
  if (points < 1) throw std::invalid_argument("GaussLegendre: need at least one point");
  nodes.assign(points, 0.0);
  weights.assign(points, 0.0);
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= points; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[points - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[points - 1 - i] = w;
  }
}

std::vector<double> lag_kinks(double a, double b, double shift, double tau) {
  std::vector<double> out;
  if (tau <= 0.0) return out;
  // shift - s = k*tau  =>  s = shift - k*tau, k = 0, 1, ...
  const auto k_min = static_cast<long long>(std::ceil((shift - b) / tau));
  const auto k_max = static_cast<long long>(std::floor((shift - a) / tau));
  for (long long k = std::max(k_min, 0LL); k <= k_max; ++k) {
    const double s = shift - static_cast<double>(k) * tau;
    if (s > a && s < b) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> panel_edges(double a, double b, std::span<const double> interior) {
  if (!(a < b)) throw std::invalid_argument("panel_edges: empty interval");
  std::vector<double> edges;
  edges.push_back(a);
  std::vector<double> pts(interior.begin(), interior.end());
  std::sort(pts.begin(), pts.end());
  const double eps = 1e-12 * (b - a);
  for (double p : pts) {
    if (p > a + eps && p < b - eps && p > edges.back() + eps) edges.push_back(p);
  }
  edges.push_back(b);
  return edges;
}

}  // namespace delaykit
