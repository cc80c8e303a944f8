#pragma once

#include <cmath>
#include <vector>

#include "voiga/core.hpp"

namespace voiga {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
/// Nodes by Newton iteration on P_n; no tables, so large n (patch-test
/// sweeps use n = 200) costs nothing in accuracy.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > 200) throw DomainError("quadrature point count out of range [1,200]");
  QuadratureRule rule;
  rule.points.assign(static_cast<size_t>(n), 0.0);
  rule.weights.assign(static_cast<size_t>(n), 0.0);

  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess for the i-th root (descending).
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pd = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence up to degree n.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pd = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pd;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One clean-up pass for the weight with the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    pd = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * pd * pd);
    rule.points[static_cast<size_t>(i)] = -x;
    rule.points[static_cast<size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<size_t>(i)] = w;
    rule.weights[static_cast<size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.points[static_cast<size_t>(n / 2)] = 0.0;
  return rule;
}

/// Map rule points from [-1,1] to [a,b]; weights pick up the half-length.
inline void map_to_interval(const QuadratureRule& rule, double a, double b,
                            std::vector<double>& pts, std::vector<double>& wts) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  pts.resize(rule.points.size());
  wts.resize(rule.points.size());
  for (size_t i = 0; i < rule.points.size(); ++i) {
    pts[i] = c + h * rule.points[i];
    wts[i] = h * rule.weights[i];
  }
}

}  // namespace voiga
