#include "tightlag/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace tightlag {

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev estimate of the i-th root, then Newton on P_n.
    double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = xm - xl * z;
    rule.nodes[n - 1 - i] = xm + xl * z;
    rule.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

}  // namespace tightlag
