#pragma once

#include <utility>
#include <vector>

namespace tightlag {

/// Gauss-Legendre nodes and weights on [a, b].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n, double a, double b);

}  // namespace tightlag
