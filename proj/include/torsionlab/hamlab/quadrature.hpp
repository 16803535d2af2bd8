#pragma once

#include <cstddef>
#include <vector>

namespace torsionlab::hamlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b], nodes ascending.
QuadratureRule gauss_legendre(std::size_t n, double a = 0, double b = 1);

/// Composite trapezoid weights for n equal cells on [a, b] (n + 1 nodes).
QuadratureRule trapezoid(std::size_t n, double a = 0, double b = 1);

}  // namespace torsionlab::hamlab
