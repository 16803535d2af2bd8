#include "torsionlab/hamlab/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include "torsionlab/errors.hpp"

namespace torsionlab::hamlab {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw InvalidArgument("Gauss-Legendre rule needs n >= 1");
  const auto order = static_cast<int>(n);
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(order);  // non-negative half
  std::vector<double> x;
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it)
    if (*it != 0) x.push_back(-*it);
  for (double z : zeros) x.push_back(z);
  QuadratureRule rule;
  const double half = (b - a) / 2, mid = (a + b) / 2;
  for (double xi : x) {
    const double dp = boost::math::legendre_p_prime(order, xi);
    rule.nodes.push_back(mid + half * xi);
    rule.weights.push_back(half * 2 / ((1 - xi * xi) * dp * dp));
  }
  return rule;
}

QuadratureRule trapezoid(std::size_t n, double a, double b) {
  if (n == 0) throw InvalidArgument("trapezoid rule needs at least one cell");
  QuadratureRule rule;
  const double h = (b - a) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    rule.nodes.push_back(a + h * static_cast<double>(i));
    rule.weights.push_back((i == 0 || i == n) ? h / 2 : h);
  }
  return rule;
}

}  // namespace torsionlab::hamlab
