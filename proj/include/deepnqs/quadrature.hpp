#pragma once

#include <cstddef>
#include <vector>

namespace deepnqs {

/// Gauss-Hermite rule for the standard normal measure Dz = e^{-z^2/2} dz / sqrt(2 pi).
/// Weights sum to one; the rule is exact for polynomials of degree < 2 * order.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }

  /// Tensor-product rule over two independent standard normals.
  template <class F>
  double integrate2(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double inner = 0.0;
      for (std::size_t j = 0; j < nodes.size(); ++j) inner += weights[j] * f(nodes[i], nodes[j]);
      sum += weights[i] * inner;
    }
    return sum;
  }
};

/// Throws std::invalid_argument for order < 2.
Quadrature gaussian_quadrature(int order);

}  // namespace deepnqs
