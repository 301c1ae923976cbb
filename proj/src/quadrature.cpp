#include "deepnqs/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace deepnqs {
namespace {

// Orthonormal probabilists' Hermite polynomials p_0..p_{n-1} at x; returns
// the Christoffel sum sum_k p_k(x)^2 and writes p_n, p_n' for Newton steps.
struct HermiteEval {
  double christoffel;
  double value;
  double derivative;
};

HermiteEval evaluate_hermite(int n, double x) {
  double prev = 0.0;
  double cur = 1.0;
  double sum = 0.0;
  double cur_prime = 0.0;
  double prev_prime = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += cur * cur;
    const double a = std::sqrt(static_cast<double>(k + 1));
    const double b = std::sqrt(static_cast<double>(k));
    const double next = (x * cur - b * prev) / a;
    const double next_prime = (cur + x * cur_prime - b * prev_prime) / a;
    prev = cur;
    prev_prime = cur_prime;
    cur = next;
    cur_prime = next_prime;
  }
  return {sum, cur, cur_prime};
}

}  // namespace

Quadrature gaussian_quadrature(int order) {
  if (order < 2) throw std::invalid_argument("gaussian_quadrature: order must be >= 2");

  // Golub-Welsch on the Jacobi matrix of He_k, then Newton polish of each node.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);

  Quadrature rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 4; ++it) {
      const auto h = evaluate_hermite(order, x);
      if (h.derivative == 0.0) break;
      x -= h.value / h.derivative;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / evaluate_hermite(order, x).christoffel;
  }

  // Enforce exact symmetry about zero.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;

  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace deepnqs
