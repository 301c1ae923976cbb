#pragma once

#include "deepnqs/activation.hpp"
#include "deepnqs/quadrature.hpp"

#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace deepnqs {

/// Gaussian mean-field description of an infinitely wide random network
/// with weights N(0, sigma_w^2 / N) and biases N(0, sigma_b^2).
struct MeanFieldParams {
  double sigma_w = 1.0;
  double sigma_b = 0.0;
  Activation activation = Activation::Tanh;
  int quadrature_order = 64;
  double fixed_point_tol = 1e-12;
  int max_iters = 10000;

  void validate() const;
};

/// Outcome of a plain fixed-point iteration. `value` is the last iterate
/// even when `converged` is false.
struct FixedPoint {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct MeanFieldPoint {
  double sigma_w = 0.0;
  double sigma_b = 0.0;
  double q_star = 0.0;
  double c_star = 1.0;
  double chi = 0.0;      // slope of the correlation map at c_star
  double chi_one = 0.0;  // slope at c = 1; crosses 1 at the order/chaos boundary
  double xi_c = 0.0;     // +inf when xi_infinite
  bool xi_infinite = false;
  bool converged = false;
};

/// Decay length -1/ln(chi). Infinite (and flagged) when |chi - 1| < tol.
/// For chi > 1 the growth length 1/ln(chi) is returned.
std::pair<double, bool> decay_length_from_slope(double chi, double tol);

/// Least-squares decay length from (layer, |c^l - c*|) samples.
/// Samples at or below 1e-12 are ignored; at least four must remain.
double fit_decay_length(std::span<const std::pair<int, double>> trajectory);

class MeanField {
 public:
  explicit MeanField(const MeanFieldParams& params);

  const MeanFieldParams& params() const { return params_; }
  const Quadrature& quadrature() const { return rule_; }

  /// sigma_w^2 E[phi(sqrt(q) z)^2] + sigma_b^2.
  double iterate_q(double q_prev) const;
  FixedPoint fixed_point_q() const;

  /// Correlation after one layer for two inputs of equal magnitude q_star and
  /// correlation c_prev: the next-layer covariance over the next-layer variance.
  double iterate_c(double c_prev, double q_star) const;
  FixedPoint fixed_point_c(double q_star) const;

  /// sigma_w^2 E[phi'(u1) phi'(u2)] at the given (q, c).
  double correlation_slope(double q, double c) const;

  /// Full mean-field point: q*, c*, chi at c*, chi at c = 1, xi_c.
  MeanFieldPoint solve() const;

  /// c^0 = c0, c^{l+1} = iterate_c(c^l, q_star) for l < layers.
  std::vector<double> correlation_trajectory(double c0, double q_star, int layers) const;

 private:
  double covariance_integral(double q, double c) const;

  MeanFieldParams params_;
  Quadrature rule_;
};

/// Correlation slope chi at the converged fixed points of `params`.
double correlation_slope_chi(const MeanFieldParams& params);

/// xi_c and its infinity flag for `params`.
std::pair<double, bool> decay_length_xi(const MeanFieldParams& params);

/// One independent MeanFieldPoint per grid value; never throws for a single
/// point's non-convergence (recorded in the point instead).
std::vector<MeanFieldPoint> phase_sweep(std::span<const double> sigma_w_grid, double sigma_b,
                                        Activation activation,
                                        const MeanFieldParams& base = MeanFieldParams{},
                                        int threads = 1);

void write_meanfield_csv(std::ostream& out, std::span<const MeanFieldPoint> points);

}  // namespace deepnqs
