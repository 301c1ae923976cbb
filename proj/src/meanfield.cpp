#include "deepnqs/meanfield.hpp"

#include "deepnqs/parallel.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace deepnqs {

void MeanFieldParams::validate() const {
  if (!(sigma_w > 0.0)) throw std::invalid_argument("mean field: sigma_w must be positive");
  if (!(sigma_b >= 0.0)) throw std::invalid_argument("mean field: sigma_b must be nonnegative");
  if (!(fixed_point_tol > 0.0)) throw std::invalid_argument("mean field: fixed_point_tol must be positive");
  if (quadrature_order < 16) throw std::invalid_argument("mean field: quadrature_order must be >= 16");
  if (max_iters < 1) throw std::invalid_argument("mean field: max_iters must be positive");
}

std::pair<double, bool> decay_length_from_slope(double chi, double tol) {
  if (std::abs(chi - 1.0) < tol) return {std::numeric_limits<double>::infinity(), true};
  if (chi <= 0.0) return {0.0, false};
  return {1.0 / std::abs(std::log(chi)), false};
}

double fit_decay_length(std::span<const std::pair<int, double>> trajectory) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const auto& [layer, distance] : trajectory) {
    if (!(distance > 1e-12) || !std::isfinite(distance)) continue;
    const double x = layer;
    const double y = std::log(distance);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 4) {
    throw std::invalid_argument(
        fmt::format("fit_decay_length: need at least 4 points above 1e-12, got {}", n));
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom <= 0.0) throw std::invalid_argument("fit_decay_length: layers must be distinct");
  const double slope = (dn * sxy - sx * sy) / denom;
  if (slope >= 0.0) {
    throw std::invalid_argument(
        fmt::format("fit_decay_length: trajectory does not decay (log-slope {})", slope));
  }
  return -1.0 / slope;
}

MeanField::MeanField(const MeanFieldParams& params) : params_(params) {
  params_.validate();
  rule_ = gaussian_quadrature(params_.quadrature_order);
}

double MeanField::iterate_q(double q_prev) const {
  if (!(q_prev >= 0.0)) throw std::invalid_argument("iterate_q: q_prev must be nonnegative");
  const double scale = std::sqrt(q_prev);
  const auto act = params_.activation;
  const double second_moment = rule_.integrate([&](double z) {
    const double y = activate(act, scale * z);
    return y * y;
  });
  return params_.sigma_w * params_.sigma_w * second_moment + params_.sigma_b * params_.sigma_b;
}

FixedPoint MeanField::fixed_point_q() const {
  // Zero-bias activations with phi(0) = 0 collapse onto q = 0 whenever the
  // origin is attracting; plain iteration would only approach it algebraically
  // at the marginal point.
  const double sw2 = params_.sigma_w * params_.sigma_w;
  if (params_.sigma_b == 0.0 && activate(params_.activation, 0.0) == 0.0 &&
      sw2 * origin_gain(params_.activation) <= 1.0) {
    return {0.0, 0.0, 0, true};
  }
  FixedPoint fp{1.0, 0.0, 0, false};
  for (int it = 1; it <= params_.max_iters; ++it) {
    const double next = iterate_q(fp.value);
    fp.residual = std::abs(next - fp.value);
    fp.value = next;
    fp.iterations = it;
    if (!std::isfinite(next)) return fp;
    if (fp.residual < params_.fixed_point_tol) {
      fp.converged = true;
      break;
    }
  }
  return fp;
}

double MeanField::covariance_integral(double q, double c) const {
  const double scale = std::sqrt(q);
  const double orth = std::sqrt(std::max(0.0, 1.0 - c * c));
  const auto act = params_.activation;
  const auto& z = rule_.nodes;
  const auto& w = rule_.weights;
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double shift = c * z[i];
    double inner = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) inner += w[j] * activate(act, scale * (shift + orth * z[j]));
    total += w[i] * activate(act, scale * z[i]) * inner;
  }
  return total;
}

double MeanField::iterate_c(double c_prev, double q_star) const {
  if (!(q_star > 0.0)) throw std::invalid_argument("iterate_c: q_star must be positive");
  if (!(std::abs(c_prev) <= 1.0)) throw std::invalid_argument("iterate_c: |c_prev| must be <= 1");
  const double sw2 = params_.sigma_w * params_.sigma_w;
  const double covariance = sw2 * covariance_integral(q_star, c_prev) + params_.sigma_b * params_.sigma_b;
  const double variance = iterate_q(q_star);
  return std::clamp(covariance / variance, -1.0, 1.0);
}

FixedPoint MeanField::fixed_point_c(double q_star) const {
  // All inputs collapse onto the origin: perfectly correlated by convention.
  if (q_star == 0.0) return {1.0, 0.0, 0, true};
  FixedPoint fp{0.98, 0.0, 0, false};
  for (int it = 1; it <= params_.max_iters; ++it) {
    const double next = iterate_c(fp.value, q_star);
    fp.residual = std::abs(next - fp.value);
    fp.value = next;
    fp.iterations = it;
    if (fp.residual < params_.fixed_point_tol) {
      fp.converged = true;
      break;
    }
  }
  return fp;
}

double MeanField::correlation_slope(double q, double c) const {
  const double scale = std::sqrt(q);
  const double orth = std::sqrt(std::max(0.0, 1.0 - c * c));
  const auto act = params_.activation;
  const double integral = rule_.integrate2([&](double z1, double z2) {
    return activate_derivative(act, scale * z1) *
           activate_derivative(act, scale * (c * z1 + orth * z2));
  });
  return params_.sigma_w * params_.sigma_w * integral;
}

MeanFieldPoint MeanField::solve() const {
  MeanFieldPoint point;
  point.sigma_w = params_.sigma_w;
  point.sigma_b = params_.sigma_b;
  const FixedPoint q = fixed_point_q();
  point.q_star = q.value;
  if (!std::isfinite(q.value)) {
    point.c_star = std::numeric_limits<double>::quiet_NaN();
    point.chi = point.chi_one = point.xi_c = std::numeric_limits<double>::quiet_NaN();
    return point;
  }
  const FixedPoint c = fixed_point_c(q.value);
  point.c_star = c.value;
  point.chi = correlation_slope(q.value, c.value);
  point.chi_one = correlation_slope(q.value, 1.0);
  std::tie(point.xi_c, point.xi_infinite) = decay_length_from_slope(point.chi, params_.fixed_point_tol);
  point.converged = q.converged && c.converged;
  return point;
}

std::vector<double> MeanField::correlation_trajectory(double c0, double q_star, int layers) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(layers) + 1);
  out.push_back(c0);
  for (int l = 0; l < layers; ++l) out.push_back(iterate_c(out.back(), q_star));
  return out;
}

double correlation_slope_chi(const MeanFieldParams& params) { return MeanField(params).solve().chi; }

std::pair<double, bool> decay_length_xi(const MeanFieldParams& params) {
  const auto point = MeanField(params).solve();
  return {point.xi_c, point.xi_infinite};
}

std::vector<MeanFieldPoint> phase_sweep(std::span<const double> sigma_w_grid, double sigma_b,
                                        Activation activation, const MeanFieldParams& base,
                                        int threads) {
  if (sigma_w_grid.empty()) throw std::invalid_argument("phase_sweep: empty sigma_w grid");
  for (double s : sigma_w_grid) {
    if (!(s > 0.0)) throw std::invalid_argument("phase_sweep: sigma_w values must be positive");
  }
  std::vector<MeanFieldPoint> points(sigma_w_grid.size());
  parallel_for(sigma_w_grid.size(), threads, [&](std::size_t i) {
    MeanFieldParams params = base;
    params.sigma_w = sigma_w_grid[i];
    params.sigma_b = sigma_b;
    params.activation = activation;
    try {
      points[i] = MeanField(params).solve();
    } catch (const std::exception&) {
      MeanFieldPoint failed;
      failed.sigma_w = params.sigma_w;
      failed.sigma_b = sigma_b;
      failed.q_star = failed.c_star = failed.chi = failed.chi_one = failed.xi_c =
          std::numeric_limits<double>::quiet_NaN();
      points[i] = failed;
    }
  });
  return points;
}

void write_meanfield_csv(std::ostream& out, std::span<const MeanFieldPoint> points) {
  out << "sigma_w,sigma_b,q_star,c_star,chi,xi_c,converged\n";
  for (const auto& p : points) {
    const std::string xi = p.xi_infinite ? std::string("inf") : fmt::format("{}", p.xi_c);
    fmt::print(out, "{},{},{},{},{},{},{}\n", p.sigma_w, p.sigma_b, p.q_star, p.c_star, p.chi, xi,
               p.converged ? 1 : 0);
  }
}

}  // namespace deepnqs
