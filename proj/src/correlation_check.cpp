#include "deepnqs/harness.hpp"
#include "deepnqs/parallel.hpp"
#include "deepnqs/seed.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace deepnqs {
namespace {

constexpr std::uint64_t kInputStream = 0xC0FFEEULL << 32;

// Two vectors with mean square q and empirical correlation exactly c0.
std::pair<Eigen::VectorXd, Eigen::VectorXd> correlated_inputs(int width, double q, double c0, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd g1(width), g2(width);
  for (int i = 0; i < width; ++i) g1(i) = normal(gen);
  for (int i = 0; i < width; ++i) g2(i) = normal(gen);
  const Eigen::VectorXd e1 = g1.normalized();
  const Eigen::VectorXd e2 = (g2 - g2.dot(e1) * e1).normalized();
  const double radius = std::sqrt(width * q);
  return {radius * e1, radius * (c0 * e1 + std::sqrt(1.0 - c0 * c0) * e2)};
}

}  // namespace

std::vector<CorrelationSample> empirical_correlation_check(const SweepConfig& cfg) {
  cfg.validate();
  if (cfg.width < 64) throw std::invalid_argument("correlation check: width must be >= 64");
  const int layers = cfg.mu_list.front();
  const double c0 = cfg.initial_correlation;
  const auto act = cfg.activation;

  std::vector<CorrelationSample> out;
  for (std::size_t s = 0; s < cfg.sigma_w_grid.size(); ++s) {
    const double sigma_w = cfg.sigma_w_grid[s];
    MeanFieldParams params;
    params.sigma_w = sigma_w;
    params.sigma_b = cfg.sigma_b;
    params.activation = act;
    params.quadrature_order = cfg.quadrature_order;
    params.fixed_point_tol = cfg.fixed_point_tol;
    params.max_iters = cfg.max_iters;
    const MeanField mf(params);
    const double q_star = mf.fixed_point_q().value;
    const double q0 = q_star > 0.0 ? q_star : 1.0;

    // Mean-field prediction for equal-magnitude inputs starting at (q0, c0).
    std::vector<double> predicted{c0};
    for (double q = q0; static_cast<int>(predicted.size()) <= layers; q = mf.iterate_q(q)) {
      predicted.push_back(mf.iterate_c(predicted.back(), q));
    }

    const auto [input_a, input_b] =
        correlated_inputs(cfg.width, q0, c0, derive_seed(cfg.master_seed, {s, kInputStream}));

    const auto realizations = static_cast<std::size_t>(cfg.n_realizations);
    std::vector<std::vector<double>> per_realization(realizations);
    parallel_for(realizations, cfg.threads, [&](std::size_t r) {
      const std::uint64_t seed = derive_seed(cfg.master_seed, {s, r});
      Eigen::VectorXd za = input_a, zb = input_b;
      auto& curve = per_realization[r];
      curve.reserve(static_cast<std::size_t>(layers));
      for (int l = 0; l < layers; ++l) {
        const RealLayer layer = sample_real_layer(cfg.width, cfg.width, sigma_w, cfg.sigma_b,
                                                  derive_seed(seed, {static_cast<std::uint64_t>(l)}));
        const Eigen::VectorXd ya = za.unaryExpr([act](double x) { return activate(act, x); });
        const Eigen::VectorXd yb = zb.unaryExpr([act](double x) { return activate(act, x); });
        za = layer.weights * ya + layer.bias;
        zb = layer.weights * yb + layer.bias;
        curve.push_back(za.dot(zb) / (za.norm() * zb.norm()));
      }
    });

    out.push_back({sigma_w, 0, c0, 0.0, c0});
    for (int l = 0; l < layers; ++l) {
      std::vector<double> values(realizations);
      for (std::size_t r = 0; r < realizations; ++r) values[r] = per_realization[r][static_cast<std::size_t>(l)];
      const Summary summary = summarize(values);
      out.push_back({sigma_w, l + 1, summary.mean, summary.standard_error(), predicted[static_cast<std::size_t>(l + 1)]});
    }
  }
  return out;
}

double empirical_decay_length(std::span<const CorrelationSample> samples, double c_star, double noise_multiple) {
  if (samples.empty()) throw std::invalid_argument("empirical_decay_length: no samples");
  int last_layer = 0;
  for (const auto& s : samples) last_layer = std::max(last_layer, s.layer);
  const int first = std::max(1, static_cast<int>(std::ceil(0.2 * last_layer)));
  std::vector<std::pair<int, double>> window;
  for (const auto& s : samples) {
    if (s.layer < first) continue;
    const double distance = std::abs(s.empirical - c_star);
    if (distance <= noise_multiple * s.empirical_sem) break;
    window.emplace_back(s.layer, distance);
  }
  return fit_decay_length(window);
}

}  // namespace deepnqs
