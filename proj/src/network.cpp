#include "deepnqs/network.hpp"

#include "deepnqs/activation.hpp"
#include "deepnqs/errors.hpp"
#include "deepnqs/seed.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace deepnqs {

std::string_view to_string(VarianceSplit split) {
  return split == VarianceSplit::TotalModulus ? "total_modulus" : "per_component";
}

VarianceSplit variance_split_from_string(std::string_view name) {
  if (name == "total_modulus") return VarianceSplit::TotalModulus;
  if (name == "per_component") return VarianceSplit::PerComponent;
  throw std::invalid_argument("unknown weight variance split '" + std::string(name) + "'");
}

int NetworkConfig::width() const {
  return static_cast<int>(std::lround(width_factor * num_spins));
}

void NetworkConfig::validate() const {
  if (num_spins < 2 || num_spins % 2 != 0) {
    throw std::invalid_argument(fmt::format("network: num_spins must be even and >= 2, got {}", num_spins));
  }
  if (depth < 1) throw std::invalid_argument("network: depth must be >= 1");
  if (!(width_factor > 0.0) || width() < 1) throw std::invalid_argument("network: hidden width must be >= 1");
  if (!(sigma_w >= 0.0)) throw std::invalid_argument("network: sigma_w must be nonnegative");
}

SpinConfiguration::SpinConfiguration(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("spin configuration entries must be 0 or 1");
  }
}

SpinConfiguration SpinConfiguration::from_index(std::uint64_t index, int num_spins) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(num_spins));
  for (int site = 0; site < num_spins; ++site) {
    bits[static_cast<std::size_t>(site)] = static_cast<std::uint8_t>((index >> (num_spins - 1 - site)) & 1U);
  }
  return SpinConfiguration(std::move(bits));
}

DeepNetwork::DeepNetwork(int num_spins, std::vector<Eigen::MatrixXcd> layers)
    : num_spins_(num_spins), layers_(std::move(layers)) {
  if (num_spins_ < 1) throw std::invalid_argument("network: num_spins must be positive");
  if (layers_.empty()) throw std::invalid_argument("network: at least one layer required");
  Eigen::Index inputs = num_spins_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].cols() != inputs || layers_[l].rows() < 1) {
      throw std::invalid_argument(fmt::format("network: layer {} has shape {}x{}, expected ?x{}", l,
                                              layers_[l].rows(), layers_[l].cols(), inputs));
    }
    if (l > 0 && layers_[l].rows() != layers_[0].rows()) {
      throw std::invalid_argument("network: hidden layers must share one width");
    }
    inputs = layers_[l].rows();
  }
}

Complex selu_complex(Complex z) { return {selu(z.real()), selu(z.imag())}; }

Eigen::VectorXcd DeepNetwork::forward(const SpinConfiguration& x) const {
  if (x.size() != num_spins_) {
    throw std::invalid_argument(
        fmt::format("forward: configuration has {} sites, network expects {}", x.size(), num_spins_));
  }
  Eigen::VectorXcd y(num_spins_);
  for (int i = 0; i < num_spins_; ++i) y(i) = static_cast<double>(x[i]);
  for (const auto& w : layers_) y = (w * y).unaryExpr(&selu_complex);
  return y;
}

Eigen::MatrixXcd DeepNetwork::forward_batch(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != num_spins_) throw std::invalid_argument("forward_batch: input row count mismatch");
  Eigen::MatrixXcd y = inputs.cast<Complex>();
  for (const auto& w : layers_) y = (w * y).unaryExpr(&selu_complex);
  return y;
}

DeepNetwork sample_network(const NetworkConfig& config) {
  config.validate();
  const int width = config.width();
  std::vector<Eigen::MatrixXcd> layers;
  layers.reserve(static_cast<std::size_t>(config.depth));
  int inputs = config.num_spins;
  for (int l = 0; l < config.depth; ++l) {
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(width, inputs);
    const double per_part_variance = config.sigma_w * config.sigma_w / inputs *
                                     (config.variance_split == VarianceSplit::TotalModulus ? 0.5 : 1.0);
    if (per_part_variance > 0.0) {
      std::mt19937_64 gen(derive_seed(config.seed, {static_cast<std::uint64_t>(l)}));
      std::normal_distribution<double> normal(0.0, std::sqrt(per_part_variance));
      for (int r = 0; r < width; ++r) {
        for (int c = 0; c < inputs; ++c) {
          const double re = normal(gen);
          const double im = normal(gen);
          w(r, c) = Complex(re, im);
        }
      }
    }
    layers.push_back(std::move(w));
    inputs = width;
  }
  return DeepNetwork(config.num_spins, std::move(layers));
}

Complex log_sum_exp(const Eigen::Ref<const Eigen::VectorXcd>& y) {
  if (y.size() == 0) throw std::invalid_argument("log_sum_exp: empty input");
  Eigen::Index top = 0;
  for (Eigen::Index i = 1; i < y.size(); ++i) {
    if (y(i).real() > y(top).real()) top = i;
  }
  const Complex shift = y(top);
  if (!std::isfinite(shift.real()) || !std::isfinite(shift.imag())) {
    throw NumericalFailure("log_sum_exp: non-finite network output");
  }
  Complex sum = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) sum += std::exp(y(i) - shift);
  if (sum == Complex(0.0, 0.0)) throw NumericalFailure("log_sum_exp: exponential sum cancels to zero");
  return shift + std::log(sum);
}

Complex log_amplitude(const DeepNetwork& net, const SpinConfiguration& x) {
  return log_sum_exp(net.forward(x));
}

void write_network(std::ostream& out, const DeepNetwork& net) {
  fmt::print(out, "deepnqs-network 1\nnum_spins {}\ndepth {}\n", net.num_spins(), net.depth());
  for (int l = 0; l < net.depth(); ++l) {
    const auto& w = net.layers()[static_cast<std::size_t>(l)];
    fmt::print(out, "layer {} {} {}\n", l, w.rows(), w.cols());
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) fmt::print(out, "{} {}\n", w(r, c).real(), w(r, c).imag());
    }
  }
}

DeepNetwork read_network(std::istream& in) {
  auto expect = [&](const std::string& token) {
    std::string got;
    if (!(in >> got) || got != token) {
      throw std::runtime_error("read_network: expected '" + token + "', got '" + got + "'");
    }
  };
  int version = 0, num_spins = 0, depth = 0;
  expect("deepnqs-network");
  in >> version;
  if (version != 1) throw std::runtime_error("read_network: unsupported version");
  expect("num_spins");
  in >> num_spins;
  expect("depth");
  in >> depth;
  if (!in || depth < 1) throw std::runtime_error("read_network: malformed header");
  std::vector<Eigen::MatrixXcd> layers;
  for (int l = 0; l < depth; ++l) {
    int index = 0;
    Eigen::Index rows = 0, cols = 0;
    expect("layer");
    in >> index >> rows >> cols;
    if (!in || index != l || rows < 1 || cols < 1) throw std::runtime_error("read_network: malformed layer header");
    Eigen::MatrixXcd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        double re = 0.0, im = 0.0;
        if (!(in >> re >> im)) throw std::runtime_error("read_network: truncated weights");
        w(r, c) = Complex(re, im);
      }
    }
    layers.push_back(std::move(w));
  }
  return DeepNetwork(num_spins, std::move(layers));
}

RealLayer sample_real_layer(int rows, int cols, double sigma_w, double sigma_b, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample_real_layer: empty shape");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double w_scale = sigma_w / std::sqrt(static_cast<double>(cols));
  RealLayer layer{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) layer.weights(r, c) = w_scale * normal(gen);
  }
  for (int r = 0; r < rows; ++r) layer.bias(r) = sigma_b * normal(gen);
  return layer;
}

}  // namespace deepnqs
