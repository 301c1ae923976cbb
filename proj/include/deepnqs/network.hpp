#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace deepnqs {

using Complex = std::complex<double>;

/// How sigma_w^2 / N is shared between the real and imaginary weight parts.
/// TotalModulus: E|W|^2 = sigma_w^2 / N (each part sigma_w^2 / 2N).
/// PerComponent: each part has variance sigma_w^2 / N.
enum class VarianceSplit { TotalModulus, PerComponent };

std::string_view to_string(VarianceSplit split);
VarianceSplit variance_split_from_string(std::string_view name);

struct NetworkConfig {
  int num_spins = 10;
  int depth = 20;
  double width_factor = 1.0;
  double sigma_w = 1.0;
  std::uint64_t seed = 0;
  VarianceSplit variance_split = VarianceSplit::TotalModulus;

  /// round(width_factor * num_spins)
  int width() const;
  void validate() const;
};

/// Occupation bits of a chain, 0 = down and 1 = up, site 0 first.
class SpinConfiguration {
 public:
  explicit SpinConfiguration(std::vector<std::uint8_t> bits);

  /// Site 0 is the most significant of the `num_spins` low bits of `index`.
  static SpinConfiguration from_index(std::uint64_t index, int num_spins);

  int size() const { return static_cast<int>(bits_.size()); }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::uint8_t operator[](int site) const { return bits_[static_cast<std::size_t>(site)]; }

 private:
  std::vector<std::uint8_t> bits_;
};

/// Bias-free complex feed-forward network; every layer is an affine map
/// followed by split SELU. Immutable once built.
class DeepNetwork {
 public:
  DeepNetwork(int num_spins, std::vector<Eigen::MatrixXcd> layers);

  int num_spins() const { return num_spins_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  int width() const { return static_cast<int>(layers_.front().rows()); }
  const std::vector<Eigen::MatrixXcd>& layers() const { return layers_; }

  Eigen::VectorXcd forward(const SpinConfiguration& x) const;

  /// Column-batched forward pass; `inputs` is num_spins x batch with 0/1 entries.
  Eigen::MatrixXcd forward_batch(const Eigen::MatrixXd& inputs) const;

 private:
  int num_spins_;
  std::vector<Eigen::MatrixXcd> layers_;
};

DeepNetwork sample_network(const NetworkConfig& config);

/// Real SELU applied separately to the real and imaginary parts.
Complex selu_complex(Complex z);

/// log sum_i exp(y_i), shifted by the term of largest real part so that the
/// dominant exponential is exactly 1. Throws NumericalFailure if the shifted
/// sum cancels to zero.
Complex log_sum_exp(const Eigen::Ref<const Eigen::VectorXcd>& y);

Complex log_amplitude(const DeepNetwork& net, const SpinConfiguration& x);

/// Text dump: layer shapes, then row-major "re im" pairs in round-trip precision.
void write_network(std::ostream& out, const DeepNetwork& net);
DeepNetwork read_network(std::istream& in);

/// Real-weight layer for finite-width mean-field diagnostics:
/// W ~ N(0, sigma_w^2 / cols), b ~ N(0, sigma_b^2).
struct RealLayer {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
};

RealLayer sample_real_layer(int rows, int cols, double sigma_w, double sigma_b, std::uint64_t seed);

}  // namespace deepnqs
