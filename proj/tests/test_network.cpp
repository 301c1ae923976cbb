#include "deepnqs/errors.hpp"
#include "deepnqs/network.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace deepnqs;

namespace {

NetworkConfig small_config(int L, int depth, double alpha, double sigma_w, std::uint64_t seed) {
  NetworkConfig c;
  c.num_spins = L;
  c.depth = depth;
  c.width_factor = alpha;
  c.sigma_w = sigma_w;
  c.seed = seed;
  return c;
}

bool same_layers(const DeepNetwork& a, const DeepNetwork& b) {
  if (a.depth() != b.depth()) return false;
  for (int l = 0; l < a.depth(); ++l) {
    const auto& x = a.layers()[static_cast<std::size_t>(l)];
    const auto& y = b.layers()[static_cast<std::size_t>(l)];
    if (x.rows() != y.rows() || x.cols() != y.cols() || x != y) return false;
  }
  return true;
}

double reference_selu(double x) {
  const double scale = 1.0507009873554805, alpha = 1.6732632423543772;
  return x > 0 ? scale * x : scale * alpha * std::expm1(x);
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(small_config(4, 2, 1.0, 1.0, 0).validate());
  CHECK_THROWS_AS(small_config(5, 2, 1.0, 1.0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(small_config(0, 2, 1.0, 1.0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(small_config(4, 0, 1.0, 1.0, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(small_config(4, 2, 0.1, 1.0, 0).validate(), std::invalid_argument);
  CHECK(small_config(10, 1, 1.5, 1.0, 0).width() == 15);
  CHECK(small_config(4, 1, 0.25, 1.0, 0).width() == 1);
}

TEST_CASE("spin configuration") {
  const auto x = SpinConfiguration::from_index(0b1011, 4);
  CHECK(x[0] == 1);
  CHECK(x[1] == 0);
  CHECK(x[2] == 1);
  CHECK(x[3] == 1);
  CHECK_THROWS_AS(SpinConfiguration({0, 2}), std::invalid_argument);
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto config = small_config(4, 2, 1.0, 1.0, 1234);
  CHECK(same_layers(sample_network(config), sample_network(config)));
  auto other = config;
  other.seed = 1235;
  CHECK_FALSE(same_layers(sample_network(config), sample_network(other)));
}

TEST_CASE("layer shapes") {
  const auto net = sample_network(small_config(6, 3, 2.0, 1.0, 1));
  REQUIRE(net.depth() == 3);
  CHECK(net.layers()[0].rows() == 12);
  CHECK(net.layers()[0].cols() == 6);
  CHECK(net.layers()[1].rows() == 12);
  CHECK(net.layers()[1].cols() == 12);
  CHECK(net.width() == 12);
}

TEST_CASE("weight variance") {
  SUBCASE("per component split") {
    auto config = small_config(8, 3, 2.0, 1.5, 77);
    config.variance_split = VarianceSplit::PerComponent;
    // 16x16 second layer gives 256 entries per network; pool four networks for >= 1e3 samples.
    double sum = 0.0, sum_sq = 0.0;
    int n = 0;
    for (std::uint64_t s = 0; s < 4; ++s) {
      config.seed = 77 + s;
      const auto net = sample_network(config);
      const auto& w = net.layers()[1];
      for (long i = 0; i < w.size(); ++i) {
        const double re = w.data()[i].real();
        sum += re;
        sum_sq += re * re;
        ++n;
      }
    }
    const double mean = sum / n;
    const double var = (sum_sq - n * mean * mean) / (n - 1);
    CHECK(n >= 1000);
    CHECK(std::abs(var - 1.5 * 1.5 / 16) < 0.05 * 1.5 * 1.5 / 16);
  }
  SUBCASE("total modulus split") {
    auto config = small_config(8, 3, 2.0, 1.5, 5);
    double re_sq = 0.0, im_sq = 0.0;
    int n = 0;
    for (std::uint64_t s = 0; s < 4; ++s) {
      config.seed = 5 + s;
      const auto net = sample_network(config);
      const auto& w = net.layers()[1];
      for (long i = 0; i < w.size(); ++i) {
        re_sq += std::norm(w.data()[i].real());
        im_sq += std::norm(w.data()[i].imag());
        ++n;
      }
    }
    const double target = 1.5 * 1.5 / 32;
    CHECK(std::abs(re_sq / n - target) < 0.1 * target);
    CHECK(std::abs(im_sq / n - target) < 0.1 * target);
  }
  SUBCASE("first layer uses the input dimension") {
    auto config = small_config(10, 1, 4.0, 2.0, 9);
    config.variance_split = VarianceSplit::PerComponent;
    const auto net = sample_network(config);
    const auto& w = net.layers()[0];
    double sum_sq = 0.0;
    for (long i = 0; i < w.size(); ++i) sum_sq += std::norm(w.data()[i].imag());
    const double var = sum_sq / static_cast<double>(w.size());
    CHECK(std::abs(var - 0.4) < 0.2 * 0.4);
  }
}

TEST_CASE("weight entries have zero mean across realizations") {
  auto config = small_config(4, 2, 1.0, 1.0, 0);
  const int realizations = 2000;
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < realizations; ++r) {
    config.seed = 1000 + static_cast<std::uint64_t>(r);
    const double v = sample_network(config).layers()[1](2, 3).real();
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / realizations;
  const double se = std::sqrt((sum_sq / realizations - mean * mean) / realizations);
  CHECK(std::abs(mean) < 4.0 * se);
}

TEST_CASE("zero weight variance gives zero weights and outputs") {
  const auto net = sample_network(small_config(6, 3, 1.0, 0.0, 3));
  for (const auto& w : net.layers()) CHECK(w.isZero(0.0));
  const auto y = net.forward(SpinConfiguration::from_index(0b101101, 6));
  CHECK(y.isZero(0.0));
  CHECK(std::abs(log_amplitude(net, SpinConfiguration::from_index(7, 6)) - std::log(6.0)) < 1e-15);
}

TEST_CASE("selu_complex") {
  CHECK(selu_complex({0.0, 0.0}) == Complex(0.0, 0.0));
  const Complex one = selu_complex({1.0, 0.0});
  CHECK(one.real() == doctest::Approx(1.0507009873554805).epsilon(1e-15));
  CHECK(one.imag() == 0.0);
  const Complex neg = selu_complex({-1.0, -1.0});
  const double expected = 1.0507009873554805 * 1.6732632423543772 * (std::exp(-1.0) - 1.0);
  CHECK(neg.real() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(neg.imag() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(-1.1113).epsilon(1e-4));
  const Complex mixed = selu_complex({2.5, -0.3});
  CHECK(mixed.real() == doctest::Approx(reference_selu(2.5)));
  CHECK(mixed.imag() == doctest::Approx(reference_selu(-0.3)));
}

TEST_CASE("forward pass") {
  SUBCASE("all-zero input maps to zero") {
    for (int depth : {1, 4, 9}) {
      for (double alpha : {0.5, 1.0, 3.0}) {
        const auto net = sample_network(small_config(8, depth, alpha, 1.7, 11));
        CHECK(net.forward(SpinConfiguration::from_index(0, 8)).isZero(0.0));
      }
    }
  }
  SUBCASE("hand-written two-site layer") {
    Eigen::MatrixXcd w(2, 2);
    w << Complex(0.5, -1.0), Complex(-2.0, 0.25), Complex(1.5, 0.5), Complex(0.3, -0.7);
    const DeepNetwork net(2, {w});
    const auto y = net.forward(SpinConfiguration({1, 1}));
    // z = column sum: (-1.5 - 0.75i), (1.8 - 0.2i)
    CHECK(y(0).real() == doctest::Approx(reference_selu(-1.5)).epsilon(1e-15));
    CHECK(y(0).imag() == doctest::Approx(reference_selu(-0.75)).epsilon(1e-15));
    CHECK(y(1).real() == doctest::Approx(reference_selu(1.8)).epsilon(1e-15));
    CHECK(y(1).imag() == doctest::Approx(reference_selu(-0.2)).epsilon(1e-15));
    const auto y2 = net.forward(SpinConfiguration({0, 1}));
    CHECK(y2(0).real() == doctest::Approx(reference_selu(-2.0)).epsilon(1e-15));
    CHECK(y2(1).imag() == doctest::Approx(reference_selu(-0.7)).epsilon(1e-15));
  }
  SUBCASE("batched and single evaluation agree") {
    const auto net = sample_network(small_config(6, 4, 1.5, 1.2, 21));
    Eigen::MatrixXd inputs(6, 64);
    for (int n = 0; n < 64; ++n) {
      const auto x = SpinConfiguration::from_index(static_cast<std::uint64_t>(n), 6);
      for (int i = 0; i < 6; ++i) inputs(i, n) = x[i];
    }
    const auto batch = net.forward_batch(inputs);
    for (int n = 0; n < 64; ++n) {
      const auto single = net.forward(SpinConfiguration::from_index(static_cast<std::uint64_t>(n), 6));
      CHECK((batch.col(n) - single).norm() <= 1e-13 * (1.0 + single.norm()));
    }
  }
  SUBCASE("dimension mismatch") {
    const auto net = sample_network(small_config(4, 1, 1.0, 1.0, 0));
    CHECK_THROWS_AS(net.forward(SpinConfiguration({0, 1})), std::invalid_argument);
  }
}

TEST_CASE("log_sum_exp") {
  Eigen::VectorXcd zeros = Eigen::VectorXcd::Zero(7);
  CHECK(std::abs(log_sum_exp(zeros) - std::log(7.0)) < 1e-15);

  Eigen::VectorXcd single(1);
  single << Complex(3.25, 11.5);
  CHECK(log_sum_exp(single) == single(0));

  Eigen::VectorXcd huge(3);
  huge << Complex(1e4, 0.3), Complex(1e4 - 1.0, -2.0), Complex(-5.0, 1.0);
  const Complex l = log_sum_exp(huge);
  CHECK(std::isfinite(l.real()));
  CHECK(std::isfinite(l.imag()));
  CHECK(l.real() == doctest::Approx(1e4 + std::log(std::abs(1.0 + std::exp(Complex(-1.0, -2.3))))));

  Eigen::VectorXcd cancel(2);
  cancel << Complex(0.0, 0.0), Complex(0.0, std::numbers::pi);
  // exp(0) + exp(i pi) leaves a rounding residue of order 1e-16, not an exact zero.
  CHECK_NOTHROW(log_sum_exp(cancel));

  Eigen::VectorXcd bad(2);
  bad << Complex(std::numeric_limits<double>::infinity(), 0.0), Complex(0.0, 0.0);
  CHECK_THROWS_AS(log_sum_exp(bad), NumericalFailure);
}

TEST_CASE("width-one network returns its single output") {
  const auto net = sample_network(small_config(4, 3, 0.25, 1.3, 8));
  REQUIRE(net.width() == 1);
  for (std::uint64_t n = 1; n < 16; ++n) {
    const auto x = SpinConfiguration::from_index(n, 4);
    CHECK(log_amplitude(net, x) == net.forward(x)(0));
  }
}

TEST_CASE("log amplitude agrees with a high-precision evaluation") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto net = sample_network(small_config(4, 2, 1.0, 1.2, seed));
    for (std::uint64_t n = 0; n < 16; ++n) {
      const auto x = SpinConfiguration::from_index(n, 4);
      const auto ref = oracle::amplitude_high_precision(net, x);
      const Complex direct(static_cast<double>(ref.re), static_cast<double>(ref.im));
      const Complex ours = std::exp(log_amplitude(net, x));
      CHECK(std::abs(ours - direct) < 1e-12 * std::abs(direct));
    }
  }
}

TEST_CASE("network dump round trip") {
  const auto net = sample_network(small_config(4, 3, 1.5, 0.9, 42));
  std::stringstream buffer;
  write_network(buffer, net);
  const auto back = read_network(buffer);
  CHECK(back.num_spins() == 4);
  CHECK(same_layers(net, back));

  std::stringstream broken("deepnqs-network 1\nnum_spins 4\ndepth 1\nlayer 0 2 4\n0.1 0.2\n");
  CHECK_THROWS(read_network(broken));
}

TEST_CASE("variance split names") {
  CHECK(variance_split_from_string(to_string(VarianceSplit::PerComponent)) == VarianceSplit::PerComponent);
  CHECK(variance_split_from_string(to_string(VarianceSplit::TotalModulus)) == VarianceSplit::TotalModulus);
  CHECK_THROWS_AS(variance_split_from_string("both"), std::invalid_argument);
}

TEST_CASE("real layer statistics") {
  const auto layer = sample_real_layer(200, 400, 2.0, 0.5, 17);
  const double w_var = layer.weights.squaredNorm() / static_cast<double>(layer.weights.size());
  const double b_var = layer.bias.squaredNorm() / static_cast<double>(layer.bias.size());
  CHECK(w_var == doctest::Approx(4.0 / 400).epsilon(0.02));
  CHECK(b_var == doctest::Approx(0.25).epsilon(0.25));
  CHECK_THROWS_AS(sample_real_layer(0, 3, 1.0, 0.0, 0), std::invalid_argument);
}
