#include "deepnqs/errors.hpp"
#include "deepnqs/hilbert.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace deepnqs;

namespace {

const double kLn2 = std::numbers::ln2;

Wavefunction basis_state(int L, long index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1L << L);
  v(index) = 1.0;
  return make_wavefunction(L, v);
}

Wavefunction ghz(int L) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1L << L);
  v(0) = 1.0;
  v((1L << L) - 1) = 1.0;
  return make_wavefunction(L, v);
}

// Exact Haar average for a d_A x d_B bipartition with d_A <= d_B.
double finite_page(long d_a, long d_b) {
  double sum = 0.0;
  for (long k = d_b + 1; k <= d_a * d_b; ++k) sum += 1.0 / static_cast<double>(k);
  return sum - static_cast<double>(d_a - 1) / (2.0 * static_cast<double>(d_b));
}

double haar_average(int L, int samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  double total = 0.0;
  for (int s = 0; s < samples; ++s) total += half_chain_entropy(make_wavefunction(L, oracle::haar_state(L, gen)));
  return total / samples;
}

NetworkConfig config(int L, int depth, double alpha, double sigma_w, std::uint64_t seed) {
  NetworkConfig c;
  c.num_spins = L;
  c.depth = depth;
  c.width_factor = alpha;
  c.sigma_w = sigma_w;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("make_wavefunction") {
  Eigen::VectorXcd v(4);
  v << 3.0, Complex(0.0, 4.0), 0.0, 0.0;
  const auto psi = make_wavefunction(2, v);
  CHECK(std::abs(psi.amplitudes.norm() - 1.0) < 1e-15);
  CHECK(std::abs(psi.amplitudes(0) - 0.6) < 1e-15);
  CHECK_THROWS_AS(make_wavefunction(3, v), std::invalid_argument);
  CHECK_THROWS_AS(make_wavefunction(2, Eigen::VectorXcd::Zero(4)), NumericalFailure);
}

TEST_CASE("build_wavefunction") {
  SUBCASE("degenerate network gives the uniform state") {
    const auto psi = build_wavefunction(sample_network(config(2, 1, 0.5, 0.0, 0)));
    for (long n = 0; n < 4; ++n) CHECK(std::abs(psi.amplitudes(n) - 0.5) < 1e-15);
  }
  SUBCASE("normalized for arbitrary networks") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto psi = build_wavefunction(sample_network(config(8, 6, 1.0, 1.6, seed)));
      CHECK(std::abs(psi.amplitudes.squaredNorm() - 1.0) < 1e-12);
    }
  }
  SUBCASE("matches high-precision amplitudes up to normalization") {
    const auto net = sample_network(config(4, 3, 1.0, 1.3, 99));
    const auto psi = build_wavefunction(net);
    std::vector<Complex> reference(16);
    double norm_sq = 0.0;
    for (std::uint64_t n = 0; n < 16; ++n) {
      const auto a = oracle::amplitude_high_precision(net, SpinConfiguration::from_index(n, 4));
      reference[n] = {static_cast<double>(a.re), static_cast<double>(a.im)};
      norm_sq += std::norm(reference[n]);
    }
    for (std::uint64_t n = 0; n < 16; ++n) {
      const Complex expected = reference[n] / std::sqrt(norm_sq);
      CHECK(std::abs(psi.amplitudes(static_cast<long>(n)) - expected) < 1e-10 * std::abs(expected));
    }
  }
  SUBCASE("enumeration guard") {
    CHECK_THROWS_AS(build_wavefunction(sample_network(config(22, 1, 0.1, 1.0, 0))), std::invalid_argument);
  }
}

TEST_CASE("reduced spectrum") {
  SUBCASE("product state is rank one") {
    const auto spectrum = reduced_spectrum(basis_state(6, 63), 3);
    CHECK(spectrum(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(spectrum.tail(spectrum.size() - 1).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("Bell state") {
    Eigen::VectorXcd v(4);
    v << 0.0, 1.0, 1.0, 0.0;
    const auto spectrum = reduced_spectrum(make_wavefunction(2, v), 1);
    REQUIRE(spectrum.size() == 2);
    CHECK(std::abs(spectrum(0) - 0.5) < 1e-15);
    CHECK(std::abs(spectrum(1) - 0.5) < 1e-15);
  }
  SUBCASE("bit order puts site 0 in the row index") {
    // |1 0 0 0>: site 0 up only, product across any cut.
    const auto psi = basis_state(4, 0b1000);
    CHECK(entanglement(psi, 1).entropy == 0.0);
    // (|1000> + |0100>)/sqrt2 entangles sites 0 and 1, so only the cut between them sees it.
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
    v(0b1000) = 1.0;
    v(0b0100) = 1.0;
    const auto pair = make_wavefunction(4, v);
    CHECK(std::abs(entanglement(pair, 1).entropy - kLn2) < 1e-14);
    CHECK(std::abs(entanglement(pair, 2).entropy) < 1e-14);
  }
  SUBCASE("matches dense reduced density matrix") {
    std::mt19937_64 gen(31);
    for (int L : {4, 6, 8}) {
      for (int trial = 0; trial < 5; ++trial) {
        const auto psi = make_wavefunction(L, oracle::haar_state(L, gen));
        for (int cut = 1; cut < L; ++cut) {
          const Eigen::VectorXd ours = reduced_spectrum(psi, cut);
          const Eigen::VectorXd dense = oracle::dense_rho_spectrum(psi.amplitudes, L, cut);
          const long shared = std::min(ours.size(), dense.size());
          CHECK((ours.head(shared) - dense.head(shared)).cwiseAbs().maxCoeff() < 1e-10);
          CHECK(std::abs(ours.sum() - 1.0) < 1e-10);
          for (long i = 1; i < ours.size(); ++i) CHECK(ours(i) <= ours(i - 1));
        }
      }
    }
  }
  SUBCASE("invalid cut") {
    const auto psi = basis_state(4, 0);
    CHECK_THROWS_AS(reduced_spectrum(psi, 0), std::invalid_argument);
    CHECK_THROWS_AS(reduced_spectrum(psi, 4), std::invalid_argument);
  }
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(std::vector<double>{1.0, 0.0}) == 0.0);
  CHECK(std::abs(von_neumann_entropy(std::vector<double>{0.5, 0.5}) - kLn2) < 1e-15);
  for (int k = 1; k <= 8; ++k) {
    const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(1L << k, 1.0 / static_cast<double>(1L << k));
    CHECK(std::abs(von_neumann_entropy(uniform) - k * kLn2) < 1e-12);
  }
  CHECK(von_neumann_entropy(std::vector<double>{1.0, 1e-15}) == 0.0);
  CHECK_NOTHROW(von_neumann_entropy(std::vector<double>{1.0, -1e-11}));
  CHECK_THROWS_AS(von_neumann_entropy(std::vector<double>{1.0, -1e-9}), std::invalid_argument);
}

TEST_CASE("half-chain entropy") {
  CHECK(half_chain_entropy(basis_state(6, 0b101100)) == 0.0);
  for (int L : {2, 4, 6, 8, 10}) CHECK(std::abs(half_chain_entropy(ghz(L)) - kLn2) < 1e-13);
  Eigen::VectorXcd odd = Eigen::VectorXcd::Zero(8);
  odd(0) = 1.0;
  CHECK_THROWS_AS(half_chain_entropy(make_wavefunction(3, odd)), std::invalid_argument);
}

TEST_CASE("Haar-random L=10 entropy is near the half-chain Page value") {
  const double mean = haar_average(10, 200, 4);
  const double page = page_entropy(10, PageConvention::HalfChain);
  CHECK(std::abs(mean - page) < 0.1 * page);
}

TEST_CASE("Page values") {
  CHECK(page_entropy(8, PageConvention::FullChain) == doctest::Approx(8 * kLn2 - 0.5).epsilon(1e-15));
  CHECK(page_entropy(8, PageConvention::FullChain) == doctest::Approx(5.0452).epsilon(1e-4));
  CHECK(page_entropy(8, PageConvention::HalfChain) == doctest::Approx(2.2726).epsilon(1e-4));
  CHECK(page_entropy(2, PageConvention::HalfChain) == doctest::Approx(0.1931).epsilon(1e-3));
  CHECK_THROWS_AS(page_entropy(1, PageConvention::FullChain), std::invalid_argument);
  CHECK_THROWS_AS(page_entropy(5, PageConvention::HalfChain), std::invalid_argument);
}

TEST_CASE("Haar averages match the exact finite-size Page sum") {
  CHECK(haar_average(2, 100000, 11) == doctest::Approx(finite_page(2, 2)).epsilon(0.02));
  CHECK(haar_average(8, 2000, 12) == doctest::Approx(finite_page(16, 16)).epsilon(0.02));
}

TEST_CASE("two-qubit Haar average matches the half-chain Page value") {
  CHECK(haar_average(2, 100000, 13) == doctest::Approx(page_entropy(2, PageConvention::HalfChain)).epsilon(0.02));
}

TEST_CASE("entropy properties on network states") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const double sigma_w = 0.5 + 0.4 * static_cast<double>(seed);
    const auto psi = build_wavefunction(sample_network(config(8, 4, 1.0, sigma_w, seed)));
    const auto result = entanglement(psi, 4);
    CHECK(result.entropy >= 0.0);
    CHECK(result.entropy <= 4 * kLn2 + 1e-9);
    CHECK(std::abs(result.schmidt_spectrum.sum() - 1.0) < 1e-10);
    CHECK(result.schmidt_spectrum(0) >= 1.0 / 16.0);

    // Complementary reshape: swap the two halves of every basis index.
    Eigen::VectorXcd swapped(256);
    for (long n = 0; n < 256; ++n) swapped((n & 15) << 4 | (n >> 4)) = psi.amplitudes(n);
    const auto complement = make_wavefunction(8, swapped);
    CHECK(std::abs(half_chain_entropy(complement) - result.entropy) < 1e-10);

    const Complex phase = std::polar(1.0, 0.37 + static_cast<double>(seed));
    const auto rotated = make_wavefunction(8, phase * psi.amplitudes);
    CHECK(std::abs(half_chain_entropy(rotated) - result.entropy) < 1e-12);
  }
}

TEST_CASE("wavefunction dump round trip") {
  const auto psi = build_wavefunction(sample_network(config(4, 2, 1.0, 1.1, 3)));
  std::stringstream buffer;
  write_wavefunction(buffer, psi);
  const std::string text = buffer.str();
  CHECK(text.rfind("wavefunction 4 site0-msb\n", 0) == 0);
  const auto back = read_wavefunction(buffer);
  CHECK(back.num_spins == 4);
  CHECK(back.amplitudes == psi.amplitudes);
  std::stringstream wrong_order("wavefunction 1 site0-lsb\n1 0\n0 0\n");
  CHECK_THROWS(read_wavefunction(wrong_order));
}
