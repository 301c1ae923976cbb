#include "deepnqs/hilbert.hpp"

#include "deepnqs/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace deepnqs {

Wavefunction make_wavefunction(int num_spins, Eigen::VectorXcd amplitudes) {
  if (num_spins < 1 || num_spins > kMaxEnumeratedSpins) {
    throw std::invalid_argument(fmt::format("wavefunction: num_spins {} outside [1, {}]", num_spins,
                                            kMaxEnumeratedSpins));
  }
  if (amplitudes.size() != (Eigen::Index{1} << num_spins)) {
    throw std::invalid_argument("wavefunction: amplitude count must be 2^L");
  }
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalFailure("wavefunction: norm is zero or not finite");
  amplitudes /= norm;
  return {num_spins, std::move(amplitudes)};
}

Wavefunction build_wavefunction(const DeepNetwork& net) {
  const int L = net.num_spins();
  if (L > kMaxEnumeratedSpins) {
    throw std::invalid_argument(fmt::format("build_wavefunction: L = {} exceeds enumeration guard {}", L,
                                            kMaxEnumeratedSpins));
  }
  const Eigen::Index dim = Eigen::Index{1} << L;
  Eigen::MatrixXd inputs(L, dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (int site = 0; site < L; ++site) inputs(site, n) = static_cast<double>((n >> (L - 1 - site)) & 1);
  }
  const Eigen::MatrixXcd outputs = net.forward_batch(inputs);

  Eigen::VectorXcd log_amp(dim);
  for (Eigen::Index n = 0; n < dim; ++n) log_amp(n) = log_sum_exp(outputs.col(n));
  const double shift = log_amp.real().maxCoeff();
  if (!std::isfinite(shift)) throw NumericalFailure("build_wavefunction: non-finite log-amplitude");

  Eigen::VectorXcd amplitudes(dim);
  for (Eigen::Index n = 0; n < dim; ++n) amplitudes(n) = std::exp(log_amp(n) - shift);
  return make_wavefunction(L, std::move(amplitudes));
}

Eigen::VectorXd reduced_spectrum(const Wavefunction& psi, int cut) {
  const int L = psi.num_spins;
  if (cut < 1 || cut > L - 1) throw std::invalid_argument(fmt::format("reduced_spectrum: cut {} outside [1, {}]", cut, L - 1));
  const Eigen::Index rows = Eigen::Index{1} << cut;
  const Eigen::Index cols = Eigen::Index{1} << (L - cut);
  // Row-major reshape: row = first `cut` sites, column = the rest.
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      psi.amplitudes.data(), rows, cols);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  Eigen::VectorXd spectrum = svd.singularValues().array().square();
  std::sort(spectrum.data(), spectrum.data() + spectrum.size(), std::greater<>());
  return spectrum;
}

double von_neumann_entropy(std::span<const double> spectrum) {
  double entropy = 0.0;
  for (double p : spectrum) {
    if (p < -1e-10) throw std::invalid_argument(fmt::format("von_neumann_entropy: negative weight {}", p));
    if (p < 1e-14) continue;
    entropy -= p * std::log(p);
  }
  // A leading weight of 1 + ulp would otherwise give -0 or a tiny negative value.
  return std::max(entropy, 0.0);
}

double von_neumann_entropy(const Eigen::VectorXd& spectrum) {
  return von_neumann_entropy(std::span<const double>(spectrum.data(), static_cast<std::size_t>(spectrum.size())));
}

EntanglementResult entanglement(const Wavefunction& psi, int cut) {
  EntanglementResult result;
  result.cut = cut;
  result.schmidt_spectrum = reduced_spectrum(psi, cut);
  result.entropy = von_neumann_entropy(result.schmidt_spectrum);
  return result;
}

double half_chain_entropy(const Wavefunction& psi) {
  if (psi.num_spins % 2 != 0) throw std::invalid_argument("half_chain_entropy: L must be even");
  return von_neumann_entropy(reduced_spectrum(psi, psi.num_spins / 2));
}

double page_entropy(int num_spins, PageConvention convention) {
  if (num_spins < 2) throw std::invalid_argument("page_entropy: L must be >= 2");
  if (convention == PageConvention::FullChain) return num_spins * std::numbers::ln2 - 0.5;
  if (num_spins % 2 != 0) throw std::invalid_argument("page_entropy: half-chain convention needs even L");
  return (num_spins / 2) * std::numbers::ln2 - 0.5;
}

void write_wavefunction(std::ostream& out, const Wavefunction& psi) {
  fmt::print(out, "wavefunction {} {}\n", psi.num_spins, kBitOrderTag);
  for (Eigen::Index n = 0; n < psi.amplitudes.size(); ++n) {
    fmt::print(out, "{} {}\n", psi.amplitudes(n).real(), psi.amplitudes(n).imag());
  }
}

Wavefunction read_wavefunction(std::istream& in) {
  std::string magic, order;
  int L = 0;
  if (!(in >> magic >> L >> order) || magic != "wavefunction") throw std::runtime_error("read_wavefunction: bad header");
  if (order != kBitOrderTag) throw std::runtime_error("read_wavefunction: unsupported bit order '" + order + "'");
  if (L < 1 || L > kMaxEnumeratedSpins) throw std::runtime_error("read_wavefunction: bad size");
  Eigen::VectorXcd amplitudes(Eigen::Index{1} << L);
  for (Eigen::Index n = 0; n < amplitudes.size(); ++n) {
    double re = 0.0, im = 0.0;
    if (!(in >> re >> im)) throw std::runtime_error("read_wavefunction: truncated amplitudes");
    amplitudes(n) = Complex(re, im);
  }
  return {L, std::move(amplitudes)};
}

}  // namespace deepnqs
