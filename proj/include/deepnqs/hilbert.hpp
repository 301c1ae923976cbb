#pragma once

#include "deepnqs/network.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace deepnqs {

inline constexpr int kMaxEnumeratedSpins = 20;

/// Tag written next to every dumped state: site 0 is the most significant bit.
inline constexpr std::string_view kBitOrderTag = "site0-msb";

/// Normalized amplitudes over the full 2^L basis. Basis index n holds the
/// configuration SpinConfiguration::from_index(n, L).
struct Wavefunction {
  int num_spins = 0;
  Eigen::VectorXcd amplitudes;

  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes.size()); }
};

/// Wraps and normalizes raw amplitudes. Throws on a length that is not 2^L
/// and NumericalFailure on a zero or non-finite norm.
Wavefunction make_wavefunction(int num_spins, Eigen::VectorXcd amplitudes);

/// Exact enumeration of all 2^L log-amplitudes, shifted by their largest
/// real part before exponentiation.
Wavefunction build_wavefunction(const DeepNetwork& net);

/// Squared singular values of the 2^cut x 2^(L-cut) reshape, nonincreasing.
/// These are the eigenvalues of the reduced density matrix of sites [0, cut).
Eigen::VectorXd reduced_spectrum(const Wavefunction& psi, int cut);

/// -sum p ln p over entries >= 1e-14.
double von_neumann_entropy(std::span<const double> spectrum);
double von_neumann_entropy(const Eigen::VectorXd& spectrum);

struct EntanglementResult {
  int cut = 0;
  Eigen::VectorXd schmidt_spectrum;
  double entropy = 0.0;
};

EntanglementResult entanglement(const Wavefunction& psi, int cut);

double half_chain_entropy(const Wavefunction& psi);

enum class PageConvention {
  FullChain,  // L ln 2 - 1/2
  HalfChain,  // (L/2) ln 2 - 1/2, the equal-bipartition Haar average
};

double page_entropy(int num_spins, PageConvention convention);

/// Text dump: header "wavefunction <L> <bit-order>", then 2^L "re im" lines.
void write_wavefunction(std::ostream& out, const Wavefunction& psi);
Wavefunction read_wavefunction(std::istream& in);

}  // namespace deepnqs
