#include "deepnqs/observables.hpp"

#include "deepnqs/errors.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace deepnqs {

std::string_view to_string(Boundary boundary) { return boundary == Boundary::Periodic ? "periodic" : "open"; }

Boundary boundary_from_string(std::string_view name) {
  if (name == "periodic") return Boundary::Periodic;
  if (name == "open") return Boundary::Open;
  throw std::invalid_argument("unknown boundary '" + std::string(name) + "'");
}

std::string_view to_string(SpinConvention convention) {
  return convention == SpinConvention::SpinHalf ? "spin_half" : "pauli";
}

SpinConvention spin_convention_from_string(std::string_view name) {
  if (name == "spin_half") return SpinConvention::SpinHalf;
  if (name == "pauli") return SpinConvention::Pauli;
  throw std::invalid_argument("unknown spin convention '" + std::string(name) + "'");
}

void HamiltonianSpec::validate() const {
  if (num_spins < 2) throw std::invalid_argument("hamiltonian: L must be >= 2");
  if (num_spins > kMaxEnumeratedSpins) throw std::invalid_argument("hamiltonian: L exceeds enumeration guard");
}

std::vector<Bond> HamiltonianSpec::bonds() const {
  validate();
  std::vector<Bond> out;
  const double scale = convention == SpinConvention::Pauli ? 4.0 : 1.0;
  for (int distance : {1, 2}) {
    std::set<std::pair<int, int>> seen;
    const double coupling = scale * (distance == 1 ? j1 : j2);
    for (int i = 0; i < num_spins; ++i) {
      int j = i + distance;
      if (j >= num_spins) {
        if (boundary == Boundary::Open) continue;
        j %= num_spins;
      }
      if (i == j) continue;
      const auto key = std::minmax(i, j);
      if (!seen.insert(key).second) continue;
      out.push_back({key.first, key.second, coupling});
    }
  }
  return out;
}

namespace {

// Diagonal S^z S^z part and spin-flip partner of basis state n for one bond.
struct BondAction {
  double diagonal;
  std::uint64_t flipped;
  bool flips;
};

inline BondAction bond_action(int num_spins, const Bond& bond, std::uint64_t n) {
  const std::uint64_t mi = std::uint64_t{1} << (num_spins - 1 - bond.i);
  const std::uint64_t mj = std::uint64_t{1} << (num_spins - 1 - bond.j);
  const bool aligned = ((n & mi) != 0) == ((n & mj) != 0);
  return {aligned ? 0.25 : -0.25, n ^ (mi | mj), !aligned};
}

}  // namespace

Eigen::VectorXcd apply_hamiltonian(const HamiltonianSpec& spec, const Eigen::VectorXcd& psi) {
  const auto bonds = spec.bonds();
  const Eigen::Index dim = Eigen::Index{1} << spec.num_spins;
  if (psi.size() != dim) {
    throw std::invalid_argument(fmt::format("apply_hamiltonian: vector length {} != 2^{}", psi.size(), spec.num_spins));
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  // Gather form: each output entry sums its own contributions in fixed order.
  for (Eigen::Index n = 0; n < dim; ++n) {
    Complex acc = 0.0;
    for (const auto& bond : bonds) {
      const auto a = bond_action(spec.num_spins, bond, static_cast<std::uint64_t>(n));
      acc += bond.coupling * a.diagonal * psi(n);
      if (a.flips) acc += bond.coupling * 0.5 * psi(static_cast<Eigen::Index>(a.flipped));
    }
    out(n) = acc;
  }
  return out;
}

EnergyMoments energy_moments(const HamiltonianSpec& spec, const Wavefunction& psi) {
  if (psi.num_spins != spec.num_spins) throw std::invalid_argument("energy: wavefunction and Hamiltonian sizes differ");
  const Eigen::VectorXcd h_psi = apply_hamiltonian(spec, psi.amplitudes);
  const Complex energy = psi.amplitudes.dot(h_psi);
  if (std::abs(energy.imag()) >= 1e-10) {
    throw NumericalFailure(fmt::format("energy: imaginary residual {} violates Hermiticity", energy.imag()));
  }
  return {energy.real(), h_psi.squaredNorm()};
}

double energy_expectation(const HamiltonianSpec& spec, const Wavefunction& psi) {
  return energy_moments(spec, psi).energy;
}

double h_squared_expectation(const HamiltonianSpec& spec, const Wavefunction& psi) {
  return energy_moments(spec, psi).energy_squared;
}

GroundStateReference exact_spectrum_reference(const HamiltonianSpec& spec) {
  spec.validate();
  const int L = spec.num_spins;
  if (L > kMaxDiagonalizedSpins) {
    throw std::invalid_argument(fmt::format("exact_spectrum_reference: L = {} exceeds {}", L, kMaxDiagonalizedSpins));
  }
  const auto bonds = spec.bonds();
  const std::uint64_t dim = std::uint64_t{1} << L;

  std::vector<std::vector<std::uint64_t>> sectors(static_cast<std::size_t>(L) + 1);
  for (std::uint64_t n = 0; n < dim; ++n) sectors[static_cast<std::size_t>(std::popcount(n))].push_back(n);

  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd ground = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));

  std::vector<Eigen::Index> position(dim, -1);
  for (const auto& states : sectors) {
    const auto size = static_cast<Eigen::Index>(states.size());
    for (Eigen::Index k = 0; k < size; ++k) position[states[static_cast<std::size_t>(k)]] = k;
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index k = 0; k < size; ++k) {
      const std::uint64_t n = states[static_cast<std::size_t>(k)];
      for (const auto& bond : bonds) {
        const auto a = bond_action(L, bond, n);
        block(k, k) += bond.coupling * a.diagonal;
        if (a.flips) block(position[a.flipped], k) += bond.coupling * 0.5;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
    const auto& values = solver.eigenvalues();
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      const double e = values(k);
      if (e < best - 1e-12) {
        second = std::min(second, best);
        best = e;
        ground.setZero();
        for (Eigen::Index s = 0; s < size; ++s) {
          ground(static_cast<Eigen::Index>(states[static_cast<std::size_t>(s)])) = solver.eigenvectors()(s, k);
        }
      } else {
        second = std::min(second, e);
      }
    }
  }

  GroundStateReference ref;
  ref.energy = best;
  ref.degenerate = second - best < 1e-10;
  const Wavefunction psi = make_wavefunction(L, std::move(ground));
  ref.entropy = L % 2 == 0 ? half_chain_entropy(psi) : von_neumann_entropy(reduced_spectrum(psi, L / 2));
  return ref;
}

}  // namespace deepnqs
