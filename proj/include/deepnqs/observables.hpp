#pragma once

#include "deepnqs/hilbert.hpp"

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace deepnqs {

enum class Boundary { Periodic, Open };

/// SpinHalf uses S = sigma / 2; Pauli uses sigma itself (H scaled by 4).
enum class SpinConvention { SpinHalf, Pauli };

std::string_view to_string(Boundary boundary);
Boundary boundary_from_string(std::string_view name);
std::string_view to_string(SpinConvention convention);
SpinConvention spin_convention_from_string(std::string_view name);

struct Bond {
  int i;
  int j;
  double coupling;
};

/// J1-J2 Heisenberg chain H = J1 sum_<ij> S_i.S_j + J2 sum_<<ij>> S_i.S_j.
struct HamiltonianSpec {
  int num_spins = 10;
  double j1 = 1.0;
  double j2 = 0.2;
  Boundary boundary = Boundary::Periodic;
  SpinConvention convention = SpinConvention::SpinHalf;

  void validate() const;

  /// Distinct unordered site pairs at distance 1 (J1) and 2 (J2). A periodic
  /// wraparound pair that repeats a pair of the same distance, or joins a site
  /// to itself, is dropped.
  std::vector<Bond> bonds() const;
};

/// H psi, bond by bond, without forming the 2^L x 2^L matrix.
Eigen::VectorXcd apply_hamiltonian(const HamiltonianSpec& spec, const Eigen::VectorXcd& psi);

/// Re <psi|H|psi>; throws NumericalFailure if |Im| >= 1e-10.
double energy_expectation(const HamiltonianSpec& spec, const Wavefunction& psi);

/// <psi|H^2|psi> = ||H psi||^2.
double h_squared_expectation(const HamiltonianSpec& spec, const Wavefunction& psi);

struct EnergyMoments {
  double energy;
  double energy_squared;
};

/// Both moments from a single application of H.
EnergyMoments energy_moments(const HamiltonianSpec& spec, const Wavefunction& psi);

inline constexpr int kMaxDiagonalizedSpins = 14;

struct GroundStateReference {
  double energy = 0.0;
  double entropy = 0.0;  // half-chain entropy of the returned ground vector
  bool degenerate = false;
};

/// Dense diagonalization block by block in total S^z. `degenerate` is set
/// when the two lowest levels lie within 1e-10 of each other, in which case
/// the entropy refers to one arbitrary vector of the ground manifold.
GroundStateReference exact_spectrum_reference(const HamiltonianSpec& spec);

}  // namespace deepnqs
