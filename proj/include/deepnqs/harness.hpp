#pragma once

#include "deepnqs/activation.hpp"
#include "deepnqs/config.hpp"
#include "deepnqs/meanfield.hpp"
#include "deepnqs/network.hpp"
#include "deepnqs/observables.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace deepnqs {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kRngIdentifier =
    "mt19937_64 + std::normal_distribution (libstdc++), per-layer seed = splitmix64 mix of (seed, layer)";
inline constexpr std::string_view kActivationConvention = "split SELU: selu(Re z) + i selu(Im z), after every layer";

enum class Experiment { MeanFieldSweep, EntanglementSweep, ScalingSweep, EnergySweep, CorrelationCheck };

std::string_view to_string(Experiment experiment);
Experiment experiment_from_string(std::string_view name);

struct SweepConfig {
  Experiment experiment = Experiment::EntanglementSweep;
  std::vector<double> sigma_w_grid;
  std::vector<int> L_list{10};
  std::vector<int> mu_list{20};
  double alpha = 1.0;
  int n_realizations = 200;
  std::uint64_t master_seed = 0;
  HamiltonianSpec hamiltonian{};  // num_spins is replaced per grid point
  VarianceSplit variance_split = VarianceSplit::TotalModulus;

  // Mean-field and correlation-check settings.
  double sigma_b = 0.01;
  Activation activation = Activation::Tanh;
  int quadrature_order = 64;
  double fixed_point_tol = 1e-12;
  int max_iters = 10000;
  int width = 1024;                 // correlation check only
  double initial_correlation = 0.5;  // correlation check only

  int threads = 0;  // 0 = hardware concurrency
  bool standard_error = false;
  std::string output_path;
  std::string dump_path;

  void validate() const;
};

/// Applies recognised keys on top of `cfg`; unknown keys are rejected.
void apply_key_values(SweepConfig& cfg, const KeyValues& kv);
KeyValues to_key_values(const SweepConfig& cfg);

struct Summary {
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation, divisor n - 1
  int n = 0;

  double standard_error() const;
};

/// Two-pass mean and sample standard deviation.
Summary summarize(std::span<const double> values);

struct RealizationRecord {
  int index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  double entropy = 0.0;
  double energy = 0.0;
  double energy_squared = 0.0;
};

struct EnsembleResult {
  int num_spins = 0;
  int depth = 0;
  double sigma_w = 0.0;
  Summary entropy;
  std::optional<Summary> energy;
  std::optional<Summary> energy_squared;
  int failures = 0;
  std::vector<RealizationRecord> realizations;
};

/// Seed of realization r at grid indices (sigma, mu): derive(master, {sigma, mu, r}).
std::uint64_t realization_seed(std::uint64_t master, std::size_t sigma_index, std::size_t mu_index,
                               std::size_t realization);

std::vector<MeanFieldPoint> run_meanfield_sweep(const SweepConfig& cfg);
std::vector<EnsembleResult> run_entanglement_sweep(const SweepConfig& cfg);
std::vector<EnsembleResult> run_scaling_sweep(const SweepConfig& cfg);
std::vector<EnsembleResult> run_energy_sweep(const SweepConfig& cfg);

struct CorrelationSample {
  double sigma_w = 0.0;
  int layer = 0;
  double empirical = 0.0;
  double empirical_sem = 0.0;
  double meanfield = 0.0;
};

/// Propagates two inputs of correlation `initial_correlation` through shared
/// real-weight networks of width `width` and depth mu_list.front(); returns the
/// ensemble-mean layer correlation next to the mean-field prediction.
std::vector<CorrelationSample> empirical_correlation_check(const SweepConfig& cfg);

/// Decay length fitted to |c^l - c*| of the empirical curve. Uses layers after
/// the first 20% of the trajectory while the distance stays above
/// `noise_multiple` standard errors.
double empirical_decay_length(std::span<const CorrelationSample> samples, double c_star,
                              double noise_multiple = 3.0);

void write_entanglement_csv(std::ostream& out, const SweepConfig& cfg, std::span<const EnsembleResult> results);
void write_scaling_csv(std::ostream& out, const SweepConfig& cfg, std::span<const EnsembleResult> results);
void write_energy_csv(std::ostream& out, const SweepConfig& cfg, std::span<const EnsembleResult> results);
void write_correlation_csv(std::ostream& out, std::span<const CorrelationSample> samples);
void write_realizations_csv(std::ostream& out, std::span<const EnsembleResult> results);

/// JSON sidecar: version, RNG, conventions and the effective configuration.
void write_metadata(std::ostream& out, const SweepConfig& cfg);

/// Runs cfg.experiment and writes the CSV (stdout when output_path is empty),
/// the `.meta.json` sidecar next to it and the optional realization dump.
void run_experiment(const SweepConfig& cfg, std::ostream& fallback);

}  // namespace deepnqs
