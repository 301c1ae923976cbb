#include "deepnqs/harness.hpp"

#include "deepnqs/errors.hpp"
#include "deepnqs/hilbert.hpp"
#include "deepnqs/parallel.hpp"
#include "deepnqs/seed.hpp"

#include <json.hpp>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace deepnqs {

std::string_view to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::MeanFieldSweep: return "meanfield-sweep";
    case Experiment::EntanglementSweep: return "entanglement-sweep";
    case Experiment::ScalingSweep: return "scaling-sweep";
    case Experiment::EnergySweep: return "energy-sweep";
    case Experiment::CorrelationCheck: return "correlation-check";
  }
  return "unknown";
}

Experiment experiment_from_string(std::string_view name) {
  for (auto e : {Experiment::MeanFieldSweep, Experiment::EntanglementSweep, Experiment::ScalingSweep,
                 Experiment::EnergySweep, Experiment::CorrelationCheck}) {
    if (name == to_string(e)) return e;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

void SweepConfig::validate() const {
  if (sigma_w_grid.empty()) throw std::invalid_argument("config: sigma_w grid is empty");
  for (double s : sigma_w_grid) {
    if (!(s > 0.0)) throw std::invalid_argument(fmt::format("config: sigma_w values must be positive, got {}", s));
  }
  if (n_realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
  if (mu_list.empty()) throw std::invalid_argument("config: mu list is empty");
  for (int mu : mu_list) {
    if (mu < 1) throw std::invalid_argument("config: mu values must be >= 1");
  }
  if (!(sigma_b >= 0.0)) throw std::invalid_argument("config: sigma_b must be nonnegative");
  if (experiment == Experiment::MeanFieldSweep || experiment == Experiment::CorrelationCheck) {
    if (experiment == Experiment::CorrelationCheck && width < 64) {
      throw std::invalid_argument(fmt::format("config: correlation check needs width >= 64, got {}", width));
    }
    if (!(std::abs(initial_correlation) <= 1.0)) throw std::invalid_argument("config: c0 must lie in [-1, 1]");
    return;
  }
  if (L_list.empty()) throw std::invalid_argument("config: L list is empty");
  for (int L : L_list) {
    if (L < 2 || L % 2 != 0 || L > kMaxEnumeratedSpins) {
      throw std::invalid_argument(fmt::format("config: L = {} must be even and in [2, {}]", L, kMaxEnumeratedSpins));
    }
    if (std::lround(alpha * L) < 1) throw std::invalid_argument("config: alpha * L must round to >= 1");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("config: alpha must be positive");
}

void apply_key_values(SweepConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "experiment") cfg.experiment = experiment_from_string(value);
    else if (key == "sigma_w") cfg.sigma_w_grid = parse_real_grid(value);
    else if (key == "L") cfg.L_list = parse_int_list(value);
    else if (key == "mu") cfg.mu_list = parse_int_list(value);
    else if (key == "alpha") cfg.alpha = std::stod(value);
    else if (key == "realizations") cfg.n_realizations = std::stoi(value);
    else if (key == "seed") cfg.master_seed = std::stoull(value);
    else if (key == "J1") cfg.hamiltonian.j1 = std::stod(value);
    else if (key == "J2") cfg.hamiltonian.j2 = std::stod(value);
    else if (key == "boundary") cfg.hamiltonian.boundary = boundary_from_string(value);
    else if (key == "spin_convention") cfg.hamiltonian.convention = spin_convention_from_string(value);
    else if (key == "weight_variance") cfg.variance_split = variance_split_from_string(value);
    else if (key == "sigma_b") cfg.sigma_b = std::stod(value);
    else if (key == "activation") cfg.activation = activation_from_string(value);
    else if (key == "quadrature_order") cfg.quadrature_order = std::stoi(value);
    else if (key == "fixed_point_tol") cfg.fixed_point_tol = std::stod(value);
    else if (key == "max_iters") cfg.max_iters = std::stoi(value);
    else if (key == "width") cfg.width = std::stoi(value);
    else if (key == "c0") cfg.initial_correlation = std::stod(value);
    else if (key == "threads") cfg.threads = std::stoi(value);
    else if (key == "standard_error") cfg.standard_error = parse_bool(value);
    else if (key == "output") cfg.output_path = value;
    else if (key == "dump") cfg.dump_path = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

namespace {

template <class T>
std::string join(const std::vector<T>& values) {
  return fmt::format("{}", fmt::join(values, ","));
}

}  // namespace

KeyValues to_key_values(const SweepConfig& cfg) {
  return {
      {"experiment", std::string(to_string(cfg.experiment))},
      {"sigma_w", join(cfg.sigma_w_grid)},
      {"L", join(cfg.L_list)},
      {"mu", join(cfg.mu_list)},
      {"alpha", fmt::format("{}", cfg.alpha)},
      {"realizations", std::to_string(cfg.n_realizations)},
      {"seed", std::to_string(cfg.master_seed)},
      {"J1", fmt::format("{}", cfg.hamiltonian.j1)},
      {"J2", fmt::format("{}", cfg.hamiltonian.j2)},
      {"boundary", std::string(to_string(cfg.hamiltonian.boundary))},
      {"spin_convention", std::string(to_string(cfg.hamiltonian.convention))},
      {"weight_variance", std::string(to_string(cfg.variance_split))},
      {"sigma_b", fmt::format("{}", cfg.sigma_b)},
      {"activation", std::string(to_string(cfg.activation))},
      {"quadrature_order", std::to_string(cfg.quadrature_order)},
      {"fixed_point_tol", fmt::format("{}", cfg.fixed_point_tol)},
      {"max_iters", std::to_string(cfg.max_iters)},
      {"width", std::to_string(cfg.width)},
      {"c0", fmt::format("{}", cfg.initial_correlation)},
      {"standard_error", cfg.standard_error ? "true" : "false"},
      {"output", cfg.output_path},
      {"dump", cfg.dump_path},
  };
}

double Summary::standard_error() const { return n > 0 ? std_dev / std::sqrt(static_cast<double>(n)) : 0.0; }

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) {
    s.mean = s.std_dev = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::uint64_t realization_seed(std::uint64_t master, std::size_t sigma_index, std::size_t mu_index,
                               std::size_t realization) {
  return derive_seed(master, {sigma_index, mu_index, realization});
}

namespace {

struct PointSpec {
  int num_spins;
  int depth;
  double sigma_w;
  std::vector<std::uint64_t> seeds;
};

RealizationRecord evaluate_realization(const SweepConfig& cfg, const PointSpec& point, int index, bool energy) {
  RealizationRecord rec;
  rec.index = index;
  rec.seed = point.seeds[static_cast<std::size_t>(index)];
  NetworkConfig net_cfg;
  net_cfg.num_spins = point.num_spins;
  net_cfg.depth = point.depth;
  net_cfg.width_factor = cfg.alpha;
  net_cfg.sigma_w = point.sigma_w;
  net_cfg.seed = rec.seed;
  net_cfg.variance_split = cfg.variance_split;
  try {
    const Wavefunction psi = build_wavefunction(sample_network(net_cfg));
    rec.entropy = half_chain_entropy(psi);
    if (energy) {
      HamiltonianSpec spec = cfg.hamiltonian;
      spec.num_spins = point.num_spins;
      const auto moments = energy_moments(spec, psi);
      rec.energy = moments.energy;
      rec.energy_squared = moments.energy_squared;
    }
    rec.ok = std::isfinite(rec.entropy) && std::isfinite(rec.energy) && std::isfinite(rec.energy_squared);
  } catch (const NumericalFailure&) {
    rec.ok = false;
  }
  return rec;
}

std::vector<EnsembleResult> run_ensemble(const SweepConfig& cfg, const std::vector<PointSpec>& points, bool energy) {
  const auto per_point = static_cast<std::size_t>(cfg.n_realizations);
  std::vector<RealizationRecord> records(points.size() * per_point);
  parallel_for(records.size(), cfg.threads, [&](std::size_t job) {
    const std::size_t p = job / per_point;
    records[job] = evaluate_realization(cfg, points[p], static_cast<int>(job % per_point), energy);
  });

  std::vector<EnsembleResult> results;
  results.reserve(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    EnsembleResult result;
    result.num_spins = points[p].num_spins;
    result.depth = points[p].depth;
    result.sigma_w = points[p].sigma_w;
    result.realizations.assign(records.begin() + static_cast<std::ptrdiff_t>(p * per_point),
                               records.begin() + static_cast<std::ptrdiff_t>((p + 1) * per_point));
    std::vector<double> s, h, h2;
    for (const auto& rec : result.realizations) {
      if (!rec.ok) {
        ++result.failures;
        continue;
      }
      s.push_back(rec.entropy);
      h.push_back(rec.energy);
      h2.push_back(rec.energy_squared);
    }
    if (10 * result.failures > cfg.n_realizations) {
      throw std::runtime_error(fmt::format("sweep aborted: {} of {} realizations failed at L={}, mu={}, sigma_w={}",
                                           result.failures, cfg.n_realizations, result.num_spins, result.depth,
                                           result.sigma_w));
    }
    result.entropy = summarize(s);
    if (energy) {
      result.energy = summarize(h);
      result.energy_squared = summarize(h2);
    }
    results.push_back(std::move(result));
  }
  return results;
}

std::vector<PointSpec> shared_seed_points(const SweepConfig& cfg) {
  std::vector<PointSpec> points;
  for (int L : cfg.L_list) {
    for (std::size_t m = 0; m < cfg.mu_list.size(); ++m) {
      for (std::size_t s = 0; s < cfg.sigma_w_grid.size(); ++s) {
        PointSpec p{L, cfg.mu_list[m], cfg.sigma_w_grid[s], {}};
        for (int r = 0; r < cfg.n_realizations; ++r) {
          p.seeds.push_back(realization_seed(cfg.master_seed, s, m, static_cast<std::size_t>(r)));
        }
        points.push_back(std::move(p));
      }
    }
  }
  return points;
}

MeanFieldParams meanfield_params(const SweepConfig& cfg, double sigma_w) {
  MeanFieldParams params;
  params.sigma_w = sigma_w;
  params.sigma_b = cfg.sigma_b;
  params.activation = cfg.activation;
  params.quadrature_order = cfg.quadrature_order;
  params.fixed_point_tol = cfg.fixed_point_tol;
  params.max_iters = cfg.max_iters;
  return params;
}

}  // namespace

std::vector<MeanFieldPoint> run_meanfield_sweep(const SweepConfig& cfg) {
  cfg.validate();
  return phase_sweep(cfg.sigma_w_grid, cfg.sigma_b, cfg.activation, meanfield_params(cfg, 1.0), cfg.threads);
}

std::vector<EnsembleResult> run_entanglement_sweep(const SweepConfig& cfg) {
  cfg.validate();
  return run_ensemble(cfg, shared_seed_points(cfg), false);
}

std::vector<EnsembleResult> run_energy_sweep(const SweepConfig& cfg) {
  cfg.validate();
  return run_ensemble(cfg, shared_seed_points(cfg), true);
}

std::vector<EnsembleResult> run_scaling_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<PointSpec> points;
  for (std::size_t m = 0; m < cfg.mu_list.size(); ++m) {
    for (std::size_t s = 0; s < cfg.sigma_w_grid.size(); ++s) {
      for (int L : cfg.L_list) {
        PointSpec p{L, cfg.mu_list[m], cfg.sigma_w_grid[s], {}};
        for (int r = 0; r < cfg.n_realizations; ++r) {
          p.seeds.push_back(derive_seed(cfg.master_seed, {s, m, static_cast<std::uint64_t>(r),
                                                          static_cast<std::uint64_t>(L)}));
        }
        points.push_back(std::move(p));
      }
    }
  }
  return run_ensemble(cfg, points, false);
}

void write_entanglement_csv(std::ostream& out, const SweepConfig& cfg, std::span<const EnsembleResult> results) {
  out << "L,mu,alpha,sigma_w,mean_entropy,std_entropy,n,failures" << (cfg.standard_error ? ",sem_entropy" : "")
      << '\n';
  for (const auto& r : results) {
    fmt::print(out, "{},{},{},{},{},{},{},{}", r.num_spins, r.depth, cfg.alpha, r.sigma_w, r.entropy.mean,
               r.entropy.std_dev, r.entropy.n, r.failures);
    if (cfg.standard_error) fmt::print(out, ",{}", r.entropy.standard_error());
    out << '\n';
  }
}

void write_scaling_csv(std::ostream& out, const SweepConfig& cfg, std::span<const EnsembleResult> results) {
  out << "L,mu,alpha,sigma_w,mean_entropy,std_entropy,page_paper,page_standard,n"
      << (cfg.standard_error ? ",sem_entropy" : "") << '\n';
  for (const auto& r : results) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{}", r.num_spins, r.depth, cfg.alpha, r.sigma_w, r.entropy.mean,
               r.entropy.std_dev, page_entropy(r.num_spins, PageConvention::FullChain),
               page_entropy(r.num_spins, PageConvention::HalfChain), r.entropy.n);
    if (cfg.standard_error) fmt::print(out, ",{}", r.entropy.standard_error());
    out << '\n';
  }
}

void write_energy_csv(std::ostream& out, const SweepConfig& cfg, std::span<const EnsembleResult> results) {
  out << "L,mu,alpha,sigma_w,J1,J2,boundary,mean_H,std_H,mean_H2,std_H2,n"
      << (cfg.standard_error ? ",sem_H,sem_H2" : "") << '\n';
  for (const auto& r : results) {
    if (!r.energy || !r.energy_squared) throw std::invalid_argument("write_energy_csv: result lacks energy moments");
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{}", r.num_spins, r.depth, cfg.alpha, r.sigma_w,
               cfg.hamiltonian.j1, cfg.hamiltonian.j2, to_string(cfg.hamiltonian.boundary), r.energy->mean,
               r.energy->std_dev, r.energy_squared->mean, r.energy_squared->std_dev, r.energy->n);
    if (cfg.standard_error) fmt::print(out, ",{},{}", r.energy->standard_error(), r.energy_squared->standard_error());
    out << '\n';
  }
}

void write_correlation_csv(std::ostream& out, std::span<const CorrelationSample> samples) {
  out << "sigma_w,layer,empirical_c,empirical_sem,meanfield_c\n";
  for (const auto& s : samples) {
    fmt::print(out, "{},{},{},{},{}\n", s.sigma_w, s.layer, s.empirical, s.empirical_sem, s.meanfield);
  }
}

void write_realizations_csv(std::ostream& out, std::span<const EnsembleResult> results) {
  out << "L,mu,sigma_w,realization,seed,ok,entropy,H,H2\n";
  for (const auto& r : results) {
    for (const auto& rec : r.realizations) {
      fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", r.num_spins, r.depth, r.sigma_w, rec.index, rec.seed,
                 rec.ok ? 1 : 0, rec.entropy, rec.energy, rec.energy_squared);
    }
  }
}

void write_metadata(std::ostream& out, const SweepConfig& cfg) {
  nlohmann::ordered_json meta;
  meta["version"] = kVersion;
  meta["rng"] = kRngIdentifier;
  meta["experiment"] = to_string(cfg.experiment);
  meta["spin_convention"] = to_string(cfg.hamiltonian.convention);
  meta["boundary"] = to_string(cfg.hamiltonian.boundary);
  meta["bit_order"] = kBitOrderTag;
  meta["activation_convention"] = kActivationConvention;
  meta["weight_variance"] = to_string(cfg.variance_split);
  meta["alpha"] = cfg.alpha;
  meta["master_seed"] = cfg.master_seed;
  nlohmann::ordered_json effective;
  for (const auto& [key, value] : to_key_values(cfg)) effective[key] = value;
  meta["config"] = effective;
  out << meta.dump(2) << '\n';
}

void run_experiment(const SweepConfig& cfg, std::ostream& fallback) {
  cfg.validate();
  std::ofstream file;
  if (!cfg.output_path.empty()) {
    file.open(cfg.output_path);
    if (!file) throw std::runtime_error("cannot open output '" + cfg.output_path + "'");
  }
  std::ostream& out = cfg.output_path.empty() ? fallback : file;

  std::vector<EnsembleResult> ensemble;
  switch (cfg.experiment) {
    case Experiment::MeanFieldSweep: {
      const auto points = run_meanfield_sweep(cfg);
      write_meanfield_csv(out, points);
      break;
    }
    case Experiment::EntanglementSweep:
      ensemble = run_entanglement_sweep(cfg);
      write_entanglement_csv(out, cfg, ensemble);
      break;
    case Experiment::ScalingSweep:
      ensemble = run_scaling_sweep(cfg);
      write_scaling_csv(out, cfg, ensemble);
      break;
    case Experiment::EnergySweep:
      ensemble = run_energy_sweep(cfg);
      write_energy_csv(out, cfg, ensemble);
      break;
    case Experiment::CorrelationCheck:
      write_correlation_csv(out, empirical_correlation_check(cfg));
      break;
  }

  if (!cfg.output_path.empty()) {
    std::ofstream meta(cfg.output_path + ".meta.json");
    write_metadata(meta, cfg);
  }
  if (!cfg.dump_path.empty() && !ensemble.empty()) {
    std::ofstream dump(cfg.dump_path);
    if (!dump) throw std::runtime_error("cannot open dump '" + cfg.dump_path + "'");
    write_realizations_csv(dump, ensemble);
  }
}

}  // namespace deepnqs
