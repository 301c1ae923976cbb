// Command-line driver for the ensemble sweeps and mean-field scans.

#include "deepnqs/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
  std::string config_path;
  std::string sigma_w;
  std::string L;
  std::string mu;
  std::optional<double> alpha;
  std::optional<int> realizations;
  std::optional<unsigned long long> seed;
  std::string out;
  std::optional<int> threads;
  std::string dump;
  bool standard_error = false;
};

void add_common_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "key = value configuration file");
  sub->add_option("--sigma-w", o.sigma_w, "sigma_w grid: comma list or start:stop:step");
  sub->add_option("--L", o.L, "chain lengths, comma list");
  sub->add_option("--mu", o.mu, "network depths (layer count for correlation-check), comma list");
  sub->add_option("--alpha", o.alpha, "hidden width factor");
  sub->add_option("--realizations", o.realizations, "realizations per grid point");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--out", o.out, "output CSV path (stdout if omitted)");
  sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  sub->add_option("--dump", o.dump, "per-realization CSV dump path");
  sub->add_flag("--standard-error", o.standard_error, "append standard-error columns");
}

deepnqs::SweepConfig build_config(deepnqs::Experiment experiment, const Overrides& o) {
  deepnqs::SweepConfig cfg;
  if (!o.config_path.empty()) deepnqs::apply_key_values(cfg, deepnqs::read_key_values_file(o.config_path));
  cfg.experiment = experiment;
  deepnqs::KeyValues kv;
  if (!o.sigma_w.empty()) kv["sigma_w"] = o.sigma_w;
  if (!o.L.empty()) kv["L"] = o.L;
  if (!o.mu.empty()) kv["mu"] = o.mu;
  deepnqs::apply_key_values(cfg, kv);
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.realizations) cfg.n_realizations = *o.realizations;
  if (o.seed) cfg.master_seed = *o.seed;
  if (!o.out.empty()) cfg.output_path = o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (!o.dump.empty()) cfg.dump_path = o.dump;
  if (o.standard_error) cfg.standard_error = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random deep neural quantum states: mean-field, entanglement and energy sweeps"};
  app.require_subcommand(1);

  const std::pair<const char*, deepnqs::Experiment> commands[] = {
      {"meanfield-sweep", deepnqs::Experiment::MeanFieldSweep},
      {"entanglement-sweep", deepnqs::Experiment::EntanglementSweep},
      {"scaling-sweep", deepnqs::Experiment::ScalingSweep},
      {"energy-sweep", deepnqs::Experiment::EnergySweep},
      {"correlation-check", deepnqs::Experiment::CorrelationCheck},
  };
  Overrides overrides;
  std::optional<deepnqs::Experiment> chosen;
  for (const auto& [name, experiment] : commands) {
    auto* sub = app.add_subcommand(name, std::string("run ") + name);
    add_common_options(sub, overrides);
    sub->callback([&chosen, experiment = experiment] { chosen = experiment; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = build_config(*chosen, overrides);
    deepnqs::run_experiment(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
