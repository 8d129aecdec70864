// SPDX-License-Identifier: Apache-2.0
//
// risopt simulate   --scenario <id> [--config file] [--preset desk|paper] [--seed N] [--out csv]
// risopt complexity --n-ris 4,16,36 [--config file] [--preset desk|paper] [--out csv]

#include "risopt/config.hpp"
#include "risopt/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

struct CommonOptions {
  std::string config;
  std::string preset;
  std::string out;
  std::string snr_db;
  std::vector<std::string> sets;
  std::int64_t seed = -1;
  int trials = 0;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", o.preset, "parameter preset applied before the config file")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--seed", o.seed, "Monte Carlo seed")->check(CLI::NonNegativeNumber);
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--set", o.sets, "override a config key, KEY=VALUE (repeatable)");
  cmd->add_option("--out", o.out, "output CSV path (default: stdout)");
}

risopt::Settings load(const CommonOptions& o, const std::vector<std::pair<std::string, std::string>>& extra) {
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw risopt::ConfigError("--set expects KEY=VALUE, got '" + s + "'");
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.seed >= 0) overrides.emplace_back("seed", std::to_string(o.seed));
  if (o.trials > 0) overrides.emplace_back("trials", std::to_string(o.trials));
  if (o.threads > 0) overrides.emplace_back("threads", std::to_string(o.threads));
  if (!o.snr_db.empty()) overrides.emplace_back("snr_db", o.snr_db);
  overrides.insert(overrides.end(), extra.begin(), extra.end());

  std::optional<std::filesystem::path> path;
  if (!o.config.empty()) path = o.config;
  std::optional<std::string> preset;
  if (!o.preset.empty()) preset = o.preset;
  return risopt::parse_config(path, overrides, preset);
}

template <typename Writer>
void emit(const std::string& out_path, Writer&& write) {
  if (out_path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw risopt::ConfigError("cannot write '" + out_path + "'");
  write(out);
}

void run_complexity_table(const risopt::Settings& settings, std::span<const risopt::UraSpec> sizes,
                          const std::string& out_path) {
  const auto rows = risopt::run_complexity(settings, sizes);
  emit(out_path, [&](std::ostream& os) { risopt::write_complexity_csv(os, rows); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted MIMO-OFDM spectral efficiency simulator"};
  app.require_subcommand(1);

  CommonOptions sim_opts;
  std::string scenario;
  auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo scenario and write CSV");
  simulate->add_option("--scenario", scenario, "se_vs_snr | plos_vs_se | distance_vs_se | complexity_table")
      ->required();
  simulate->add_option("--snr-db", sim_opts.snr_db, "comma-separated SNR grid in dB");
  add_common(simulate, sim_opts);

  CommonOptions cx_opts;
  std::string n_ris;
  auto* complexity = app.add_subcommand("complexity", "instrumented PGA runs per RIS size");
  complexity->add_option("--n-ris", n_ris, "comma-separated RIS element counts");
  add_common(complexity, cx_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const auto id = risopt::parse_scenario(scenario);
      const auto settings = load(sim_opts, {});
      if (id == risopt::Scenario::ComplexityTable) {
        run_complexity_table(settings, settings.system.complexity_ris, sim_opts.out);
        return 0;
      }
      const auto rows = risopt::run_scenario(settings, id);
      emit(sim_opts.out, [&](std::ostream& os) { risopt::write_results_csv(os, rows); });
    } else if (*complexity) {
      const auto settings = load(cx_opts, {});
      std::vector<risopt::UraSpec> sizes = settings.system.complexity_ris;
      if (!n_ris.empty()) {
        sizes.clear();
        for (double n : risopt::parse_number_list(n_ris)) {
          if (n != std::floor(n)) throw risopt::ConfigError("--n-ris expects integer counts");
          sizes.push_back(risopt::array_for_count(static_cast<int>(n),
                                                  settings.system.channel.ris.spacing_wavelengths));
        }
      }
      run_complexity_table(settings, sizes, cx_opts.out);
    }
  } catch (const risopt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
