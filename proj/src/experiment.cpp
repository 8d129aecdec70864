// SPDX-License-Identifier: Apache-2.0
#include "risopt/experiment.hpp"

#include "risopt/pga.hpp"
#include "risopt/power.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <array>
#include <atomic>
#include <cmath>
#include <ostream>
#include <mutex>
#include <thread>

namespace risopt {

namespace {

enum StreamTag : std::uint64_t { kBlockage = 0, kLink1 = 1, kLink2 = 2, kLink3 = 3, kPhases = 4 };

/// Runs fn(i) for i in [0, n); results must be written to slot i only.
template <typename Fn>
void for_each_index(int n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < std::min(threads, n); ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

ScenarioResult summarize(Scenario scenario, std::string sweep_name, double sweep_value,
                         std::string series_name, double series_value, Arm arm,
                         std::vector<double> samples, int los_trials, std::uint64_t seed,
                         double d2) {
  ScenarioResult r;
  r.scenario = scenario;
  r.sweep_name = std::move(sweep_name);
  r.sweep_value = sweep_value;
  r.series_name = std::move(series_name);
  r.series_value = series_value;
  r.arm = arm;
  r.mean_se = mean(samples);
  r.stderr_se = standard_error(samples);
  r.trials = static_cast<int>(samples.size());
  r.seed = seed;
  r.d2 = d2;
  r.samples = std::move(samples);
  r.los_trials = los_trials;
  return r;
}

/// All arms of one sweep point. Rows are appended in kAllArms order.
void run_point(const SystemConfig& config, const GeometryConfig& geometry, double snr_db,
               Scenario scenario, int sweep_index, const std::string& sweep_name,
               double sweep_value, const std::string& series_name, double series_value,
               std::vector<ScenarioResult>& rows) {
  const int n = config.trials;
  constexpr std::size_t kArms = std::size(kAllArms);
  std::vector<std::array<double, kArms>> se(static_cast<std::size_t>(n));
  std::vector<char> los(static_cast<std::size_t>(n), 0);
  const double total_power = total_power_for(config, geometry, snr_db);

  for_each_index(n, config.threads, [&](int t) {
    const auto draw = draw_trial(config, geometry, trial_stream(config.seed, scenario, sweep_index, t));
    los[t] = draw.los ? 1 : 0;
    for (std::size_t a = 0; a < kArms; ++a) {
      se[t][a] = evaluate_arm(draw, kAllArms[a], config, total_power).se;
    }
  });

  int los_trials = 0;
  for (char c : los) los_trials += c;
  const double d2 = link_distances(geometry).ris_ue;
  for (std::size_t a = 0; a < kArms; ++a) {
    std::vector<double> samples(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) samples[t] = se[t][a];
    rows.push_back(summarize(scenario, sweep_name, sweep_value, series_name, series_value,
                             kAllArms[a], std::move(samples), los_trials, config.seed, d2));
  }
}

}  // namespace

std::string_view arm_name(Arm arm) {
  switch (arm) {
    case Arm::Pga:
      return "pga";
    case Arm::RandomPhases:
      return "random_phases";
    case Arm::NoRis:
      return "no_ris";
  }
  return "unknown";
}

std::string_view scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::SeVsSnr:
      return "se_vs_snr";
    case Scenario::PlosVsSe:
      return "plos_vs_se";
    case Scenario::DistanceVsSe:
      return "distance_vs_se";
    case Scenario::ComplexityTable:
      return "complexity_table";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view id) {
  for (auto s : {Scenario::SeVsSnr, Scenario::PlosVsSe, Scenario::DistanceVsSe,
                 Scenario::ComplexityTable}) {
    if (scenario_name(s) == id) return s;
  }
  throw ConfigError(fmt::format(
      "unknown scenario '{}' (se_vs_snr|plos_vs_se|distance_vs_se|complexity_table)", id));
}

Rng trial_stream(std::uint64_t seed, Scenario scenario, int sweep_index, int trial) {
  return Rng(seed)
      .child(static_cast<std::uint64_t>(scenario))
      .child(static_cast<std::uint64_t>(sweep_index))
      .child(static_cast<std::uint64_t>(trial));
}

GeometryConfig scenario_geometry(const GeometryConfig& base, Scenario scenario) {
  GeometryConfig g = base;
  switch (scenario) {
    case Scenario::SeVsSnr:
    case Scenario::ComplexityTable:
      g.bs_height = 10.0;
      g.ris_offset = 2.2;
      break;
    case Scenario::PlosVsSe:
      g.bs_ue_distance = 200.0;
      g.bs_height = 5.0;
      g.ris_offset = 2.2;
      break;
    case Scenario::DistanceVsSe:
      g.bs_height = 20.0;
      g.ris_offset = 30.0;
      break;
  }
  return g;
}

TrialDraw draw_trial(const SystemConfig& config, const GeometryConfig& geometry, const Rng& stream) {
  TrialDraw d;
  Rng blockage = stream.child(kBlockage);
  d.los = sample_blockage(p_los(geometry), blockage);
  d.gains = link_gains(geometry, d.los);

  const int k = config.subcarriers;
  const auto& ch = config.channel;
  d.channels.h1 = taps_to_subcarriers(synthesize_link(Link::BsToRis, ch, d.los, stream.child(kLink1)), k);
  d.channels.h2 = taps_to_subcarriers(synthesize_link(Link::RisToUe, ch, d.los, stream.child(kLink2)), k);
  d.channels.h3 = taps_to_subcarriers(synthesize_link(Link::BsToUe, ch, d.los, stream.child(kLink3)), k);

  Rng phases = stream.child(kPhases);
  d.initial_phases = RisPhases::random(ch.ris.size(), phases);
  return d;
}

double total_power_for(const SystemConfig& config, const GeometryConfig& geometry, double snr_db) {
  double p = config.subcarriers * db_to_linear(snr_db) * config.noise_power;
  switch (config.snr_reference) {
    case SnrReference::DirectNlos:
      p /= direct_gain(geometry, false);
      break;
    case SnrReference::DirectLos:
      p /= direct_gain(geometry, true);
      break;
    case SnrReference::Unit:
      break;
  }
  return p;
}

TrialOutcome evaluate_arm(const TrialDraw& draw, Arm arm, const SystemConfig& config,
                          double total_power, FlopMeter* meter) {
  TrialOutcome out;
  out.los = draw.los;
  const int streams = config.stream_count();
  switch (arm) {
    case Arm::Pga: {
      const auto folded = fold_gains(draw.channels, draw.gains);
      const auto res = pga_optimize(folded, draw.initial_phases, config.pga(total_power), meter);
      out.se = res.rate;
      out.iterations = res.iterations;
      break;
    }
    case Arm::RandomPhases: {
      const auto eq = equivalent_channel(draw.channels, draw.initial_phases, draw.gains);
      const auto power = allocate_power(eq, config.noise_power, total_power, streams);
      out.se = spectral_efficiency(eq, power.q, config.noise_power);
      break;
    }
    case Arm::NoRis: {
      LinkGains direct_only = draw.gains;
      direct_only.indirect = 0.0;
      const auto eq = equivalent_channel(draw.channels, draw.initial_phases, direct_only);
      const auto power = allocate_power(eq, config.noise_power, total_power, streams);
      out.se = spectral_efficiency(eq, power.q, config.noise_power);
      break;
    }
  }
  return out;
}

TrialOutcome run_trial(const SystemConfig& config, const GeometryConfig& geometry, double snr_db,
                       Arm arm, const Rng& stream, FlopMeter* meter) {
  const auto draw = draw_trial(config, geometry, stream);
  return evaluate_arm(draw, arm, config, total_power_for(config, geometry, snr_db), meter);
}

std::vector<ScenarioResult> run_scenario(const Settings& settings, Scenario scenario) {
  settings.validate();
  std::vector<ScenarioResult> rows;
  const auto& base = settings.system;
  const GeometryConfig geometry = scenario_geometry(settings.geometry, scenario);

  switch (scenario) {
    case Scenario::SeVsSnr:
      for (const auto& ris : base.ris_sweep) {
        SystemConfig cfg = base;
        cfg.channel.ris = ris;
        for (std::size_t i = 0; i < base.snr_db.size(); ++i) {
          run_point(cfg, geometry, base.snr_db[i], scenario, static_cast<int>(i), "snr_db",
                    base.snr_db[i], "n_ris", ris.size(), rows);
        }
      }
      break;
    case Scenario::PlosVsSe:
      for (double snr : base.plos_snr_db) {
        for (std::size_t i = 0; i < base.plos_grid.size(); ++i) {
          GeometryConfig g = geometry;
          g.p_los_override = base.plos_grid[i];
          run_point(base, g, snr, scenario, static_cast<int>(i), "p_los", base.plos_grid[i],
                    "snr_db", snr, rows);
        }
      }
      break;
    case Scenario::DistanceVsSe:
      for (std::size_t i = 0; i < base.distance_grid.size(); ++i) {
        GeometryConfig g = geometry;
        g.bs_ue_distance = base.distance_grid[i];
        run_point(base, g, base.distance_snr_db, scenario, static_cast<int>(i), "distance_m",
                  base.distance_grid[i], "snr_db", base.distance_snr_db, rows);
      }
      break;
    case Scenario::ComplexityTable:
      throw ConfigError("complexity_table produces a complexity table; use run_complexity");
  }
  return rows;
}

void write_results_csv(std::ostream& out, std::span<const ScenarioResult> rows) {
  out << "scenario,sweep_name,sweep_value,arm,mean_se,stderr_se,trials,seed,series_name,"
         "series_value,d2_m\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{:.6g},{},{:.10f},{:.10f},{},{},{},{:.6g},{:.4f}\n",
               scenario_name(r.scenario), r.sweep_name, r.sweep_value, arm_name(r.arm), r.mean_se,
               r.stderr_se, r.trials, r.seed, r.series_name, r.series_value, r.d2);
  }
}

std::vector<ComplexityRecord> run_complexity(const Settings& settings,
                                             std::span<const UraSpec> ris_sizes,
                                             std::vector<FlopMeter>* meters) {
  settings.validate();
  const GeometryConfig geometry = scenario_geometry(settings.geometry, Scenario::ComplexityTable);
  std::vector<ComplexityRecord> out;
  if (meters != nullptr) meters->clear();
  for (const auto& ris : ris_sizes) {
    ris.validate();
    SystemConfig cfg = settings.system;
    cfg.channel.ris = ris;
    const int n = cfg.complexity_trials;
    const double total_power = total_power_for(cfg, geometry, cfg.complexity_snr_db);
    std::vector<FlopMeter> per_trial(static_cast<std::size_t>(n));
    for_each_index(n, cfg.threads, [&](int t) {
      const auto draw =
          draw_trial(cfg, geometry, trial_stream(cfg.seed, Scenario::ComplexityTable, 0, t));
      evaluate_arm(draw, Arm::Pga, cfg, total_power, &per_trial[t]);
    });
    FlopMeter total;
    for (const auto& m : per_trial) total.merge(m);
    out.push_back(report(total, ris.size(), n));
    if (meters != nullptr) meters->push_back(total);
  }
  return out;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

}  // namespace risopt
