// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risopt/config.hpp"
#include "risopt/flops.hpp"
#include "risopt/rate.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace risopt {

enum class Arm { Pga, RandomPhases, NoRis };
inline constexpr Arm kAllArms[] = {Arm::Pga, Arm::RandomPhases, Arm::NoRis};

enum class Scenario { SeVsSnr, PlosVsSe, DistanceVsSe, ComplexityTable };

std::string_view arm_name(Arm arm);
std::string_view scenario_name(Scenario scenario);
/// Throws ConfigError for an unknown id.
Scenario parse_scenario(std::string_view id);

/// Substream of trial `trial` at sweep point `sweep_index`. Arms and
/// series (N_RIS, SNR) are not part of the key, so every arm sees the same
/// draws and series are paired.
Rng trial_stream(std::uint64_t seed, Scenario scenario, int sweep_index, int trial);

/// Random state of one Monte Carlo trial, shared by all arms.
struct TrialDraw {
  bool los = false;
  LinkGains gains;
  FreqChannelSet channels;  ///< without pathloss
  RisPhases initial_phases; ///< PGA start and the random-phase arm's configuration
};

TrialDraw draw_trial(const SystemConfig& config, const GeometryConfig& geometry, const Rng& stream);

/// Sum power over all subcarriers for an SNR point.
double total_power_for(const SystemConfig& config, const GeometryConfig& geometry, double snr_db);

struct TrialOutcome {
  double se = 0.0;
  bool los = false;
  int iterations = 0;
};

TrialOutcome evaluate_arm(const TrialDraw& draw, Arm arm, const SystemConfig& config,
                          double total_power, FlopMeter* meter = nullptr);

TrialOutcome run_trial(const SystemConfig& config, const GeometryConfig& geometry, double snr_db,
                       Arm arm, const Rng& stream, FlopMeter* meter = nullptr);

struct ScenarioResult {
  Scenario scenario = Scenario::SeVsSnr;
  std::string sweep_name;
  double sweep_value = 0.0;
  std::string series_name;
  double series_value = 0.0;
  Arm arm = Arm::Pga;
  double mean_se = 0.0;
  double stderr_se = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  double d2 = 0.0;               ///< RIS to UE distance at this point
  std::vector<double> samples;   ///< per-trial SE in trial order
  int los_trials = 0;
};

/// Sweep the scenario's variable and return one row per (series, sweep
/// point, arm). ComplexityTable is not a SE scenario; use run_complexity.
std::vector<ScenarioResult> run_scenario(const Settings& settings, Scenario scenario);

/// Columns: scenario, sweep_name, sweep_value, arm, mean_se, stderr_se,
/// trials, seed, series_name, series_value, d2_m.
void write_results_csv(std::ostream& out, std::span<const ScenarioResult> rows);

/// Instrumented PGA runs per RIS size. `meters`, when given, receives the
/// accumulated meter of every size.
std::vector<ComplexityRecord> run_complexity(const Settings& settings,
                                             std::span<const UraSpec> ris_sizes,
                                             std::vector<FlopMeter>* meters = nullptr);

/// Geometry used by each scenario on top of the configured one.
GeometryConfig scenario_geometry(const GeometryConfig& base, Scenario scenario);

double mean(std::span<const double> xs);
/// Standard error of the mean (sample standard deviation / sqrt(n)).
double standard_error(std::span<const double> xs);

}  // namespace risopt
