// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risopt/channel.hpp"
#include "risopt/pga.hpp"
#include "risopt/propagation.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace risopt {

/// How the SNR axis maps to transmit power (noise power fixed).
enum class SnrReference {
  DirectNlos,  ///< per-subcarrier received SNR of the blocked (NLOS) direct path
  DirectLos,   ///< per-subcarrier received SNR of the LOS direct path
  Unit,       ///< SNR is per-subcarrier transmit power over noise power
};

struct SystemConfig {
  ChannelConfig channel;
  int subcarriers = 24;
  int streams = 0;  ///< 0 selects min(N_t, N_r)
  double noise_power = 1.0;
  SnrReference snr_reference = SnrReference::DirectNlos;

  std::vector<double> snr_db{-5.0, 10.0};
  std::vector<UraSpec> ris_sweep{{8, 8, 0.5}, {16, 16, 0.5}};
  std::vector<double> plos_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> plos_snr_db{-5.0, 10.0};
  std::vector<double> distance_grid{100.0, 125.0, 150.0, 175.0, 200.0, 225.0, 250.0};
  double distance_snr_db = 5.0;
  std::vector<UraSpec> complexity_ris{{2, 2, 0.5},   {4, 4, 0.5},   {6, 6, 0.5},  {12, 12, 0.5},
                                      {14, 14, 0.5}, {18, 18, 0.5}, {20, 20, 0.5}};
  double complexity_snr_db = -5.0;
  int complexity_trials = 10;

  int trials = 500;
  std::uint64_t seed = 1;
  double learning_rate = 0.1;
  double epsilon = 1e-3;
  int max_iterations = 200;
  int threads = 1;

  void validate() const;
  int stream_count() const;
  PgaConfig pga(double total_power) const;
};

struct Settings {
  SystemConfig system;
  GeometryConfig geometry;

  void validate() const {
    system.validate();
    geometry.validate();
  }
};

/// Full-size reference defaults.
Settings default_settings();

/// "desk" (small arrays, CI-sized) or "paper" (the full-size defaults). Throws ConfigError.
void apply_preset(Settings& settings, std::string_view name);

/// Set one `key = value` pair. Throws ConfigError on unknown keys or
/// malformed values.
void apply_setting(Settings& settings, std::string_view key, std::string_view value);

/// Merge a `key = value` file (UTF-8, `#` comments) into `settings`.
void load_config_file(Settings& settings, const std::filesystem::path& path);

/// Parse "rowsxcols" (e.g. "8x8").
UraSpec parse_array(std::string_view text, double spacing = 0.5);
/// Most-square rows x cols factorization of an element count.
UraSpec array_for_count(int elements, double spacing = 0.5);
std::vector<double> parse_number_list(std::string_view text);

/// Defaults, then preset, then file, then explicit overrides in order.
Settings parse_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::pair<std::string, std::string>>& overrides = {},
                      std::optional<std::string> preset = std::nullopt);

}  // namespace risopt
