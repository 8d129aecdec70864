// SPDX-License-Identifier: Apache-2.0
#include "risopt/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

namespace risopt {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("malformed number '{}'", text));
  }
  return v;
}

long long parse_integer(std::string_view text) {
  text = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(fmt::format("malformed integer '{}'", text));
  }
  return v;
}

int parse_int(std::string_view text) {
  const long long v = parse_integer(text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(fmt::format("integer out of range '{}'", text));
  }
  return static_cast<int>(v);
}

ClusterCounts parse_counts(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError(fmt::format("expected 'clusters,rays', got '{}'", text));
  return {parse_int(parts[0]), parse_int(parts[1])};
}

std::vector<UraSpec> parse_array_list(std::string_view text, double spacing) {
  std::vector<UraSpec> out;
  for (auto part : split(text, ',')) out.push_back(parse_array(part, spacing));
  return out;
}

void set_spacing(Settings& s, double spacing) {
  auto& c = s.system.channel;
  c.bs.spacing_wavelengths = c.ue.spacing_wavelengths = c.ris.spacing_wavelengths = spacing;
  for (auto& a : s.system.ris_sweep) a.spacing_wavelengths = spacing;
  for (auto& a : s.system.complexity_ris) a.spacing_wavelengths = spacing;
}

using Handler = std::function<void(Settings&, std::string_view)>;

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> table = [] {
    std::map<std::string, Handler, std::less<>> t;
    auto spacing = [](const Settings& s) { return s.system.channel.bs.spacing_wavelengths; };
    // arrays
    t["bs_array"] = [=](Settings& s, auto v) { s.system.channel.bs = parse_array(v, spacing(s)); };
    t["ue_array"] = [=](Settings& s, auto v) { s.system.channel.ue = parse_array(v, spacing(s)); };
    t["ris_array"] = [=](Settings& s, auto v) { s.system.channel.ris = parse_array(v, spacing(s)); };
    t["ris_sweep"] = [=](Settings& s, auto v) { s.system.ris_sweep = parse_array_list(v, spacing(s)); };
    t["complexity_ris"] = [=](Settings& s, auto v) {
      s.system.complexity_ris = parse_array_list(v, spacing(s));
    };
    t["element_spacing"] = [](Settings& s, auto v) { set_spacing(s, parse_double(v)); };
    // channel model
    t["subcarriers"] = [](Settings& s, auto v) { s.system.subcarriers = parse_int(v); };
    t["streams"] = [](Settings& s, auto v) { s.system.streams = parse_int(v); };
    t["taps"] = [](Settings& s, auto v) {
      const auto parts = split(v, ',');
      if (parts.size() != 3) throw ConfigError(fmt::format("taps needs three counts, got '{}'", v));
      for (int i = 0; i < 3; ++i) s.system.channel.taps[i] = parse_int(parts[i]);
    };
    t["rician_factor"] = [](Settings& s, auto v) { s.system.channel.rician_factor = parse_double(v); };
    t["ris_link_clusters_rays"] = [](Settings& s, auto v) { s.system.channel.ris_links = parse_counts(v); };
    t["direct_los_clusters_rays"] = [](Settings& s, auto v) { s.system.channel.direct_los = parse_counts(v); };
    t["direct_nlos_clusters_rays"] = [](Settings& s, auto v) { s.system.channel.direct_nlos = parse_counts(v); };
    t["angular_spread_deg"] = [](Settings& s, auto v) {
      s.system.channel.angular_spread = parse_double(v) * kPi / 180.0;
    };
    // SNR and power
    t["noise_power"] = [](Settings& s, auto v) { s.system.noise_power = parse_double(v); };
    t["snr_db"] = [](Settings& s, auto v) { s.system.snr_db = parse_number_list(v); };
    t["snr_reference"] = [](Settings& s, auto v) {
      if (v == "direct_nlos") {
        s.system.snr_reference = SnrReference::DirectNlos;
      } else if (v == "direct_los") {
        s.system.snr_reference = SnrReference::DirectLos;
      } else if (v == "unit") {
        s.system.snr_reference = SnrReference::Unit;
      } else {
        throw ConfigError(fmt::format("snr_reference must be direct_nlos, direct_los or unit, got '{}'", v));
      }
    };
    // scenarios
    t["plos_grid"] = [](Settings& s, auto v) { s.system.plos_grid = parse_number_list(v); };
    t["plos_snr_db"] = [](Settings& s, auto v) { s.system.plos_snr_db = parse_number_list(v); };
    t["distance_grid_m"] = [](Settings& s, auto v) { s.system.distance_grid = parse_number_list(v); };
    t["distance_snr_db"] = [](Settings& s, auto v) { s.system.distance_snr_db = parse_double(v); };
    t["complexity_snr_db"] = [](Settings& s, auto v) { s.system.complexity_snr_db = parse_double(v); };
    t["complexity_trials"] = [](Settings& s, auto v) { s.system.complexity_trials = parse_int(v); };
    // Monte Carlo and optimizer
    t["trials"] = [](Settings& s, auto v) { s.system.trials = parse_int(v); };
    t["seed"] = [](Settings& s, auto v) {
      const auto x = parse_integer(v);
      if (x < 0) throw ConfigError("seed must be nonnegative");
      s.system.seed = static_cast<std::uint64_t>(x);
    };
    t["learning_rate"] = [](Settings& s, auto v) { s.system.learning_rate = parse_double(v); };
    t["epsilon"] = [](Settings& s, auto v) { s.system.epsilon = parse_double(v); };
    t["max_iterations"] = [](Settings& s, auto v) { s.system.max_iterations = parse_int(v); };
    t["threads"] = [](Settings& s, auto v) { s.system.threads = parse_int(v); };
    // geometry
    t["distance_m"] = [](Settings& s, auto v) { s.geometry.bs_ue_distance = parse_double(v); };
    t["bs_height_m"] = [](Settings& s, auto v) { s.geometry.bs_height = parse_double(v); };
    t["ue_height_m"] = [](Settings& s, auto v) { s.geometry.ue_height = parse_double(v); };
    t["ris_offset_m"] = [](Settings& s, auto v) { s.geometry.ris_offset = parse_double(v); };
    t["carrier_ghz"] = [](Settings& s, auto v) {
      const double f = parse_double(v);
      if (!(f > 0.0)) throw ConfigError("carrier frequency must be positive");
      s.geometry.wavelength = kSpeedOfLight / (f * 1e9);
    };
    t["antenna_gain_db"] = [](Settings& s, auto v) { s.geometry.antenna_gain = db_to_linear(parse_double(v)); };
    t["reference_distance_m"] = [](Settings& s, auto v) { s.geometry.reference_distance = parse_double(v); };
    t["pathloss_exp_los"] = [](Settings& s, auto v) { s.geometry.exponent_los = parse_double(v); };
    t["pathloss_exp_nlos"] = [](Settings& s, auto v) { s.geometry.exponent_nlos = parse_double(v); };
    t["p_los_override"] = [](Settings& s, auto v) {
      if (trim(v) == "none" || trim(v).empty()) {
        s.geometry.p_los_override.reset();
      } else {
        s.geometry.p_los_override = parse_double(v);
      }
    };
    return t;
  }();
  return table;
}

}  // namespace

void SystemConfig::validate() const {
  channel.validate();
  if (subcarriers < 1) throw ConfigError("subcarriers must be >= 1");
  for (int l : channel.taps) {
    if (l > subcarriers) {
      throw ConfigError(fmt::format("{} taps do not fit in {} subcarriers", l, subcarriers));
    }
  }
  if (streams < 0) throw ConfigError("streams must be >= 0");
  if (!(noise_power > 0.0)) throw ConfigError("noise_power must be positive");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (complexity_trials < 1) throw ConfigError("complexity_trials must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (snr_db.empty()) throw ConfigError("snr_db must not be empty");
  for (const auto& a : ris_sweep) a.validate();
  for (const auto& a : complexity_ris) a.validate();
  for (double p : plos_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("plos_grid values must lie in [0, 1]");
  }
  for (double d : distance_grid) {
    if (!(d > 0.0)) throw ConfigError("distance_grid_m values must be positive");
  }
  pga(1.0).validate();
}

int SystemConfig::stream_count() const {
  return streams > 0 ? streams : std::min(channel.bs.size(), channel.ue.size());
}

PgaConfig SystemConfig::pga(double total_power) const {
  PgaConfig c;
  c.learning_rate = learning_rate;
  c.epsilon = epsilon;
  c.max_iterations = max_iterations;
  c.noise_power = noise_power;
  c.total_power = total_power;
  c.streams = stream_count();
  return c;
}

Settings default_settings() { return Settings{}; }

void apply_preset(Settings& settings, std::string_view name) {
  if (name == "paper") {
    settings = default_settings();
    return;
  }
  if (name != "desk") throw ConfigError(fmt::format("unknown preset '{}' (desk|paper)", name));
  settings = default_settings();
  auto& s = settings.system;
  s.channel.bs = {4, 4, 0.5};
  s.channel.ue = {2, 2, 0.5};
  s.channel.ris = {4, 4, 0.5};
  s.ris_sweep = {{4, 4, 0.5}, {8, 8, 0.5}};
  s.complexity_ris = {{2, 2, 0.5}, {4, 4, 0.5}, {6, 6, 0.5}, {8, 8, 0.5}};
  s.subcarriers = 8;
  s.trials = 50;
  s.snr_db = {-10.0, -5.0, 0.0, 5.0, 10.0};
}

void apply_setting(Settings& settings, std::string_view key, std::string_view value) {
  const auto& table = handlers();
  const auto it = table.find(trim(key));
  if (it == table.end()) throw ConfigError(fmt::format("unknown config key '{}'", trim(key)));
  try {
    it->second(settings, trim(value));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", trim(key), e.what()));
  }
}

void load_config_file(Settings& settings, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value'", path.string(), lineno));
    }
    try {
      apply_setting(settings, view.substr(0, eq), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
    }
  }
}

UraSpec parse_array(std::string_view text, double spacing) {
  text = trim(text);
  const auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) {
    throw ConfigError(fmt::format("array must be written rowsxcols, got '{}'", text));
  }
  UraSpec spec{parse_int(text.substr(0, x)), parse_int(text.substr(x + 1)), spacing};
  spec.validate();
  return spec;
}

UraSpec array_for_count(int elements, double spacing) {
  if (elements < 1) throw ConfigError(fmt::format("element count must be >= 1, got {}", elements));
  int rows = static_cast<int>(std::sqrt(static_cast<double>(elements)));
  while (rows > 1 && elements % rows != 0) --rows;
  return {rows, elements / rows, spacing};
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

Settings parse_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::pair<std::string, std::string>>& overrides,
                      std::optional<std::string> preset) {
  Settings s = default_settings();
  if (preset) apply_preset(s, *preset);
  if (path) load_config_file(s, *path);
  for (const auto& [k, v] : overrides) apply_setting(s, k, v);
  s.validate();
  return s;
}

}  // namespace risopt
