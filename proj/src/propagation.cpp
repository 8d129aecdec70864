// SPDX-License-Identifier: Apache-2.0
#include "risopt/propagation.hpp"

#include <algorithm>
#include <cmath>

namespace risopt {

void GeometryConfig::validate() const {
  for (double d : {bs_ue_distance, bs_height, ue_height, ris_offset, wavelength,
                   reference_distance}) {
    if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("distances must be positive and finite");
  }
  if (!(antenna_gain > 0.0)) throw ConfigError("antenna gain must be positive");
  if (!(exponent_los >= 0.0) || !(exponent_nlos >= 0.0)) {
    throw ConfigError("pathloss exponents must be nonnegative");
  }
  if (p_los_override && !(*p_los_override >= 0.0 && *p_los_override <= 1.0)) {
    throw ConfigError("p_los override must lie in [0, 1]");
  }
}

LinkDistances link_distances(const GeometryConfig& g) {
  const double dx2 = g.bs_ue_distance - g.ris_offset;
  const double dh = g.bs_height - g.ue_height;
  return {std::hypot(g.ris_offset, g.bs_height), std::hypot(dx2, g.ue_height),
          std::hypot(g.bs_ue_distance, dh)};
}

double p_los(const GeometryConfig& g) {
  if (g.p_los_override) return *g.p_los_override;
  const double d = link_distances(g).direct;
  return std::clamp(std::exp(-(d - 10.0) / 50.0), 0.0, 1.0);
}

double reference_gain(const GeometryConfig& g) {
  const double r = g.wavelength / (4.0 * kPi * g.reference_distance);
  return r * r * g.antenna_gain;
}

double indirect_gain(const GeometryConfig& g) {
  const auto d = link_distances(g);
  const double tilt = g.bs_height / d.bs_ris + g.ue_height / d.ris_ue;
  const double lambda2 = g.wavelength * g.wavelength;
  return g.antenna_gain * lambda2 * lambda2 * tilt * tilt /
         (256.0 * kPi * kPi * d.bs_ris * d.bs_ris * d.ris_ue * d.ris_ue);
}

double direct_gain(const GeometryConfig& g, bool los) {
  const double d = link_distances(g).direct;
  const double alpha = los ? g.exponent_los : g.exponent_nlos;
  return reference_gain(g) * std::pow(g.reference_distance / d, alpha);
}

bool sample_blockage(double p, Rng& rng) {
  // one draw regardless of p keeps the stream layout independent of p
  return rng.uniform() < p;
}

LinkGains link_gains(const GeometryConfig& g, bool los) {
  return {direct_gain(g, los), indirect_gain(g), los};
}

}  // namespace risopt
