// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risopt/rng.hpp"
#include "risopt/types.hpp"

#include <optional>

namespace risopt {

/// Deployment geometry and radio constants. Distances in metres.
struct GeometryConfig {
  double bs_ue_distance = 200.0;  ///< D, ground distance BS to UE
  double bs_height = 10.0;        ///< l_t
  double ue_height = 1.8;         ///< l_r
  double ris_offset = 2.2;        ///< d_RIS, ground offset BS to RIS
  double wavelength = kSpeedOfLight / 28e9;
  double antenna_gain = 1584893.1924611141;  ///< combined G_t G_r (62 dB)
  double reference_distance = 1.0;
  double exponent_los = 2.0;
  double exponent_nlos = 4.0;
  std::optional<double> p_los_override;

  void validate() const;
};

struct LinkDistances {
  double bs_ris = 0.0;  ///< d1
  double ris_ue = 0.0;  ///< d2
  double direct = 0.0;  ///< BS to UE slant distance
};

/// Linear power gains applied to the direct and RIS paths.
struct LinkGains {
  double direct = 1.0;
  double indirect = 1.0;
  bool los = true;
};

LinkDistances link_distances(const GeometryConfig& g);

/// exp(-(d_dir - 10) / 50) clamped to [0, 1]; the override wins when set.
double p_los(const GeometryConfig& g);

/// Free-space reference gain (lambda / (4 pi d0))^2 G_t G_r.
double reference_gain(const GeometryConfig& g);

/// RIS-path power gain
///   G_t G_r lambda^4 (l_t/d1 + l_r/d2)^2 / (256 pi^2 d1^2 d2^2).
double indirect_gain(const GeometryConfig& g);

/// K0 (d0 / d_dir)^alpha with alpha picked by the LOS state.
double direct_gain(const GeometryConfig& g, bool los);

bool sample_blockage(double p, Rng& rng);

LinkGains link_gains(const GeometryConfig& g, bool los);

}  // namespace risopt
