// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risopt/rng.hpp"
#include "risopt/types.hpp"

#include <array>
#include <span>

namespace risopt {

/// Uniform rectangular array; the element grid is rows x cols.
struct UraSpec {
  int rows = 1;
  int cols = 1;
  double spacing_wavelengths = 0.5;

  int size() const { return rows * cols; }
  /// Throws ConfigError on non-positive dimensions or spacing.
  void validate() const;
};

struct Ray {
  cd gain;
  double azimuth_arrival = 0.0;
  double elevation_arrival = 0.0;
  double azimuth_departure = 0.0;
  double elevation_departure = 0.0;
};

/// Clustered multipath description; rays are stored cluster-major.
struct ClusterRaySet {
  int clusters = 0;
  int rays_per_cluster = 0;
  double spread = 0.0;
  std::vector<Ray> rays;
};

enum class Link : int { BsToRis = 1, RisToUe = 2, BsToUe = 3 };

/// Time-domain channel of one link: one matrix per delay tap.
struct TapChannel {
  Link link = Link::BsToUe;
  double rician_factor = 0.0;
  MatrixStack taps;
};

/// Per-subcarrier channels: h1 (N_RIS x N_t), h2 (N_r x N_RIS), h3 (N_r x N_t).
struct FreqChannelSet {
  MatrixStack h1;
  MatrixStack h2;
  MatrixStack h3;

  int subcarriers() const { return static_cast<int>(h3.size()); }
  int tx_antennas() const { return static_cast<int>(h3.front().cols()); }
  int rx_antennas() const { return static_cast<int>(h3.front().rows()); }
  int ris_elements() const { return static_cast<int>(h1.front().rows()); }
  /// Throws ShapeError when the stacks disagree in length or shape.
  void validate() const;
};

struct ClusterCounts {
  int clusters = 1;
  int rays = 1;
};

/// Everything needed to synthesize the three links of one trial.
struct ChannelConfig {
  UraSpec bs{8, 8, 0.5};
  UraSpec ue{2, 2, 0.5};
  UraSpec ris{8, 8, 0.5};
  std::array<int, 3> taps{3, 4, 5};
  double rician_factor = 10.0;
  ClusterCounts ris_links{8, 10};
  ClusterCounts direct_los{1, 1};
  ClusterCounts direct_nlos{5, 10};
  double angular_spread = 10.0 * kPi / 180.0;

  void validate() const;
};

/// Steering vector of a URA, normalized to unit Euclidean norm.
///
/// Element (m, n) at flat index m * cols + n has phase
/// 2 pi d (m sin(az) cos(el) + n sin(el)), d the spacing in wavelengths.
CVector ura_response(double azimuth, double elevation, const UraSpec& spec);

/// Cluster centres are uniform over the sphere box; rays scatter around them
/// with Laplacian offsets of standard deviation `spread`.
ClusterRaySet draw_cluster_rays(int clusters, int rays, double spread, Rng& rng);

/// Clustered geometric channel
///   sqrt(N_rx N_tx / (R C)) sum_{c,r} beta_rc a_rx a_tx^H.
CMatrix geometric_tap(const ClusterRaySet& rays, const UraSpec& rx, const UraSpec& tx);

/// Matrix of i.i.d. CN(0, 1) entries.
CMatrix scatter_matrix(int rows, int cols, Rng& rng);

/// sqrt(K/(K+1)) los + sqrt(1/(K+1)) scatter. An infinite factor returns `los`.
CMatrix rician_tap(const CMatrix& los_part, const CMatrix& scatter_part, double rician_factor);

/// Tap power weights proportional to exp(-l), normalized to unit sum.
std::vector<double> tap_power_profile(int taps);

/// K-point DFT over the tap axis: H[k] = sum_l H[l] exp(-j 2 pi k l / K).
MatrixStack taps_to_subcarriers(std::span<const CMatrix> taps, int subcarriers);
inline MatrixStack taps_to_subcarriers(const TapChannel& channel, int subcarriers) {
  return taps_to_subcarriers(channel.taps, subcarriers);
}

/// Inverse of taps_to_subcarriers, keeping the first `taps` delay bins.
MatrixStack subcarriers_to_taps(std::span<const CMatrix> freq, int taps);

/// Draw all taps of one link. Tap l consumes the substream rng.child(l).
/// `direct_los` selects the direct link's cluster counts and is ignored for
/// the RIS links.
TapChannel synthesize_link(Link link, const ChannelConfig& config, bool direct_los,
                           const Rng& rng);

}  // namespace risopt
