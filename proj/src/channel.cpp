// SPDX-License-Identifier: Apache-2.0
#include "risopt/channel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace risopt {

namespace {

double wrap_azimuth(double az) {
  double w = std::fmod(az + kPi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  return w - kPi;
}

double clamp_elevation(double el) { return std::clamp(el, -kPi / 2.0, kPi / 2.0); }

struct LinkArrays {
  const UraSpec& rx;
  const UraSpec& tx;
};

LinkArrays arrays_for(Link link, const ChannelConfig& c) {
  switch (link) {
    case Link::BsToRis:
      return {c.ris, c.bs};
    case Link::RisToUe:
      return {c.ue, c.ris};
    case Link::BsToUe:
      break;
  }
  return {c.ue, c.bs};
}

}  // namespace

void UraSpec::validate() const {
  if (rows < 1 || cols < 1) {
    throw ConfigError(fmt::format("array dimensions must be positive, got {}x{}", rows, cols));
  }
  if (!(spacing_wavelengths > 0.0)) {
    throw ConfigError("element spacing must be positive");
  }
}

void FreqChannelSet::validate() const {
  const auto k = h3.size();
  if (k == 0 || h1.size() != k || h2.size() != k) {
    throw ShapeError(fmt::format("channel stacks disagree in length ({}, {}, {})", h1.size(),
                                 h2.size(), h3.size()));
  }
  const auto nr = h3.front().rows();
  const auto nt = h3.front().cols();
  const auto nris = h1.front().rows();
  for (std::size_t i = 0; i < k; ++i) {
    if (h1[i].rows() != nris || h1[i].cols() != nt || h2[i].rows() != nr ||
        h2[i].cols() != nris || h3[i].rows() != nr || h3[i].cols() != nt) {
      throw ShapeError(fmt::format("inconsistent channel shapes on subcarrier {}", i));
    }
  }
}

void ChannelConfig::validate() const {
  bs.validate();
  ue.validate();
  ris.validate();
  for (int l : taps) {
    if (l < 1) throw ConfigError("tap counts must be >= 1");
  }
  if (!(rician_factor >= 0.0)) throw ConfigError("rician factor must be nonnegative");
  for (const auto& cc : {ris_links, direct_los, direct_nlos}) {
    if (cc.clusters < 1 || cc.rays < 1) throw ConfigError("cluster and ray counts must be >= 1");
  }
  if (!(angular_spread >= 0.0)) throw ConfigError("angular spread must be nonnegative");
}

CVector ura_response(double azimuth, double elevation, const UraSpec& spec) {
  const int n = spec.size();
  CVector a(n);
  const double kd = 2.0 * kPi * spec.spacing_wavelengths;
  const double u = std::sin(azimuth) * std::cos(elevation);
  const double v = std::sin(elevation);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int m = 0; m < spec.rows; ++m) {
    for (int c = 0; c < spec.cols; ++c) {
      a(m * spec.cols + c) = scale * std::polar(1.0, kd * (m * u + c * v));
    }
  }
  return a;
}

ClusterRaySet draw_cluster_rays(int clusters, int rays, double spread, Rng& rng) {
  if (clusters < 1 || rays < 1 || spread < 0.0) {
    throw Error("draw_cluster_rays: need clusters >= 1, rays >= 1, spread >= 0");
  }
  ClusterRaySet set{clusters, rays, spread, {}};
  set.rays.reserve(static_cast<std::size_t>(clusters * rays));
  for (int c = 0; c < clusters; ++c) {
    const double az_r = rng.uniform(-kPi, kPi);
    const double el_r = rng.uniform(-kPi / 2.0, kPi / 2.0);
    const double az_t = rng.uniform(-kPi, kPi);
    const double el_t = rng.uniform(-kPi / 2.0, kPi / 2.0);
    for (int r = 0; r < rays; ++r) {
      Ray ray;
      ray.azimuth_arrival = wrap_azimuth(az_r + rng.laplace(spread));
      ray.elevation_arrival = clamp_elevation(el_r + rng.laplace(spread));
      ray.azimuth_departure = wrap_azimuth(az_t + rng.laplace(spread));
      ray.elevation_departure = clamp_elevation(el_t + rng.laplace(spread));
      ray.gain = rng.complex_normal();
      set.rays.push_back(ray);
    }
  }
  return set;
}

CMatrix geometric_tap(const ClusterRaySet& rays, const UraSpec& rx, const UraSpec& tx) {
  if (rays.rays.empty()) throw Error("geometric_tap: empty ray set");
  CMatrix h = CMatrix::Zero(rx.size(), tx.size());
  for (const auto& ray : rays.rays) {
    const CVector ar = ura_response(ray.azimuth_arrival, ray.elevation_arrival, rx);
    const CVector at = ura_response(ray.azimuth_departure, ray.elevation_departure, tx);
    h.noalias() += ray.gain * ar * at.adjoint();
  }
  const double norm = std::sqrt(static_cast<double>(rx.size()) * tx.size() /
                                (static_cast<double>(rays.clusters) * rays.rays_per_cluster));
  return norm * h;
}

CMatrix scatter_matrix(int rows, int cols, Rng& rng) {
  CMatrix h(rows, cols);
  // column-major fill keeps the draw order tied to the storage order
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, j) = rng.complex_normal();
  }
  return h;
}

CMatrix rician_tap(const CMatrix& los_part, const CMatrix& scatter_part, double rician_factor) {
  if (los_part.rows() != scatter_part.rows() || los_part.cols() != scatter_part.cols()) {
    throw ShapeError(fmt::format("rician_tap: {}x{} vs {}x{}", los_part.rows(), los_part.cols(),
                                 scatter_part.rows(), scatter_part.cols()));
  }
  if (rician_factor < 0.0) throw Error("rician_tap: negative rician factor");
  if (std::isinf(rician_factor)) return los_part;
  const double w_los = std::sqrt(rician_factor / (rician_factor + 1.0));
  const double w_nlos = std::sqrt(1.0 / (rician_factor + 1.0));
  return w_los * los_part + w_nlos * scatter_part;
}

std::vector<double> tap_power_profile(int taps) {
  std::vector<double> w(static_cast<std::size_t>(std::max(taps, 0)));
  double total = 0.0;
  for (int l = 0; l < taps; ++l) {
    w[l] = std::exp(-static_cast<double>(l));
    total += w[l];
  }
  for (auto& x : w) x /= total;
  return w;
}

MatrixStack taps_to_subcarriers(std::span<const CMatrix> taps, int subcarriers) {
  const int L = static_cast<int>(taps.size());
  if (L == 0) throw Error("taps_to_subcarriers: no taps");
  if (subcarriers < L) {
    throw Error(fmt::format("taps_to_subcarriers: {} subcarriers cannot hold {} taps",
                            subcarriers, L));
  }
  MatrixStack freq;
  freq.reserve(static_cast<std::size_t>(subcarriers));
  for (int k = 0; k < subcarriers; ++k) {
    CMatrix h = CMatrix::Zero(taps.front().rows(), taps.front().cols());
    for (int l = 0; l < L; ++l) {
      const long kl = (static_cast<long>(k) * l) % subcarriers;
      h += std::polar(1.0, -2.0 * kPi * static_cast<double>(kl) / subcarriers) * taps[l];
    }
    freq.push_back(std::move(h));
  }
  return freq;
}

MatrixStack subcarriers_to_taps(std::span<const CMatrix> freq, int taps) {
  const int K = static_cast<int>(freq.size());
  if (K == 0 || taps < 1 || taps > K) throw Error("subcarriers_to_taps: need 1 <= taps <= K");
  MatrixStack out;
  out.reserve(static_cast<std::size_t>(taps));
  for (int l = 0; l < taps; ++l) {
    CMatrix h = CMatrix::Zero(freq.front().rows(), freq.front().cols());
    for (int k = 0; k < K; ++k) {
      const long kl = (static_cast<long>(k) * l) % K;
      h += std::polar(1.0, 2.0 * kPi * static_cast<double>(kl) / K) * freq[k];
    }
    out.push_back(h / static_cast<double>(K));
  }
  return out;
}

TapChannel synthesize_link(Link link, const ChannelConfig& config, bool direct_los,
                           const Rng& rng) {
  const auto [rx, tx] = arrays_for(link, config);
  const int L = config.taps[static_cast<int>(link) - 1];
  ClusterCounts counts = config.ris_links;
  if (link == Link::BsToUe) counts = direct_los ? config.direct_los : config.direct_nlos;

  const auto weights = tap_power_profile(L);
  TapChannel out{link, config.rician_factor, {}};
  out.taps.reserve(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    Rng tap_rng = rng.child(static_cast<std::uint64_t>(l));
    const auto rays = draw_cluster_rays(counts.clusters, counts.rays, config.angular_spread, tap_rng);
    const CMatrix los = geometric_tap(rays, rx, tx);
    const CMatrix scatter = scatter_matrix(rx.size(), tx.size(), tap_rng);
    out.taps.push_back(std::sqrt(weights[l]) * rician_tap(los, scatter, config.rician_factor));
  }
  return out;
}

}  // namespace risopt
