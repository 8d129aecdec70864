// SPDX-License-Identifier: Apache-2.0
#include "risopt/power.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace risopt {

namespace {

constexpr double kMinGain = 1e-15;
constexpr double kRelativeGainFloor = 1e-12;
constexpr int kBisectionSteps = 200;

}  // namespace

double PowerAllocation::allocated_power() const {
  double s = 0.0;
  for (const auto& pk : p) s += pk.sum();
  return s;
}

Eigenmodes channel_eigvals(const EquivalentChannel& eq, double noise_power, int streams,
                           FlopMeter* meter) {
  Eigenmodes modes;
  modes.gains.reserve(eq.heq.size());
  modes.basis.reserve(eq.heq.size());
  for (const auto& h : eq.heq) {
    const int rank = static_cast<int>(std::min(h.rows(), h.cols()));
    const int ns = streams > 0 ? std::min(streams, rank) : rank;
    Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeThinV);
    RVector gains = svd.singularValues().head(ns).array().square() / noise_power;
    modes.gains.push_back(std::move(gains));
    modes.basis.push_back(svd.matrixV().leftCols(ns));
    if (meter != nullptr) {
      const auto nt = static_cast<std::uint64_t>(h.cols());
      meter->record_gemm(nt, static_cast<std::uint64_t>(h.rows()), nt);
      meter->record_svd(nt, nt);
    }
  }
  return modes;
}

WaterfillResult waterfill(std::span<const double> gains, double total_power) {
  if (!(total_power > 0.0)) throw Error("waterfill: total power must be positive");
  double max_gain = 0.0;
  for (double g : gains) max_gain = std::max(max_gain, g);
  if (!(max_gain > 0.0)) throw Error("waterfill: no stream has positive gain");

  const double floor = std::max(kMinGain, kRelativeGainFloor * max_gain);
  std::vector<double> inv(gains.size(), std::numeric_limits<double>::infinity());
  double min_inv = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (gains[i] > floor) {
      inv[i] = 1.0 / gains[i];
      min_inv = std::min(min_inv, inv[i]);
    }
  }

  auto filled = [&](double level) {
    double s = 0.0;
    for (double x : inv) s += std::max(0.0, level - x);
    return s;
  };

  // Bisection on the water level 1/cutoff; the filled volume is continuous
  // and nondecreasing in the level.
  double lo = min_inv;
  double hi = min_inv + total_power;
  for (int it = 0; it < kBisectionSteps; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = filled(mid);
    if (std::abs(f - total_power) < 1e-12 * total_power) {
      lo = hi = mid;
      break;
    }
    (f < total_power ? lo : hi) = mid;
  }
  double level = 0.5 * (lo + hi);

  // Polish: with the active set fixed the level is a closed form.
  double active_inv = 0.0;
  int active = 0;
  for (double x : inv) {
    if (x < level) {
      active_inv += x;
      ++active;
    }
  }
  if (active > 0) {
    const double exact = (total_power + active_inv) / active;
    bool consistent = true;
    for (double x : inv) {
      if ((x < level) != (x < exact)) consistent = false;
    }
    if (consistent) level = exact;
  }

  WaterfillResult out;
  out.cutoff = 1.0 / level;
  out.powers.resize(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i) out.powers[i] = std::max(0.0, level - inv[i]);
  return out;
}

MatrixStack build_covariances(std::span<const CMatrix> bases, std::span<const RVector> powers) {
  if (bases.size() != powers.size()) throw ShapeError("build_covariances: length mismatch");
  MatrixStack q;
  q.reserve(bases.size());
  for (std::size_t k = 0; k < bases.size(); ++k) {
    if (bases[k].cols() != powers[k].size()) {
      throw ShapeError(fmt::format("build_covariances: basis {} has {} columns, {} powers", k,
                                   bases[k].cols(), powers[k].size()));
    }
    const CMatrix scaled = bases[k] * powers[k].cast<cd>().asDiagonal();
    CMatrix qk = scaled * bases[k].adjoint();
    q.push_back(0.5 * (qk + qk.adjoint()));
  }
  return q;
}

PowerAllocation allocate_power(const EquivalentChannel& eq, double noise_power,
                               double total_power, int streams, FlopMeter* meter) {
  auto modes = channel_eigvals(eq, noise_power, streams, meter);
  std::vector<double> flat;
  for (const auto& g : modes.gains) flat.insert(flat.end(), g.data(), g.data() + g.size());

  PowerAllocation alloc;
  alloc.total_power = total_power;
  alloc.u = std::move(modes.basis);
  alloc.p.reserve(modes.gains.size());

  double max_gain = 0.0;
  for (double g : flat) max_gain = std::max(max_gain, g);
  if (max_gain > 0.0) {
    const auto wf = waterfill(flat, total_power);
    alloc.cutoff = wf.cutoff;
    std::size_t offset = 0;
    for (const auto& g : modes.gains) {
      alloc.p.push_back(Eigen::Map<const RVector>(wf.powers.data() + offset, g.size()));
      offset += static_cast<std::size_t>(g.size());
    }
  } else {
    // dead channel: nothing to fill, any allocation gives zero rate
    for (const auto& g : modes.gains) alloc.p.push_back(RVector::Zero(g.size()));
  }
  if (meter != nullptr) meter->record_real_ops(static_cast<std::uint64_t>(flat.size()) * 4);
  alloc.q = build_covariances(alloc.u, alloc.p);
  return alloc;
}

}  // namespace risopt
