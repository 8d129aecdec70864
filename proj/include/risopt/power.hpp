// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risopt/flops.hpp"
#include "risopt/rate.hpp"
#include "risopt/types.hpp"

#include <span>

namespace risopt {

/// Per-subcarrier transmit covariances Q[k] = U[k] diag(p[k]) U[k]^H.
struct PowerAllocation {
  MatrixStack q;
  MatrixStack u;              ///< N_t x N_s, orthonormal columns
  std::vector<RVector> p;     ///< N_s powers per subcarrier
  double cutoff = 0.0;        ///< lambda_sf; streams with 1/lambda >= 1/cutoff are off
  double total_power = 0.0;

  double allocated_power() const;
};

/// Per-subcarrier stream gains (descending) and transmit eigenvectors.
struct Eigenmodes {
  std::vector<RVector> gains;
  MatrixStack basis;
};

/// Top `streams` eigenpairs of H[k]^H H[k] / noise for every subcarrier
/// (0 keeps all min(N_r, N_t) of them).
Eigenmodes channel_eigvals(const EquivalentChannel& eq, double noise_power, int streams,
                           FlopMeter* meter = nullptr);

struct WaterfillResult {
  std::vector<double> powers;
  double cutoff = 0.0;
};

/// Joint water-filling over all (subcarrier, stream) gains:
/// P_i = max(0, 1/cutoff - 1/gain_i) with sum P_i = total_power.
/// Throws Error if total_power <= 0 or no gain is positive.
WaterfillResult waterfill(std::span<const double> gains, double total_power);

MatrixStack build_covariances(std::span<const CMatrix> bases, std::span<const RVector> powers);

/// Spatial-frequency water-filling on the given equivalent channel.
PowerAllocation allocate_power(const EquivalentChannel& eq, double noise_power,
                               double total_power, int streams, FlopMeter* meter = nullptr);

}  // namespace risopt
