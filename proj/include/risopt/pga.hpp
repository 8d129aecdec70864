// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risopt/channel.hpp"
#include "risopt/flops.hpp"
#include "risopt/power.hpp"
#include "risopt/rate.hpp"

#include <span>

namespace risopt {

struct PgaConfig {
  double learning_rate = 0.1;
  double epsilon = 1e-3;
  int max_iterations = 200;
  double min_learning_rate = 1e-12;
  double noise_power = 1.0;
  double total_power = 1.0;
  int streams = 0;  ///< 0 selects min(N_t, N_r)

  void validate() const;
};

enum class PgaStop { Converged, IterationCap, LearningRateFloor };

struct PgaResult {
  RisPhases phi;
  PowerAllocation power;
  double rate = 0.0;          ///< bits/s/Hz at phi, power
  double initial_rate = 0.0;  ///< rate at the starting phases
  std::vector<double> trace;  ///< accepted rates, starting with initial_rate
  int iterations = 0;         ///< gradient steps attempted, including reverted ones
  double learning_rate = 0.0; ///< step size at exit
  PgaStop stop = PgaStop::IterationCap;

  bool converged() const { return stop == PgaStop::Converged; }
};

/// Partial derivatives of sum_k log2 det(A_k) with respect to each RIS
/// diagonal entry, holding conj(phi) fixed:
///   g_i = (1/ln 2) sum_k [ (Y_k + Z_k) A_k^{-1} X_k ]_{ii}
/// with X_k = H2/noise, Y_k = H1 Q H3^H and Z_k = H1 Q H1^H phi^H H2^H.
/// `folded` must already carry the pathloss gains (see fold_gains).
/// For the real objective the steepest-ascent direction is conj(g).
CVector gradient_phi(const FreqChannelSet& folded, std::span<const CMatrix> covariances,
                     const RisPhases& phi, double noise_power, FlopMeter* meter = nullptr);

/// Same quantity for a single subcarrier k.
CVector gradient_phi_subcarrier(const FreqChannelSet& folded, const CMatrix& covariance,
                                const RisPhases& phi, double noise_power, std::size_t k,
                                FlopMeter* meter = nullptr);

/// v_i / |v_i|; entries with zero (or non-finite) modulus keep `previous`.
RisPhases project_unit_modulus(const CVector& v, const RisPhases& previous);

/// Joint projected gradient ascent on the phases with spatial-frequency
/// water-filling of the covariances after every step. A step that lowers the
/// rate by at least epsilon is reverted and the learning rate divided by 10.
/// Stops once a step changes the rate by less than epsilon.
PgaResult pga_optimize(const FreqChannelSet& folded, const RisPhases& initial,
                       const PgaConfig& config, FlopMeter* meter = nullptr);

/// Starts from phases drawn uniformly on [0, 2 pi).
PgaResult pga_optimize(const FreqChannelSet& folded, const PgaConfig& config, Rng& rng,
                       FlopMeter* meter = nullptr);

}  // namespace risopt
