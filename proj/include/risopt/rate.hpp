// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risopt/channel.hpp"
#include "risopt/propagation.hpp"
#include "risopt/rng.hpp"
#include "risopt/types.hpp"

#include <span>

namespace risopt {

/// Diagonal of the RIS reflection matrix; every entry is unit modulus.
struct RisPhases {
  CVector diag;

  int size() const { return static_cast<int>(diag.size()); }
  /// Phases drawn i.i.d. uniform on [0, 2 pi).
  static RisPhases random(int elements, Rng& rng);
  static RisPhases from_angles(std::span<const double> angles);
  /// Largest | |phi_i| - 1 |.
  double max_modulus_error() const;
};

struct EquivalentChannel {
  MatrixStack heq;  ///< one N_r x N_t matrix per subcarrier

  int subcarriers() const { return static_cast<int>(heq.size()); }
};

/// Scale h3 by sqrt(rho_direct) and h1 by sqrt(rho_indirect). The optimizer
/// works on the folded set so its gradient needs no pathloss terms.
FreqChannelSet fold_gains(const FreqChannelSet& ch, const LinkGains& gains);

/// sqrt(rho_d) H3[k] + sqrt(rho_i) H2[k] diag(phi) H1[k] for every k.
EquivalentChannel equivalent_channel(const FreqChannelSet& ch, const RisPhases& phi,
                                     const LinkGains& gains);
/// Same with unit gains, for an already folded channel set.
EquivalentChannel equivalent_channel(const FreqChannelSet& folded, const RisPhases& phi);

/// log2 det of a Hermitian positive definite matrix (Cholesky of the
/// symmetrized argument).
double log2det_hpd(const CMatrix& a);

/// sum_k log2 det(I + H[k] Q[k] H[k]^H / noise), without PSD checks.
double sum_log2det(const EquivalentChannel& eq, std::span<const CMatrix> covariances,
                   double noise_power);

/// (1/K) sum_k log2 det(I + H[k] Q[k] H[k]^H / noise) in bits/s/Hz.
/// Throws Error when a covariance has an eigenvalue below -1e-9 (relative to
/// its largest eigenvalue once that exceeds 1).
double spectral_efficiency(const EquivalentChannel& eq, std::span<const CMatrix> covariances,
                           double noise_power);

/// y[k] = H[k] x[k] + v[k], v[k] ~ CN(0, noise I).
std::vector<CVector> received_signal(const EquivalentChannel& eq, std::span<const CVector> x,
                                     double noise_power, Rng& rng);

}  // namespace risopt
