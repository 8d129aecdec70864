// SPDX-License-Identifier: Apache-2.0
#include "risopt/pga.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>

namespace risopt {

namespace {

using u64 = std::uint64_t;

void charge_rate_evaluation(FlopMeter* meter, const FreqChannelSet& ch) {
  if (meter == nullptr) return;
  const auto k = static_cast<u64>(ch.subcarriers());
  const auto nt = static_cast<u64>(ch.tx_antennas());
  const auto nr = static_cast<u64>(ch.rx_antennas());
  const auto nris = static_cast<u64>(ch.ris_elements());
  for (u64 i = 0; i < k; ++i) {
    // H_eq = H3 + (H2 Phi) H1
    meter->record_complex_mults(nr * nris);
    meter->record_gemm(nr, nris, nt);
    // A = I + H_eq Q H_eq^H, then log det
    meter->record_gemm(nr, nt, nt);
    meter->record_gemm(nr, nt, nr);
    meter->record_inverse(nr);
  }
}

struct Candidate {
  RisPhases phi;
  PowerAllocation power;
  double rate = 0.0;
};

Candidate evaluate(const FreqChannelSet& folded, RisPhases phi, const PgaConfig& cfg,
                   int streams, FlopMeter* meter) {
  const auto eq = equivalent_channel(folded, phi);
  auto power = allocate_power(eq, cfg.noise_power, cfg.total_power, streams, meter);
  const double rate =
      sum_log2det(eq, power.q, cfg.noise_power) / static_cast<double>(eq.subcarriers());
  charge_rate_evaluation(meter, folded);
  return {std::move(phi), std::move(power), rate};
}

}  // namespace

void PgaConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("convergence threshold must be positive");
  if (max_iterations < 1) throw ConfigError("iteration cap must be >= 1");
  if (!(noise_power > 0.0)) throw ConfigError("noise power must be positive");
  if (!(total_power > 0.0)) throw ConfigError("total power must be positive");
  if (streams < 0) throw ConfigError("stream count must be >= 0");
}

CVector gradient_phi_subcarrier(const FreqChannelSet& folded, const CMatrix& covariance,
                                const RisPhases& phi, double noise_power, std::size_t k,
                                FlopMeter* meter) {
  const CMatrix& h1 = folded.h1[k];
  const CMatrix& h2 = folded.h2[k];
  const CMatrix& h3 = folded.h3[k];
  const auto nr = h2.rows();

  const CMatrix h2_phi = h2 * phi.diag.asDiagonal();
  CMatrix heq = h3;
  heq.noalias() += h2_phi * h1;

  CMatrix a = CMatrix::Identity(nr, nr);
  a.noalias() += (heq * covariance * heq.adjoint()) / noise_power;

  const CMatrix x = h2 / noise_power;
  const CMatrix h1q = h1 * covariance;
  const CMatrix y = h1q * h3.adjoint();
  const CMatrix z = (h1q * h1.adjoint()) * h2_phi.adjoint();

  const CMatrix w = Eigen::LLT<CMatrix>(0.5 * (a + a.adjoint())).solve(x);
  const CMatrix m = y + z;
  // [(Y + Z) A^{-1} X]_{ii} without forming the full product
  CVector g = (m.array() * w.transpose().array()).rowwise().sum();
  g /= std::log(2.0);

  if (meter != nullptr) {
    const auto ur = static_cast<u64>(nr);
    const auto ut = static_cast<u64>(h1.cols());
    const auto un = static_cast<u64>(h1.rows());
    meter->record_complex_mults(ur * un);      // H2 Phi
    meter->record_gemm(ur, un, ut);            // H_eq
    meter->record_gemm(ur, ut, ut);            // H_eq Q
    meter->record_gemm(ur, ut, ur);            // (H_eq Q) H_eq^H
    meter->record_gemm(un, ut, ut);            // H1 Q
    meter->record_gemm(un, ut, ur);            // Y
    meter->record_gemm(un, ut, un);            // H1 Q H1^H
    meter->record_gemm(un, un, ur);            // Z
    meter->record_inverse(ur);                 // A^{-1}
    meter->record_gemm(ur, ur, un);            // A^{-1} X
    meter->record_complex_mults(un * ur);      // diagonal of (Y + Z) A^{-1} X
  }
  return g;
}

CVector gradient_phi(const FreqChannelSet& folded, std::span<const CMatrix> covariances,
                     const RisPhases& phi, double noise_power, FlopMeter* meter) {
  folded.validate();
  if (covariances.size() != folded.h3.size()) {
    throw ShapeError(fmt::format("gradient_phi: {} covariances for {} subcarriers",
                                 covariances.size(), folded.h3.size()));
  }
  if (phi.size() != folded.ris_elements()) {
    throw ShapeError("gradient_phi: phase vector length differs from RIS size");
  }
  CVector g = CVector::Zero(phi.size());
  for (std::size_t k = 0; k < covariances.size(); ++k) {
    g += gradient_phi_subcarrier(folded, covariances[k], phi, noise_power, k, meter);
  }
  return g;
}

RisPhases project_unit_modulus(const CVector& v, const RisPhases& previous) {
  if (previous.size() != v.size()) throw ShapeError("project_unit_modulus: length mismatch");
  RisPhases out{CVector(v.size())};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double r = std::abs(v(i));
    out.diag(i) = (r > 0.0 && std::isfinite(r)) ? v(i) / r : previous.diag(i);
  }
  return out;
}

PgaResult pga_optimize(const FreqChannelSet& folded, const RisPhases& initial,
                       const PgaConfig& config, FlopMeter* meter) {
  config.validate();
  folded.validate();
  const auto start = std::chrono::steady_clock::now();
  const int streams = config.streams > 0
                          ? config.streams
                          : std::min(folded.tx_antennas(), folded.rx_antennas());

  Candidate current = evaluate(folded, initial, config, streams, meter);
  PgaResult result;
  result.initial_rate = current.rate;
  result.trace.push_back(current.rate);

  double mu = config.learning_rate;
  for (int n = 0; n < config.max_iterations; ++n) {
    ++result.iterations;
    const CVector g = gradient_phi(folded, current.power.q, current.phi, config.noise_power, meter);
    const CVector stepped = current.phi.diag + mu * g.conjugate();
    RisPhases next_phi = project_unit_modulus(stepped, current.phi);
    if (meter != nullptr) {
      meter->record_complex_mults(static_cast<u64>(g.size()));
      meter->record_complex_divs(static_cast<u64>(g.size()));
    }
    Candidate next = evaluate(folded, std::move(next_phi), config, streams, meter);

    const double delta = next.rate - current.rate;
    if (std::abs(delta) < config.epsilon) {
      if (delta > 0.0) {
        current = std::move(next);
        result.trace.push_back(current.rate);
      }
      result.stop = PgaStop::Converged;
      break;
    }
    if (delta < 0.0) {
      mu /= 10.0;
      if (mu < config.min_learning_rate) {
        result.stop = PgaStop::LearningRateFloor;
        break;
      }
      continue;
    }
    current = std::move(next);
    result.trace.push_back(current.rate);
  }

  result.phi = std::move(current.phi);
  result.power = std::move(current.power);
  result.rate = current.rate;
  result.learning_rate = mu;
  if (meter != nullptr) {
    meter->add_iterations(static_cast<u64>(result.iterations));
    meter->add_wall_time(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return result;
}

PgaResult pga_optimize(const FreqChannelSet& folded, const PgaConfig& config, Rng& rng,
                       FlopMeter* meter) {
  return pga_optimize(folded, RisPhases::random(folded.ris_elements(), rng), config, meter);
}

}  // namespace risopt
