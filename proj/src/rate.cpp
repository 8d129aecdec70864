// SPDX-License-Identifier: Apache-2.0
#include "risopt/rate.hpp"

#include <fmt/format.h>

#include <cmath>

namespace risopt {

RisPhases RisPhases::random(int elements, Rng& rng) {
  RisPhases phi{CVector(elements)};
  for (int i = 0; i < elements; ++i) phi.diag(i) = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
  return phi;
}

RisPhases RisPhases::from_angles(std::span<const double> angles) {
  RisPhases phi{CVector(static_cast<Eigen::Index>(angles.size()))};
  for (std::size_t i = 0; i < angles.size(); ++i) phi.diag(i) = std::polar(1.0, angles[i]);
  return phi;
}

double RisPhases::max_modulus_error() const {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    worst = std::max(worst, std::abs(std::abs(diag(i)) - 1.0));
  }
  return worst;
}

FreqChannelSet fold_gains(const FreqChannelSet& ch, const LinkGains& gains) {
  FreqChannelSet out = ch;
  const double sd = std::sqrt(gains.direct);
  const double si = std::sqrt(gains.indirect);
  for (auto& h : out.h3) h *= sd;
  for (auto& h : out.h1) h *= si;
  return out;
}

EquivalentChannel equivalent_channel(const FreqChannelSet& folded, const RisPhases& phi) {
  folded.validate();
  if (phi.size() != folded.ris_elements()) {
    throw ShapeError(fmt::format("equivalent_channel: {} phases for {} RIS elements", phi.size(),
                                 folded.ris_elements()));
  }
  EquivalentChannel eq;
  eq.heq.reserve(folded.h3.size());
  for (std::size_t k = 0; k < folded.h3.size(); ++k) {
    CMatrix h = folded.h3[k];
    h.noalias() += (folded.h2[k] * phi.diag.asDiagonal()) * folded.h1[k];
    eq.heq.push_back(std::move(h));
  }
  return eq;
}

EquivalentChannel equivalent_channel(const FreqChannelSet& ch, const RisPhases& phi,
                                     const LinkGains& gains) {
  return equivalent_channel(fold_gains(ch, gains), phi);
}

double log2det_hpd(const CMatrix& a) {
  const CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::LLT<CMatrix> llt(sym);
  if (llt.info() != Eigen::Success) throw Error("log2det_hpd: matrix is not positive definite");
  double s = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i).real());
  return 2.0 * s / std::log(2.0);
}

double sum_log2det(const EquivalentChannel& eq, std::span<const CMatrix> covariances,
                   double noise_power) {
  if (covariances.size() != eq.heq.size()) {
    throw ShapeError(fmt::format("{} covariances for {} subcarriers", covariances.size(),
                                 eq.heq.size()));
  }
  double total = 0.0;
  for (std::size_t k = 0; k < eq.heq.size(); ++k) {
    const auto& h = eq.heq[k];
    if (covariances[k].rows() != h.cols() || covariances[k].cols() != h.cols()) {
      throw ShapeError(fmt::format("covariance {} is {}x{}, channel has {} inputs", k,
                                   covariances[k].rows(), covariances[k].cols(), h.cols()));
    }
    CMatrix a = CMatrix::Identity(h.rows(), h.rows());
    a.noalias() += (h * covariances[k] * h.adjoint()) / noise_power;
    total += log2det_hpd(a);
  }
  return total;
}

double spectral_efficiency(const EquivalentChannel& eq, std::span<const CMatrix> covariances,
                           double noise_power) {
  if (eq.heq.empty()) throw Error("spectral_efficiency: no subcarriers");
  for (std::size_t k = 0; k < covariances.size(); ++k) {
    const CMatrix sym = 0.5 * (covariances[k] + covariances[k].adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().size() == 0) continue;
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-9 * scale) {
      throw Error(fmt::format("covariance {} is not positive semidefinite (min eigenvalue {:g})", k,
                              es.eigenvalues().minCoeff()));
    }
  }
  return sum_log2det(eq, covariances, noise_power) / static_cast<double>(eq.heq.size());
}

std::vector<CVector> received_signal(const EquivalentChannel& eq, std::span<const CVector> x,
                                     double noise_power, Rng& rng) {
  if (x.size() != eq.heq.size()) throw ShapeError("received_signal: one input per subcarrier");
  const double sigma = std::sqrt(noise_power);
  std::vector<CVector> y;
  y.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k].size() != eq.heq[k].cols()) throw ShapeError("received_signal: input length != N_t");
    CVector yk = eq.heq[k] * x[k];
    if (sigma > 0.0) {
      for (Eigen::Index i = 0; i < yk.size(); ++i) yk(i) += sigma * rng.complex_normal();
    }
    y.push_back(std::move(yk));
  }
  return y;
}

}  // namespace risopt
