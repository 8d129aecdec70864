// SPDX-License-Identifier: Apache-2.0
#include "risopt/power.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <vector>

using namespace risopt;
using risopt::testing::random_matrix;

namespace {

// Water-filling optimality: active streams share one water level and idle
// streams sit above it.
void check_kkt(const std::vector<double>& gains, const WaterfillResult& wf, double total) {
  const double level = 1.0 / wf.cutoff;
  const double sum = std::accumulate(wf.powers.begin(), wf.powers.end(), 0.0);
  CHECK(sum == doctest::Approx(total).epsilon(1e-9));
  for (std::size_t i = 0; i < gains.size(); ++i) {
    CHECK(wf.powers[i] >= 0.0);
    if (wf.powers[i] > 0.0) {
      CHECK(wf.powers[i] + 1.0 / gains[i] == doctest::Approx(level).epsilon(1e-9));
    } else if (gains[i] > 0.0) {
      CHECK(1.0 / gains[i] >= level * (1.0 - 1e-9));
    }
  }
}

double rate_of(const std::vector<double>& gains, const std::vector<double>& powers) {
  double s = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i) s += std::log2(1.0 + gains[i] * powers[i]);
  return s;
}

}  // namespace

TEST_SUITE("power") {

TEST_CASE("waterfill: two-stream hand example") {
  const std::vector<double> g{4.0, 1.0};
  const auto wf = waterfill(g, 1.0);
  CHECK(wf.cutoff == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  CHECK(wf.powers[0] == doctest::Approx(0.875).epsilon(1e-12));
  CHECK(wf.powers[1] == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("waterfill: weak stream stays dry at low power") {
  const std::vector<double> g{4.0, 1.0};
  const auto wf = waterfill(g, 0.5);
  CHECK(wf.powers[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wf.powers[1] == 0.0);
  check_kkt(g, wf, 0.5);
}

TEST_CASE("waterfill: KKT conditions on random gains") {
  std::mt19937_64 gen(12);
  std::lognormal_distribution<double> gain_dist(0.0, 2.0);
  std::uniform_real_distribution<double> power_dist(-3.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> g(1 + t % 40);
    for (auto& x : g) x = gain_dist(gen);
    const double total = std::pow(10.0, power_dist(gen));
    check_kkt(g, waterfill(g, total), total);
  }
}

TEST_CASE("waterfill: beats uniform and random feasible splits") {
  std::mt19937_64 gen(13);
  std::exponential_distribution<double> e(1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> g(8);
    for (auto& x : g) x = e(gen) * 5.0;
    const double total = 2.0;
    const auto wf = waterfill(g, total);
    const double best = rate_of(g, wf.powers);
    CHECK(best >= rate_of(g, std::vector<double>(8, total / 8.0)) - 1e-12);
    std::vector<double> r(8);
    for (auto& x : r) x = e(gen);
    const double s = std::accumulate(r.begin(), r.end(), 0.0);
    for (auto& x : r) x *= total / s;
    CHECK(best >= rate_of(g, r) - 1e-12);
  }
}

TEST_CASE("waterfill: zero gains get nothing") {
  const std::vector<double> g{0.0, 2.0, 0.0, 1e-30};
  const auto wf = waterfill(g, 10.0);
  CHECK(wf.powers[0] == 0.0);
  CHECK(wf.powers[2] == 0.0);
  CHECK(wf.powers[3] == 0.0);
  CHECK(wf.powers[1] == doctest::Approx(10.0));
}

TEST_CASE("waterfill: equal gains split evenly") {
  const std::vector<double> g(5, 3.0);
  const auto wf = waterfill(g, 1e6);
  for (double p : wf.powers) CHECK(p == doctest::Approx(2e5).epsilon(1e-12));
}

TEST_CASE("waterfill: error paths") {
  const std::vector<double> g{1.0};
  CHECK_THROWS_AS(waterfill(g, 0.0), Error);
  CHECK_THROWS_AS(waterfill(g, -1.0), Error);
  const std::vector<double> dead{0.0, 0.0};
  CHECK_THROWS_AS(waterfill(dead, 1.0), Error);
  CHECK_THROWS_AS(waterfill(std::vector<double>{}, 1.0), Error);
}

TEST_CASE("channel_eigvals matches a Hermitian eigen-decomposition") {
  std::mt19937_64 gen(14);
  EquivalentChannel eq{{random_matrix(2, 4, gen), random_matrix(3, 3, gen), random_matrix(4, 2, gen)}};
  const double noise = 0.4;
  const auto modes = channel_eigvals(eq, noise, 0);
  for (std::size_t k = 0; k < eq.heq.size(); ++k) {
    const CMatrix& h = eq.heq[k];
    const CMatrix gram = h.adjoint() * h / noise;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    const auto rank = std::min(h.rows(), h.cols());
    REQUIRE(modes.gains[k].size() == rank);
    for (Eigen::Index i = 0; i < rank; ++i) {
      CHECK(modes.gains[k](i) == doctest::Approx(es.eigenvalues()(gram.rows() - 1 - i)).epsilon(1e-10));
      if (i > 0) CHECK(modes.gains[k](i) <= modes.gains[k](i - 1));
      const CVector u = modes.basis[k].col(i);
      CHECK((gram * u - modes.gains[k](i) * u).norm() < 1e-10 * (1.0 + modes.gains[k](i)));
    }
    const CMatrix ortho = modes.basis[k].adjoint() * modes.basis[k];
    CHECK((ortho - CMatrix::Identity(rank, rank)).norm() < 1e-12);
  }
  const auto one = channel_eigvals(eq, noise, 1);
  for (const auto& g : one.gains) CHECK(g.size() == 1);
}

TEST_CASE("build_covariances: Hermitian with trace equal to the powers") {
  std::mt19937_64 gen(15);
  const CMatrix u = testing::random_unitary(4, gen).leftCols(2);
  RVector p(2);
  p << 1.5, 0.25;
  const std::vector<CMatrix> bases{u};
  const std::vector<RVector> powers{p};
  const auto q = build_covariances(bases, powers);
  CHECK(q[0].trace().real() == doctest::Approx(1.75).epsilon(1e-12));
  CHECK((q[0] - q[0].adjoint()).norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(q[0]);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);

  const std::vector<RVector> wrong{RVector::Ones(3)};
  CHECK_THROWS_AS(build_covariances(bases, wrong), ShapeError);
  CHECK_THROWS_AS(build_covariances(bases, std::vector<RVector>{}), ShapeError);
}

TEST_CASE("allocate_power: budget, optimality against uniform power and dead channels") {
  std::mt19937_64 gen(16);
  for (int t = 0; t < 20; ++t) {
    EquivalentChannel eq;
    for (int k = 0; k < 6; ++k) eq.heq.push_back(random_matrix(2, 4, gen) * (0.2 + 0.3 * k));
    const double total = 0.5 * (t + 1);
    const auto alloc = allocate_power(eq, 1.0, total, 2);
    double trace = 0.0;
    for (const auto& q : alloc.q) trace += q.trace().real();
    CHECK(trace == doctest::Approx(total).epsilon(1e-9));
    CHECK(alloc.allocated_power() == doctest::Approx(total).epsilon(1e-9));

    const std::vector<CMatrix> uniform(6, CMatrix::Identity(4, 4) * (total / 24.0));
    CHECK(spectral_efficiency(eq, alloc.q, 1.0) >= spectral_efficiency(eq, uniform, 1.0) - 1e-12);
  }

  EquivalentChannel dead{{CMatrix::Zero(2, 3), CMatrix::Zero(2, 3)}};
  const auto none = allocate_power(dead, 1.0, 1.0, 0);
  CHECK(none.allocated_power() == 0.0);
  CHECK(spectral_efficiency(dead, none.q, 1.0) == 0.0);
}

TEST_CASE("allocate_power charges the meter") {
  std::mt19937_64 gen(17);
  EquivalentChannel eq{{random_matrix(2, 3, gen)}};
  FlopMeter meter;
  allocate_power(eq, 1.0, 1.0, 2, &meter);
  // gram (3x2x3) + svd(3,3) in complex mults
  CHECK(meter.complex_mults() == 18 + 9 * 3 + 27);
  CHECK(meter.real_ops() == 8);
}

}  // TEST_SUITE
