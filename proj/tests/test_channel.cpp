// SPDX-License-Identifier: Apache-2.0
#include "risopt/channel.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <array>
#include <limits>

using namespace risopt;

TEST_SUITE("channel") {

TEST_CASE("ura_response: single element and broadside") {
  const CVector one = ura_response(0.0, 0.0, {1, 1, 0.5});
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one(0) - cd(1.0, 0.0)) < 1e-15);

  const CVector four = ura_response(0.0, 0.0, {2, 2, 0.5});
  for (Eigen::Index i = 0; i < four.size(); ++i) CHECK(std::abs(four(i)) == doctest::Approx(0.5));
}

TEST_CASE("ura_response: 4x1 steering at 45 degrees azimuth") {
  // element-by-element evaluation of exp(j pi m sin(pi/4)) / 2
  const double expected[4][2] = {{0.5, 0.0},
                                 {-0.3028499335394067, 0.39784660078374046},
                                 {-0.13312767102070783, -0.48195126642493863},
                                 {0.4641207588229163, 0.18598903524036134}};
  const CVector a = ura_response(kPi / 4.0, 0.0, {4, 1, 0.5});
  for (int m = 0; m < 4; ++m) {
    CHECK(a(m).real() == doctest::Approx(expected[m][0]).epsilon(1e-12));
    CHECK(a(m).imag() == doctest::Approx(expected[m][1]).epsilon(1e-12));
  }
}

TEST_CASE("ura_response: unit norm over random angles and shapes") {
  Rng rng(11);
  double worst = 0.0;
  for (int t = 0; t < 1000000; ++t) {
    const UraSpec spec{1 + static_cast<int>(rng.uniform() * 8), 1 + static_cast<int>(rng.uniform() * 8),
                       rng.uniform(0.1, 2.0)};
    const CVector a = ura_response(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0), spec);
    worst = std::max(worst, std::abs(a.norm() - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("draw_cluster_rays: zero spread puts every ray on its cluster centre") {
  Rng rng(3);
  const auto set = draw_cluster_rays(1, 3, 0.0, rng);
  REQUIRE(set.rays.size() == 3);
  for (const auto& r : set.rays) {
    CHECK(r.azimuth_arrival == set.rays[0].azimuth_arrival);
    CHECK(r.elevation_arrival == set.rays[0].elevation_arrival);
    CHECK(r.azimuth_departure == set.rays[0].azimuth_departure);
    CHECK(r.elevation_departure == set.rays[0].elevation_departure);
  }
  const auto single = draw_cluster_rays(1, 1, 0.0, rng);
  CHECK(single.rays.size() == 1);
}

TEST_CASE("draw_cluster_rays: counts, angle ranges and ray spread statistics") {
  const double sigma = 10.0 * kPi / 180.0;
  Rng rng(5);
  double sum_gain = 0.0;
  double sum_d2 = 0.0;
  int n_gain = 0;
  int n_pairs = 0;
  int outside = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto set = draw_cluster_rays(2, 3, sigma, rng);
    REQUIRE(set.rays.size() == 6);
    for (const auto& r : set.rays) {
      CHECK(r.azimuth_arrival >= -kPi);
      CHECK(r.azimuth_arrival < kPi);
      CHECK(std::abs(r.elevation_arrival) <= kPi / 2.0);
      sum_gain += std::norm(r.gain);
      ++n_gain;
    }
    // same-cluster pairs: offsets differ by a difference of two Laplacians
    for (int c = 0; c < 2; ++c) {
      const auto& a = set.rays[c * 3];
      const auto& b = set.rays[c * 3 + 1];
      const double d = std::remainder(a.azimuth_departure - b.azimuth_departure, 2.0 * kPi);
      if (std::abs(d) > 10.0 * sigma) ++outside;
      sum_d2 += d * d;
      ++n_pairs;
    }
  }
  CHECK(sum_gain / n_gain == doctest::Approx(1.0).epsilon(0.05));
  CHECK(sum_d2 / n_pairs == doctest::Approx(2.0 * sigma * sigma).epsilon(0.10));
  CHECK(outside <= 2);
}

TEST_CASE("draw_cluster_rays: rejects bad arguments") {
  Rng rng(1);
  CHECK_THROWS_AS(draw_cluster_rays(0, 1, 0.1, rng), Error);
  CHECK_THROWS_AS(draw_cluster_rays(1, 0, 0.1, rng), Error);
  CHECK_THROWS_AS(draw_cluster_rays(1, 1, -0.1, rng), Error);
}

namespace {
ClusterRaySet one_ray(cd gain, double az_r, double el_r, double az_t, double el_t) {
  return {1, 1, 0.0, {Ray{gain, az_r, el_r, az_t, el_t}}};
}
}  // namespace

TEST_CASE("geometric_tap: scalar and rank-one cases") {
  const CMatrix h = geometric_tap(one_ray(1.0, 0.0, 0.0, 0.0, 0.0), {1, 1, 0.5}, {1, 1, 0.5});
  REQUIRE(h.rows() == 1);
  CHECK(std::abs(h(0, 0) - cd(1.0, 0.0)) < 1e-15);

  const cd beta(0.3, -1.1);
  const CMatrix g = geometric_tap(one_ray(beta, 0.4, -0.2, -1.3, 0.7), {2, 3, 0.5}, {4, 2, 0.5});
  Eigen::JacobiSVD<CMatrix> svd(g);
  CHECK(svd.singularValues()(0) == doctest::Approx(std::sqrt(6.0 * 8.0) * std::abs(beta)).epsilon(1e-12));
  CHECK(svd.singularValues()(1) < 1e-12);
}

TEST_CASE("geometric_tap: linear in the ray gains") {
  const UraSpec rx{2, 2, 0.5};
  const UraSpec tx{3, 1, 0.5};
  const auto a = one_ray({0.7, 0.1}, 0.2, 0.1, -0.5, 0.3);
  const auto b = one_ray({-0.2, 0.9}, -2.0, -0.4, 1.1, -0.6);
  ClusterRaySet both{1, 2, 0.0, {a.rays[0], b.rays[0]}};
  const CMatrix sum = geometric_tap(a, rx, tx) + geometric_tap(b, rx, tx);
  // sqrt(1/(R C)) normalization: two rays share the 1/sqrt(2)
  CHECK((geometric_tap(both, rx, tx) - sum / std::sqrt(2.0)).norm() < 1e-12);

  const cd c(2.0, -3.0);
  ClusterRaySet scaled = both;
  for (auto& r : scaled.rays) r.gain *= c;
  CHECK((geometric_tap(scaled, rx, tx) - c * geometric_tap(both, rx, tx)).norm() < 1e-12);
}

TEST_CASE("rician_tap: limits and scalar value") {
  std::mt19937_64 gen(9);
  const CMatrix los = testing::random_matrix(3, 2, gen);
  const CMatrix scatter = testing::random_matrix(3, 2, gen);
  CHECK(rician_tap(los, scatter, 0.0) == scatter);
  CHECK((rician_tap(los, scatter, 1e12) - los).norm() <= 1e-5 * los.norm());

  const CMatrix one = CMatrix::Constant(1, 1, 1.0);
  CHECK(rician_tap(one, one, 1.0)(0, 0).real() == doctest::Approx(1.41421356).epsilon(1e-8));
  CHECK_THROWS_AS(rician_tap(los, CMatrix::Zero(2, 2), 1.0), ShapeError);
}

TEST_CASE("rician_tap: energy split matches brute-force expansion") {
  std::mt19937_64 gen(21);
  for (int t = 0; t < 20; ++t) {
    const CMatrix los = testing::random_matrix(2, 2, gen);
    const CMatrix sc = testing::random_matrix(2, 2, gen);
    const double k = std::uniform_real_distribution<double>(0.0, 20.0)(gen);
    double los2 = 0.0, sc2 = 0.0, cross = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        los2 += std::norm(los(i, j));
        sc2 += std::norm(sc(i, j));
        cross += 2.0 * std::sqrt(k) * (std::conj(los(i, j)) * sc(i, j)).real();
      }
    }
    const double expected = (k * los2 + sc2 + cross) / (k + 1.0);
    CHECK(rician_tap(los, sc, k).squaredNorm() == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("scatter_matrix: second moment") {
  Rng rng(17);
  const CMatrix s = scatter_matrix(100, 1000, rng);
  CHECK(s.squaredNorm() / s.size() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("taps_to_subcarriers: flat channel, DC bin and hand DFT") {
  std::mt19937_64 gen(4);
  const CMatrix tap = testing::random_matrix(2, 3, gen);
  const auto flat = taps_to_subcarriers(std::vector<CMatrix>{tap}, 5);
  for (const auto& h : flat) CHECK((h - tap).norm() < 1e-15);

  const std::vector<CMatrix> taps{testing::random_matrix(2, 2, gen), testing::random_matrix(2, 2, gen),
                                  testing::random_matrix(2, 2, gen)};
  CHECK((taps_to_subcarriers(taps, 8)[0] - (taps[0] + taps[1] + taps[2])).norm() < 1e-14);

  const std::vector<CMatrix> scalar{CMatrix::Constant(1, 1, cd(1, 0)), CMatrix::Constant(1, 1, cd(0, 1))};
  const auto h = taps_to_subcarriers(scalar, 4);
  const cd expected[4] = {{1, 1}, {2, 0}, {1, -1}, {0, 0}};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(h[k](0, 0) - expected[k]) < 1e-14);

  CHECK_THROWS_AS(taps_to_subcarriers(taps, 2), Error);
}

TEST_CASE("taps_to_subcarriers: inverse DFT round trip") {
  std::mt19937_64 gen(8);
  for (int L = 1; L <= 5; ++L) {
    for (int K : {L, L + 1, 24}) {
      std::vector<CMatrix> taps;
      for (int l = 0; l < L; ++l) taps.push_back(testing::random_matrix(3, 4, gen));
      const auto back = subcarriers_to_taps(taps_to_subcarriers(taps, K), L);
      for (int l = 0; l < L; ++l) CHECK((back[l] - taps[l]).norm() <= 1e-10 * taps[l].norm());
      if (K > L) {
        // remaining delay bins are the zero padding
        const auto padded = subcarriers_to_taps(taps_to_subcarriers(taps, K), K);
        for (int l = L; l < K; ++l) CHECK(padded[l].norm() < 1e-10);
      }
    }
  }
}

TEST_CASE("tap_power_profile: exponential decay with unit sum") {
  const auto w = tap_power_profile(3);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == doctest::Approx(0.6652409557748218).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.24472847105479764).epsilon(1e-12));
  CHECK(w[2] == doctest::Approx(0.09003057317038046).epsilon(1e-12));
}

TEST_CASE("synthesize_link: per-tap variance follows the power profile") {
  ChannelConfig cfg;
  cfg.bs = {2, 1, 0.5};
  cfg.ue = {1, 1, 0.5};
  cfg.taps = {3, 3, 3};
  cfg.rician_factor = 0.0;
  const auto w = tap_power_profile(3);
  std::array<double, 3> power{};
  const int trials = 10000;
  const Rng root(123);
  for (int t = 0; t < trials; ++t) {
    const auto ch = synthesize_link(Link::BsToUe, cfg, false, root.child(t));
    REQUIRE(ch.taps.size() == 3);
    for (int l = 0; l < 3; ++l) power[l] += ch.taps[l].squaredNorm() / ch.taps[l].size();
  }
  for (int l = 0; l < 3; ++l) CHECK(power[l] / trials == doctest::Approx(w[l]).epsilon(0.10));
}

TEST_CASE("synthesize_link: single deterministic ray gives rank-one taps") {
  ChannelConfig cfg;
  cfg.bs = {2, 2, 0.5};
  cfg.ue = {2, 1, 0.5};
  cfg.ris = {3, 3, 0.5};
  cfg.rician_factor = std::numeric_limits<double>::infinity();
  cfg.ris_links = {1, 1};
  cfg.angular_spread = 0.0;
  for (auto link : {Link::BsToRis, Link::RisToUe, Link::BsToUe}) {
    const auto ch = synthesize_link(link, cfg, true, Rng(4).child(static_cast<int>(link)));
    CHECK(static_cast<int>(ch.taps.size()) == cfg.taps[static_cast<int>(link) - 1]);
    for (const auto& tap : ch.taps) {
      Eigen::JacobiSVD<CMatrix> svd(tap);
      CHECK(svd.singularValues()(1) <= 1e-12 * svd.singularValues()(0));
    }
  }
}

TEST_CASE("synthesize_link: shapes and determinism") {
  ChannelConfig cfg;
  cfg.bs = {4, 4, 0.5};
  cfg.ue = {2, 2, 0.5};
  cfg.ris = {3, 2, 0.5};
  const Rng stream(77);
  const auto a = synthesize_link(Link::BsToRis, cfg, false, stream);
  const auto b = synthesize_link(Link::BsToRis, cfg, false, stream);
  REQUIRE(a.taps.size() == 3);
  CHECK(a.taps[0].rows() == 6);
  CHECK(a.taps[0].cols() == 16);
  for (std::size_t l = 0; l < a.taps.size(); ++l) CHECK(a.taps[l] == b.taps[l]);
  const auto ue = synthesize_link(Link::RisToUe, cfg, false, stream);
  CHECK(ue.taps.size() == 4);
  CHECK(ue.taps[0].rows() == 4);
  CHECK(ue.taps[0].cols() == 6);
}

}  // TEST_SUITE
