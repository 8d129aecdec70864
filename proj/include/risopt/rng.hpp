// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "risopt/types.hpp"

#include <cstdint>
#include <limits>

namespace risopt {

/// Counter-based generator (SplitMix64 output function over key + counter).
///
/// Every stream is identified by a 64-bit key. `child(tag)` derives an
/// independent stream from the key alone, so a (trial, link, tap) path
/// always yields the same numbers regardless of how many values any other
/// stream consumed. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x5851f42d4c957f2dULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++counter_;
    return mix(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Independent substream; does not advance this stream.
  [[nodiscard]] Rng child(std::uint64_t tag) const;

  std::uint64_t key() const { return key_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  /// Zero-mean Laplacian with the given standard deviation.
  double laplace(double stddev);
  /// Circularly-symmetric complex Gaussian CN(0, 1).
  cd complex_normal();
  bool bernoulli(double p) { return uniform() < p; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  struct FromKey {};
  Rng(FromKey, std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace risopt
