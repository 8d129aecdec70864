// SPDX-License-Identifier: Apache-2.0
#include "risopt/rng.hpp"

#include <cmath>

namespace risopt {

std::uint64_t Rng::mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng Rng::child(std::uint64_t tag) const {
  return Rng(FromKey{}, mix(key_ ^ mix(tag + 0x632be59bd9b4e019ULL)));
}

double Rng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

double Rng::laplace(double stddev) {
  if (stddev <= 0.0) return 0.0;
  // scale b gives variance 2 b^2
  const double b = stddev / std::sqrt(2.0);
  const double u = uniform() - 0.5;
  const double mag = 1.0 - 2.0 * std::abs(u);
  if (mag <= 0.0) return 0.0;
  return -b * std::copysign(1.0, u) * std::log(mag);
}

cd Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

}  // namespace risopt
