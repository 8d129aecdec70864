// SPDX-License-Identifier: Apache-2.0
#include "risopt/flops.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <ostream>

namespace risopt {

void FlopMeter::record_gemm(std::uint64_t m, std::uint64_t n, std::uint64_t p) {
  complex_mults_ += m * n * p;
}

void FlopMeter::record_svd(std::uint64_t m, std::uint64_t n) {
  complex_mults_ += m * m * n + n * n * n;
}

void FlopMeter::record_inverse(std::uint64_t n) { complex_mults_ += n * n * n; }

void FlopMeter::merge(const FlopMeter& other) {
  complex_mults_ += other.complex_mults_;
  complex_divs_ += other.complex_divs_;
  real_ops_ += other.real_ops_;
  iterations_ += other.iterations_;
  wall_time_ += other.wall_time_;
}

ComplexityRecord report(const FlopMeter& meter, int n_ris, int runs) {
  const double n = runs > 0 ? static_cast<double>(runs) : 1.0;
  return {n_ris, static_cast<double>(meter.iterations()) / n,
          static_cast<double>(meter.flops()) / n, meter.wall_time() / n};
}

void write_complexity_csv(std::ostream& out, std::span<const ComplexityRecord> rows) {
  out << "n_ris,iter_count,flop_count,runtime_s\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{:.4f},{:.6e},{:.6f}\n", r.n_ris, r.iterations, r.flops, r.runtime_s);
  }
}

}  // namespace risopt
