// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>

namespace risopt {

/// Operation counter for the optimizer's named linear-algebra kernels.
///
/// Costs are charged analytically at call sites: a complex multiplication
/// is 6 real flops (4 mults + 2 adds) and a complex division is 8.
class FlopMeter {
 public:
  static constexpr std::uint64_t kFlopsPerComplexMult = 6;
  static constexpr std::uint64_t kFlopsPerComplexDiv = 8;

  /// (m x n) * (n x p) product: m*n*p complex multiplications.
  void record_gemm(std::uint64_t m, std::uint64_t n, std::uint64_t p);
  void record_complex_mults(std::uint64_t count) { complex_mults_ += count; }
  void record_complex_divs(std::uint64_t count) { complex_divs_ += count; }
  void record_real_ops(std::uint64_t count) { real_ops_ += count; }
  /// SVD of an m x n matrix, charged m^2 n + n^3 complex multiplications.
  void record_svd(std::uint64_t m, std::uint64_t n);
  /// Inverse / log-det of an n x n Hermitian matrix, charged n^3.
  void record_inverse(std::uint64_t n);

  void add_iterations(std::uint64_t n) { iterations_ += n; }
  void add_wall_time(double seconds) { wall_time_ += seconds; }

  /// Accumulate another meter (deterministic reduction of per-trial meters).
  void merge(const FlopMeter& other);

  std::uint64_t complex_mults() const { return complex_mults_; }
  std::uint64_t complex_divs() const { return complex_divs_; }
  std::uint64_t real_ops() const { return real_ops_; }
  std::uint64_t iterations() const { return iterations_; }
  double wall_time() const { return wall_time_; }

  std::uint64_t flops() const {
    return kFlopsPerComplexMult * complex_mults_ + kFlopsPerComplexDiv * complex_divs_ + real_ops_;
  }

  /// Operation counters and iterations agree (wall time is ignored).
  bool same_counts(const FlopMeter& other) const {
    return complex_mults_ == other.complex_mults_ && complex_divs_ == other.complex_divs_ &&
           real_ops_ == other.real_ops_ && iterations_ == other.iterations_;
  }

 private:
  std::uint64_t complex_mults_ = 0;
  std::uint64_t complex_divs_ = 0;
  std::uint64_t real_ops_ = 0;
  std::uint64_t iterations_ = 0;
  double wall_time_ = 0.0;
};

/// One row of the complexity table.
struct ComplexityRecord {
  int n_ris = 0;
  double iterations = 0.0;
  double flops = 0.0;
  double runtime_s = 0.0;
};

/// Summarize a meter that accumulated `runs` optimizer runs (per-run means).
ComplexityRecord report(const FlopMeter& meter, int n_ris, int runs = 1);

void write_complexity_csv(std::ostream& out, std::span<const ComplexityRecord> rows);

}  // namespace risopt
