#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace gupchain {

/// Streaming compensated pairwise (binary tree) accumulator.
///
/// Values are combined in blocks of 2^k exactly as a balanced reduction tree
/// over the insertion order would combine them, so the result depends only on
/// the sequence of added values. The rounding error of every pairing is kept
/// in a second word, which leaves an error close to one ulp of the result
/// even under heavy cancellation.
class PairwiseSum {
 public:
  void add(double value) noexcept;

  /// Folds another accumulator's current value in as a single term.
  void merge(const PairwiseSum& other) noexcept { add(other.value()); }

  [[nodiscard]] double value() const noexcept;
  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  /// Sum of |value| over everything added, for rounding-error estimates.
  [[nodiscard]] double abs_sum() const noexcept { return abs_sum_; }

 private:
  std::array<double, 64> partial_{};
  std::array<double, 64> partial_lo_{};
  std::uint64_t count_ = 0;
  double abs_sum_ = 0.0;
};

/// Compensated pairwise sum of a contiguous range in index order.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace gupchain
