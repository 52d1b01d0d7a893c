#include "gupchain/summation.hpp"

#include <cmath>

namespace gupchain {

namespace {

// Knuth's TwoSum: hi + lo == a + b exactly.
struct Split {
  double hi;
  double lo;
};

Split two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

}  // namespace

void PairwiseSum::add(double value) noexcept {
  abs_sum_ += std::abs(value);
  double hi = value;
  double lo = 0.0;
  std::size_t level = 0;
  // Each set low bit of count_ holds a completed block of 2^level terms that
  // pairs with the incoming block. Rounding errors of every pairing are
  // carried along in the low word.
  while ((count_ >> level) & 1U) {
    const auto s = two_sum(partial_[level], hi);
    hi = s.hi;
    lo = partial_lo_[level] + lo + s.lo;
    ++level;
  }
  partial_[level] = hi;
  partial_lo_[level] = lo;
  ++count_;
}

double PairwiseSum::value() const noexcept {
  double hi = 0.0;
  double lo = 0.0;
  for (std::size_t level = 0; level < partial_.size(); ++level) {
    if ((count_ >> level) & 1U) {
      const auto s = two_sum(partial_[level], hi);
      hi = s.hi;
      lo += partial_lo_[level] + s.lo;
    }
  }
  return hi + lo;
}

double pairwise_sum(std::span<const double> values) noexcept {
  PairwiseSum sum;
  for (double v : values) sum.add(v);
  return sum.value();
}

}  // namespace gupchain
