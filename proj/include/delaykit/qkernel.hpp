#pragma once

#include <vector>

#include "delaykit/matrix.hpp"

namespace delaykit {

/// Lower-triangular operator family Q_{k+1}(l*tau) generated by a pair of
/// square matrices. Entry (k, l) multiplies (t - l*tau)^k / k! in the series
/// expansion of the delayed matrix exponential:
///
///   Q_{k+1}(0)     = A0^k
///   Q_{k+1}(l*tau) = A0 * Q_k(l*tau) + A1 * Q_k((l-1)*tau)
///   Q_{k+1}(l*tau) = 0   for l > k
///
/// The delay tau never enters the numeric values; it is only a label on the
/// second index. Immutable after build; safe to share across threads.
class QTable {
 public:
  /// Fills the table for 0 <= k <= max_power, 0 <= l <= min(k, max_delay)
  /// using the Pascal-style recursion above (cost O(max_power * max_delay)
  /// matrix multiplies).
  static QTable build(const Matrix& a0, const Matrix& a1, int max_power, int max_delay);

  /// Q_{k+1}(l*tau). Returns the zero matrix for l > min(k, max_delay);
  /// requires 0 <= k <= max_power.
  const Matrix& entry(int k, int l) const;

  int max_power() const { return max_power_; }
  int max_delay() const { return max_delay_; }
  int dim() const { return zero_.dim(); }
  const Matrix& a0() const { return a0_; }
  const Matrix& a1() const { return a1_; }

 private:
  QTable() = default;

  Matrix a0_, a1_, zero_;
  int max_power_ = 0;
  int max_delay_ = 0;
  std::vector<Matrix> entries_;  // (k, l) at k * (max_delay_ + 1) + l
};

/// Closed form binom(k, l) * A0^(k-l) * A1^l, valid when A0 and A1 commute.
/// Returns the zero matrix for l > k, matching the table's triangular shape.
Matrix commuting_entry(const Matrix& a0, const Matrix& a1, int k, int l);

}  // namespace delaykit
