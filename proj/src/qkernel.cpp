#include "delaykit/qkernel.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace delaykit {

namespace {

double binomial(int k, int l) {
  double b = 1.0;
  for (int i = 1; i <= l; ++i) b = b * (k - l + i) / i;
  return b;
}

}  // namespace

QTable QTable::build(const Matrix& a0, const Matrix& a1, int max_power, int max_delay) {
  if (a0.dim() != a1.dim()) throw std::invalid_argument("QTable::build: dimension mismatch");
  if (max_power < 0 || max_delay < 0) {
    throw std::invalid_argument("QTable::build: negative table extent");
  }
  QTable t;
  t.a0_ = a0;
  t.a1_ = a1;
  t.zero_ = Matrix::zero(a0.dim());
  t.max_power_ = max_power;
  t.max_delay_ = max_delay;
  const int cols = max_delay + 1;
  t.entries_.assign(static_cast<std::size_t>(max_power + 1) * cols, t.zero_);

  auto at = [&](int k, int l) -> Matrix& {
    return t.entries_[static_cast<std::size_t>(k) * cols + l];
  };

  at(0, 0) = Matrix::identity(a0.dim());
  for (int k = 1; k <= max_power; ++k) {
    const int l_hi = std::min(k, max_delay);
    for (int l = 0; l <= l_hi; ++l) {
      Matrix e = a0 * at(k - 1, l);
      if (l >= 1) e += a1 * at(k - 1, l - 1);
      at(k, l) = std::move(e);
    }
  }
  return t;
}

const Matrix& QTable::entry(int k, int l) const {
  if (k < 0 || k > max_power_ || l < 0) {
    throw std::invalid_argument("QTable::entry: index out of range");
  }
  if (l > k || l > max_delay_) return zero_;
  return entries_[static_cast<std::size_t>(k) * (max_delay_ + 1) + l];
}

Matrix commuting_entry(const Matrix& a0, const Matrix& a1, int k, int l) {
  if (a0.dim() != a1.dim()) throw std::invalid_argument("commuting_entry: dimension mismatch");
  if (k < 0 || l < 0) throw std::invalid_argument("commuting_entry: negative index");
  if (l > k) return Matrix::zero(a0.dim());
  return binomial(k, l) * (mpow(a0, k - l) * mpow(a1, l));
}

}  // namespace delaykit
