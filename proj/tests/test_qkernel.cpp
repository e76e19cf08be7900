#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "delaykit/qkernel.hpp"
#include "oracles.hpp"

using namespace delaykit;
using namespace delaykit::testing;

namespace {

double binom(int k, int l) {
  double b = 1.0;
  for (int i = 1; i <= l; ++i) b = b * (k - l + i) / i;
  return b;
}

}  // namespace

TEST_CASE("table entries match the worked low-order values") {
  std::mt19937 rng(11);
  const Matrix a0 = rand_matrix(rng, 3, -1.0, 1.0);
  const Matrix a1 = rand_matrix(rng, 3, -1.0, 1.0);
  const QTable q = QTable::build(a0, a1, 3, 3);

  CHECK(max_abs_diff(q.entry(0, 0), Matrix::identity(3)) == 0.0);
  CHECK(max_abs_diff(q.entry(1, 0), a0) == 0.0);
  CHECK(max_abs_diff(q.entry(1, 1), a1) == 0.0);
  CHECK(max_abs_diff(q.entry(2, 1), a0 * a1 + a1 * a0) <= 1e-15);
  CHECK(max_abs_diff(q.entry(2, 2), a1 * a1) <= 1e-15);
  CHECK(max_abs_diff(q.entry(3, 2), a0 * (a1 * a1) + a1 * (a0 * a1 + a1 * a0)) <= 1e-14);
  CHECK(max_abs(q.entry(1, 2)) == 0.0);  // strict lower triangularity
  CHECK(max_abs(q.entry(0, 3)) == 0.0);
}

TEST_CASE("recursion-built table equals the definitional sum") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    const int dim = 2 + trial % 3;
    const Matrix a0 = rand_matrix(rng, dim, -1.0, 1.0);
    const Matrix a1 = rand_matrix(rng, dim, -1.0, 1.0);
    const QTable q = QTable::build(a0, a1, 6, 6);
    for (int k = 0; k <= 6; ++k)
      for (int l = 0; l <= k; ++l)
        CHECK(max_abs_diff(q.entry(k, l), q_definitional(a0, a1, k, l)) <= 1e-12);
  }
}

TEST_CASE("column zero holds the plain powers of A0") {
  std::mt19937 rng(31);
  const Matrix a0 = rand_matrix(rng, 4, -1.0, 1.0);
  const Matrix a1 = rand_matrix(rng, 4, -1.0, 1.0);
  const QTable q = QTable::build(a0, a1, 8, 4);
  for (int k = 0; k <= 8; ++k) CHECK(max_abs_diff(q.entry(k, 0), mpow(a0, k)) <= 1e-12);
}

TEST_CASE("commuting pairs collapse to the binomial closed form") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    const Matrix a0 = rand_matrix_opnorm(rng, 3, 0.9);
    const Matrix a1 = rand_commuting_partner(rng, a0, 0.9);
    const QTable q = QTable::build(a0, a1, 8, 8);
    for (int k = 0; k <= 8; ++k)
      for (int l = 0; l <= k; ++l)
        CHECK(max_abs_diff(q.entry(k, l), commuting_entry(a0, a1, k, l)) <= 1e-12);
  }
}

TEST_CASE("row sums reproduce powers of the summed pair") {
  std::mt19937 rng(51);
  const Matrix a0 = rand_matrix(rng, 3, -1.0, 1.0);
  const Matrix a1 = rand_matrix(rng, 3, -1.0, 1.0);
  const QTable q = QTable::build(a0, a1, 8, 8);
  for (int k = 0; k <= 8; ++k) {
    Matrix sum = Matrix::zero(3);
    for (int l = 0; l <= k; ++l) sum += q.entry(k, l);
    CHECK(max_abs_diff(sum, mpow(a0 + a1, k)) <= 1e-10);
  }
}

TEST_CASE("entry norms obey the binomial bound") {
  std::mt19937 rng(61);
  const Matrix a0 = rand_matrix(rng, 3, -1.0, 1.0);
  const Matrix a1 = rand_matrix(rng, 3, -1.0, 1.0);
  const double n0 = opnorm(a0), n1 = opnorm(a1);
  const QTable q = QTable::build(a0, a1, 10, 10);
  for (int k = 0; k <= 10; ++k)
    for (int l = 0; l <= k; ++l) {
      const double bound = binom(k, l) * std::pow(n0, k - l) * std::pow(n1, l);
      CHECK(opnorm(q.entry(k, l)) <= bound * (1.0 + 1e-12) + 1e-14);
    }
}

TEST_CASE("commuting closed form handles the edge exponents") {
  std::mt19937 rng(71);
  const Matrix a0 = rand_matrix(rng, 3, -1.0, 1.0);
  const Matrix a1 = rand_matrix(rng, 3, -1.0, 1.0);
  for (int k = 0; k <= 5; ++k) {
    CHECK(max_abs_diff(commuting_entry(a0, a1, k, 0), mpow(a0, k)) == 0.0);
    CHECK(max_abs_diff(commuting_entry(Matrix::zero(3), a1, k, k), mpow(a1, k)) == 0.0);
  }
  const Matrix i2 = Matrix::identity(2);
  CHECK(max_abs_diff(commuting_entry(i2, -1.0 * i2, 2, 1), -2.0 * i2) == 0.0);
  CHECK(max_abs(commuting_entry(i2, i2, 1, 2)) == 0.0);  // l > k convention
}

TEST_CASE("build rejects bad extents and mismatched dimensions") {
  const Matrix a = Matrix::identity(2);
  CHECK_THROWS_AS(QTable::build(a, Matrix::identity(3), 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(QTable::build(a, a, -1, 2), std::invalid_argument);
  CHECK_THROWS_AS(QTable::build(a, a, 2, -1), std::invalid_argument);
  const QTable q = QTable::build(a, a, 2, 2);
  CHECK_THROWS_AS(q.entry(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(q.entry(-1, 0), std::invalid_argument);
}
