#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <span>
#include <vector>

namespace delaykit {

/// Dense real vector. Public constructors reject non-finite entries.
class Vector {
 public:
  Vector() = default;
  explicit Vector(Eigen::VectorXd v);

  static Vector zero(int dim);
  static Vector from(std::initializer_list<double> entries);
  static Vector from(std::span<const double> entries);
  /// Wraps without the finiteness check; for results of internal arithmetic.
  static Vector unchecked(Eigen::VectorXd v);

  int dim() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_(i); }
  double& operator[](int i) { return v_(i); }
  const Eigen::VectorXd& raw() const { return v_; }

  Vector& operator+=(const Vector& o);
  Vector& operator*=(double s);
  friend Vector operator+(Vector a, const Vector& b) {
    a += b;
    return a;
  }
  friend Vector operator-(const Vector& a, const Vector& b);
  friend Vector operator*(double s, const Vector& a);
  friend Vector operator*(const Vector& a, double s) { return s * a; }
  friend Vector operator-(const Vector& a);

 private:
  Eigen::VectorXd v_;
};

/// Dense real square matrix, value semantics. Public constructors reject
/// non-finite entries; results of arithmetic are not re-validated.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(Eigen::MatrixXd m);

  static Matrix zero(int dim);
  static Matrix identity(int dim);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// Row-major flat data, dim*dim entries.
  static Matrix from_flat(int dim, std::span<const double> data);
  /// Wraps without the square/finiteness checks; for internal arithmetic.
  static Matrix unchecked(Eigen::MatrixXd m);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int r, int c) const { return m_(r, c); }
  double& operator()(int r, int c) { return m_(r, c); }
  const Eigen::MatrixXd& raw() const { return m_; }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix a, const Matrix& b) {
    a += b;
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    a -= b;
    return a;
  }
  friend Matrix operator-(const Matrix& a);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend Matrix operator*(const Matrix& a, double s) { return s * a; }
  friend Vector operator*(const Matrix& a, const Vector& v);

 private:
  Eigen::MatrixXd m_;
};

/// exp(A*t) by scaling-and-squaring with a Pade core. Relative accuracy is
/// at machine-precision level for ||A*t|| up to ~50.
Matrix expm(const Matrix& a, double t = 1.0);

/// A*B - B*A.
Matrix commutator(const Matrix& a, const Matrix& b);

/// Induced 2-norm (largest singular value). This is the norm used by every
/// inequality and bound check in this library.
double opnorm(const Matrix& a);

/// A^k for integer k >= 0 by repeated multiplication.
Matrix mpow(const Matrix& a, int k);

/// Solves A*X = B; throws std::invalid_argument when A is singular.
Matrix solve(const Matrix& a, const Matrix& b);

double max_abs(double x);
double max_abs(const Vector& v);
double max_abs(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(const Vector& a, const Vector& b);

}  // namespace delaykit
