#include "delaykit/matrix.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace delaykit {

namespace {

void require_finite(const Eigen::VectorXd& v) {
  if (!v.allFinite()) {
    throw std::invalid_argument("Vector: non-finite entry");
  }
}

void require_finite_square(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("Matrix: not square");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("Matrix: non-finite entry");
  }
}

}  // namespace

Vector::Vector(Eigen::VectorXd v) : v_(std::move(v)) { require_finite(v_); }

Vector Vector::zero(int dim) {
  if (dim <= 0) throw std::invalid_argument("Vector::zero: dim must be positive");
  return unchecked(Eigen::VectorXd::Zero(dim));
}

Vector Vector::from(std::initializer_list<double> entries) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (double x : entries) v(i++) = x;
  return Vector(std::move(v));
}

Vector Vector::from(std::span<const double> entries) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  return Vector(std::move(v));
}

Vector Vector::unchecked(Eigen::VectorXd v) {
  Vector out;
  out.v_ = std::move(v);
  return out;
}

Vector& Vector::operator+=(const Vector& o) {
  v_ += o.v_;
  return *this;
}

Vector& Vector::operator*=(double s) {
  v_ *= s;
  return *this;
}

Vector operator-(const Vector& a, const Vector& b) { return Vector::unchecked(a.v_ - b.v_); }
Vector operator*(double s, const Vector& a) { return Vector::unchecked(s * a.v_); }
Vector operator-(const Vector& a) { return Vector::unchecked(-a.v_); }

Matrix::Matrix(Eigen::MatrixXd m) : m_(std::move(m)) { require_finite_square(m_); }

Matrix Matrix::zero(int dim) {
  if (dim <= 0) throw std::invalid_argument("Matrix::zero: dim must be positive");
  return unchecked(Eigen::MatrixXd::Zero(dim, dim));
}

Matrix Matrix::identity(int dim) {
  if (dim <= 0) throw std::invalid_argument("Matrix::identity: dim must be positive");
  return unchecked(Eigen::MatrixXd::Identity(dim, dim));
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw std::invalid_argument("Matrix::from_rows: ragged rows");
    }
    Eigen::Index c = 0;
    for (double x : row) m(r, c++) = x;
    ++r;
  }
  return Matrix(std::move(m));
}

Matrix Matrix::from_flat(int dim, std::span<const double> data) {
  if (dim <= 0 || data.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("Matrix::from_flat: size mismatch");
  }
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = data[static_cast<std::size_t>(r) * dim + c];
  return Matrix(std::move(m));
}

Matrix Matrix::unchecked(Eigen::MatrixXd m) {
  Matrix out;
  out.m_ = std::move(m);
  return out;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  m_ += o.m_;
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  m_ -= o.m_;
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

Matrix operator-(const Matrix& a) { return Matrix::unchecked(-a.m_); }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Matrix multiply: dimension mismatch");
  return Matrix::unchecked(a.m_ * b.m_);
}

Matrix operator*(double s, const Matrix& a) { return Matrix::unchecked(s * a.m_); }

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.dim() != v.dim()) throw std::invalid_argument("Matrix*Vector: dimension mismatch");
  return Vector::unchecked(a.m_ * v.raw());
}

Matrix expm(const Matrix& a, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("expm: non-finite time");
  if (t == 0.0) return Matrix::identity(a.dim());
  Eigen::MatrixXd at = a.raw() * t;
  return Matrix::unchecked(at.exp());
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("commutator: dimension mismatch");
  return Matrix::unchecked(a.raw() * b.raw() - b.raw() * a.raw());
}

double opnorm(const Matrix& a) {
  if (a.dim() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.raw());
  return svd.singularValues()(0);
}

Matrix mpow(const Matrix& a, int k) {
  if (k < 0) throw std::invalid_argument("mpow: negative power");
  Matrix out = Matrix::identity(a.dim());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

Matrix solve(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("solve: dimension mismatch");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a.raw());
  if (!lu.isInvertible()) throw std::invalid_argument("solve: singular matrix");
  return Matrix::unchecked(lu.solve(b.raw()));
}

double max_abs(double x) { return std::abs(x); }
double max_abs(const Vector& v) { return v.raw().cwiseAbs().maxCoeff(); }
double max_abs(const Matrix& m) { return m.raw().cwiseAbs().maxCoeff(); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a.raw() - b.raw()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const Vector& a, const Vector& b) {
  return (a.raw() - b.raw()).cwiseAbs().maxCoeff();
}

}  // namespace delaykit
