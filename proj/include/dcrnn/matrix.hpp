#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "dcrnn/errors.hpp"

namespace dcrnn {

// Dense real matrix, row-major, 64-bit entries.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t m) {
    Matrix eye(m, m);
    for (std::size_t i = 0; i < m; ++i) eye(i, i) = 1.0;
    return eye;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix out(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw DimensionError("ragged initializer rows");
      std::size_t j = 0;
      for (double v : row) out(i, j++) = v;
      ++i;
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& other) {
    if (!same_shape(other)) throw DimensionError("matrix add: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  Matrix& operator-=(const Matrix& other) {
    if (!same_shape(other)) throw DimensionError("matrix sub: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
  }

  Matrix& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  double frobenius_norm() const {
    double acc = 0.0;
    for (double v : data_) acc += v * v;
    return std::sqrt(acc);
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
inline Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
inline Matrix operator*(Matrix a, double s) { return a *= s; }
inline Matrix operator*(double s, Matrix a) { return a *= s; }

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix mul: inner dims differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t kk = 0; kk < a.cols(); ++kk) {
      const double aik = a(i, kk);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(kk, j);
    }
  }
  return out;
}

inline std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("matvec: size mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

// y += A x, no allocation.
inline void matvec_add(const Matrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * x[j];
    y[i] += acc;
  }
}

// y += A^T x, no allocation.
inline void matvec_transpose_add(const Matrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) y[j] += r[j] * xi;
  }
}

// Determinant by LU with partial pivoting.
inline double determinant(Matrix a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant: matrix not square");
  const std::size_t m = a.rows();
  double det = 1.0;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t i = col + 1; i < m; ++i)
      if (std::fabs(a(i, col)) > std::fabs(a(pivot, col))) pivot = i;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t j = 0; j < m; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t i = col + 1; i < m; ++i) {
      const double f = a(i, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < m; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

// Largest singular value via power iteration on A^T A.
inline double spectral_norm(const Matrix& a, double tol = 1e-10, std::size_t max_iter = 20000) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const std::size_t n = a.cols();
  std::vector<double> v(n);
  // Fixed deterministic start vector, nonzero in every component.
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i + 1));
  double vnorm = 0.0;
  for (double x : v) vnorm += x * x;
  vnorm = std::sqrt(vnorm);
  for (double& x : v) x /= vnorm;

  double sigma_sq = 0.0;
  std::vector<double> av(a.rows()), atav(n);
  for (std::size_t it = 0; it < max_iter; ++it) {
    std::fill(av.begin(), av.end(), 0.0);
    matvec_add(a, v, av);
    std::fill(atav.begin(), atav.end(), 0.0);
    matvec_transpose_add(a, av, atav);
    // Rayleigh quotient (v is unit) and eigen-residual for A^T A.
    sigma_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) sigma_sq += v[i] * atav[i];
    double resid = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = atav[i] - sigma_sq * v[i];
      resid += r * r;
      norm += atav[i] * atav[i];
    }
    resid = std::sqrt(resid);
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    if (resid <= tol * std::max(1.0, norm)) return std::sqrt(std::max(0.0, sigma_sq));
    for (std::size_t i = 0; i < n; ++i) v[i] = atav[i] / norm;
  }
  return std::sqrt(std::max(0.0, sigma_sq));
}

}  // namespace dcrnn
