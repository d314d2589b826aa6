#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spectral/error.hpp"

namespace spectral {

/// Row-major dense real matrix. Both dimensions are at least one and every
/// entry supplied at construction must be finite.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_shape();
    data_.assign(rows * cols, 0.0);
  }

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_shape();
    if (data_.size() != rows_ * cols_) {
      throw Error(Errc::InvalidDimensions, "data length " + std::to_string(data_.size()) +
                                               " != " + std::to_string(rows_) + "x" +
                                               std::to_string(cols_));
    }
    for (double x : data_) {
      if (!std::isfinite(x)) throw Error(Errc::NonFiniteEntry, "matrix entry is not finite");
    }
  }

  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : DenseMatrix(flatten(rows)) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix diagonal(std::span<const double> diag) {
    DenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  void set_column(std::size_t j, std::span<const double> values) noexcept {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
  }

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  struct Flat {
    std::size_t rows;
    std::size_t cols;
    std::vector<double> data;
  };

  explicit DenseMatrix(Flat flat) : DenseMatrix(flat.rows, flat.cols, std::move(flat.data)) {}

  static Flat flatten(std::initializer_list<std::initializer_list<double>> rows) {
    Flat f{rows.size(), rows.size() == 0 ? 0 : rows.begin()->size(), {}};
    for (const auto& r : rows) {
      if (r.size() != f.cols) throw Error(Errc::InvalidDimensions, "ragged initializer rows");
      f.data.insert(f.data.end(), r.begin(), r.end());
    }
    return f;
  }

  void check_shape() const {
    if (rows_ == 0 || cols_ == 0) {
      throw Error(Errc::InvalidDimensions, "matrix dimensions must be positive");
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

inline DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(Errc::DimensionMismatch, "inner dimensions differ in product");
  }
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  }
  return c;
}

/// a^T b without forming the transpose.
inline DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(Errc::DimensionMismatch, "row counts differ in transposed product");
  }
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double ali = a(l, i);
      if (ali == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ali * b(l, j);
    }
  }
  return c;
}

inline std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(Errc::DimensionMismatch, "vector length mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::DimensionMismatch, "shape mismatch in subtraction");
  }
  DenseMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

inline double frobenius_norm(const DenseMatrix& m) noexcept {
  double s = 0.0;
  for (double x : m.data()) s += x * x;
  return std::sqrt(s);
}

inline double trace(const DenseMatrix& m) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
  return s;
}

inline double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) noexcept { return std::sqrt(dot(x, x)); }

/// Largest |m(i,j) - m(j,i)|; requires a square matrix.
inline double max_asymmetry(const DenseMatrix& m) noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
  return worst;
}

/// Symmetric within `rel_tol` of the Frobenius norm.
inline bool is_symmetric(const DenseMatrix& m, double rel_tol = 1e-12) noexcept {
  return m.is_square() && max_asymmetry(m) <= rel_tol * frobenius_norm(m);
}

/// Largest |x^T y - delta| over all column pairs of `m`.
inline double orthonormality_error(const DenseMatrix& m) {
  const DenseMatrix g = multiply_at_b(m, m);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

/// Keeps the first `k` columns.
inline DenseMatrix leading_columns(const DenseMatrix& m, std::size_t k) {
  DenseMatrix out(m.rows(), k);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace spectral
