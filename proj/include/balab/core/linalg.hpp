#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "balab/core/errors.hpp"
#include "balab/core/scalar.hpp"

namespace balab {

using Vector = std::vector<Scalar>;
using IntVector = std::vector<Integer>;

/// Dense row-major matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> row_major)
      : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows_ * cols_)
      throw DimensionError("matrix needs " + std::to_string(rows_ * cols_) + " entries, got " +
                           std::to_string(data_.size()));
  }

  static Matrix identity(std::size_t n) {
    Matrix id(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) id(i, i) = T(1);
    return id;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<T>& data() const noexcept { return data_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
  Matrix<T> c(a.rows(), b.cols(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = c(i, j) + a(i, k) * b(k, j);
  return c;
}

template <typename T, typename U>
std::vector<T> multiply(const Matrix<T>& a, std::span<const U> x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector shape mismatch");
  std::vector<T> y(a.rows(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] = y[i] + a(i, j) * T(x[j]);
  return y;
}

template <typename T, typename U>
std::vector<T> multiply(const Matrix<T>& a, const std::vector<U>& x) {
  return multiply<T, U>(a, std::span<const U>(x));
}

inline Vector to_scalars(std::span<const Integer> v) { return Vector(v.begin(), v.end()); }

inline std::vector<double> to_doubles(std::span<const Scalar> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.to_double());
  return out;
}

inline bool all_exact(std::span<const Scalar> v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return x.is_exact(); });
}

/// max_i |v_i|; exact when every entry is exact.
inline Scalar sup_norm(std::span<const Scalar> v) {
  if (v.empty()) throw DimensionError("sup_norm of an empty vector");
  Scalar best = v.front().abs();
  for (const auto& x : v.subspan(1)) {
    Scalar a = x.abs();
    if (a > best) best = std::move(a);
  }
  if (!all_exact(v)) return Scalar(best.to_double());
  return best;
}

inline Integer sup_norm(std::span<const Integer> v) {
  if (v.empty()) throw DimensionError("sup_norm of an empty vector");
  Integer best = 0;
  for (const auto& x : v) best = std::max<Integer>(best, boost::multiprecision::abs(x));
  return best;
}

inline Integer l1_norm(std::span<const Integer> v) {
  Integer total = 0;
  for (const auto& x : v) total += boost::multiprecision::abs(x);
  return total;
}

/// Nearest integer with halves broken so the residual x - round(x) is +1/2.
inline Integer round_half_down(const Scalar& x) {
  if (x.is_exact()) return ceil(Rational(x.rational() - Rational(1, 2)));
  return Integer(std::ceil(x.to_double() - 0.5));
}

struct IntegerDistance {
  Scalar distance;  // min over integer p of sup_norm(x + p)
  IntVector p;      // a minimizing p, p_i = -round(x_i)
};

inline IntegerDistance dist_to_integers(std::span<const Scalar> x) {
  if (x.empty()) throw DimensionError("dist_to_integers of an empty vector");
  IntegerDistance out;
  out.p.reserve(x.size());
  Vector residual;
  residual.reserve(x.size());
  for (const auto& xi : x) {
    Integer p = -round_half_down(xi);
    residual.push_back(xi + Scalar(p));
    out.p.push_back(std::move(p));
  }
  out.distance = sup_norm(residual);
  return out;
}

inline IntegerDistance dist_to_integers(const Vector& x) {
  return dist_to_integers(std::span<const Scalar>(x));
}

}  // namespace balab
