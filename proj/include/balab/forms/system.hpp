#pragma once

#include <span>
#include <string>
#include <utility>

#include "balab/core/linalg.hpp"

namespace balab {

/// m affine forms in n variables: q -> A q + b, with A m x n and b in R^m.
class AffineSystem {
 public:
  AffineSystem(Matrix<Scalar> a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() == 0 || a_.cols() == 0) throw DimensionError("affine system needs m >= 1 and n >= 1");
    if (b_.size() != a_.rows())
      throw DimensionError("b has length " + std::to_string(b_.size()) + " but A has " +
                           std::to_string(a_.rows()) + " rows");
  }

  /// Row-major entries of A.
  AffineSystem(std::size_t m, std::size_t n, std::vector<Scalar> a_entries, Vector b)
      : AffineSystem(Matrix<Scalar>(m, n, std::move(a_entries)), std::move(b)) {}

  /// Homogeneous system (b = 0).
  static AffineSystem homogeneous(Matrix<Scalar> a) {
    Vector zero(a.rows(), Scalar(0));
    return AffineSystem(std::move(a), std::move(zero));
  }

  std::size_t m() const noexcept { return a_.rows(); }
  std::size_t n() const noexcept { return a_.cols(); }
  const Matrix<Scalar>& a() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }

  bool is_exact() const { return all_exact(a_.data()) && all_exact(b_); }

  void require_exact(const char* operation) const {
    if (!is_exact())
      throw ExactnessError(std::string(operation) + " requires exact rational entries (system has Float64 entries)");
  }

  /// A q + b.
  Vector apply(std::span<const Integer> q) const {
    if (q.size() != n())
      throw DimensionError("q has length " + std::to_string(q.size()) + ", expected n = " + std::to_string(n()));
    Vector x = b_;
    for (std::size_t i = 0; i < m(); ++i)
      for (std::size_t j = 0; j < n(); ++j)
        if (q[j] != 0) x[i] += a_(i, j) * Scalar(q[j]);
    return x;
  }

  /// A q + b + p.
  Vector residual(std::span<const Integer> p, std::span<const Integer> q) const {
    if (p.size() != m())
      throw DimensionError("p has length " + std::to_string(p.size()) + ", expected m = " + std::to_string(m()));
    Vector x = apply(q);
    for (std::size_t i = 0; i < m(); ++i) x[i] += Scalar(p[i]);
    return x;
  }

  friend bool operator==(const AffineSystem&, const AffineSystem&) = default;

 private:
  Matrix<Scalar> a_;
  Vector b_;
};

/// Integer pair (p, q) entering the product |Aq + b + p|^m |q|^n.
struct IntegerCandidate {
  IntVector p;
  IntVector q;

  friend bool operator==(const IntegerCandidate&, const IntegerCandidate&) = default;
};

}  // namespace balab
