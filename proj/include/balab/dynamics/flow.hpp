#pragma once

// The diagonal flow g_t = exp(tX), X = diag(1/m, ..., 1/m, -1/n, ..., -1/n),
// on free lattices in R^{m+n}, and the affine lattice attached to <A, b>:
//
//   L~_{A,b} : v -> (I_m A; 0 I_n) v + (b, 0).
//
// Conjugation by g_t scales A by e^{(1/m+1/n)t} and b by e^{t/m}; the maps
// L~_{A,b} form an abelian group (the expanding horospherical subgroup).

#include <cmath>
#include <string>
#include <vector>

#include "balab/forms/system.hpp"

namespace balab {

class FlowSpec {
 public:
  FlowSpec(std::size_t m, std::size_t n) : m_(m), n_(n) {
    if (m == 0 || n == 0) throw DimensionError("flow needs m >= 1 and n >= 1");
  }
  explicit FlowSpec(const AffineSystem& sys) : FlowSpec(sys.m(), sys.n()) {}

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return m_ + n_; }

  Rational expand_rate() const { return Rational(1, m_); }
  Rational contract_rate() const { return Rational(1, n_); }
  /// Expansion rate of the A-block under conjugation, 1/m + 1/n.
  Rational matrix_rate() const { return expand_rate() + contract_rate(); }
  /// Trace of ad X on the horospherical algebra: mn(1/m + 1/n) + m(1/m).
  Rational chi() const { return Rational(m_ * n_) * matrix_rate() + Rational(m_) * expand_rate(); }
  /// Slowest expansion eigenvalue on the horospherical algebra.
  Rational lambda() const { return std::min(expand_rate(), matrix_rate()); }
  /// Dimension mn + m of the horospherical group.
  std::size_t horospherical_dim() const noexcept { return m_ * n_ + m_; }

  double expand(double t) const { return std::exp(t / static_cast<double>(m_)); }
  double contract(double t) const { return std::exp(-t / static_cast<double>(n_)); }

 private:
  std::size_t m_, n_;
};

/// diag(e^{t/m} I_m, e^{-t/n} I_n).
inline Matrix<double> flow_matrix(const FlowSpec& fs, double t) {
  Matrix<double> g(fs.dim(), fs.dim(), 0.0);
  for (std::size_t i = 0; i < fs.m(); ++i) g(i, i) = fs.expand(t);
  for (std::size_t j = 0; j < fs.n(); ++j) g(fs.m() + j, fs.m() + j) = fs.contract(t);
  return g;
}

/// Exact or floating determinant by Gaussian elimination.
inline Scalar determinant(const Matrix<Scalar>& a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant of a non-square matrix");
  Matrix<Scalar> w = a;
  const std::size_t k = w.rows();
  Scalar det(1);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c; r < k; ++r)
      if (w(r, c).abs() > w(piv, c).abs()) piv = r;
    if (w(piv, c).is_zero()) return all_exact(a.data()) ? Scalar(0) : Scalar(0.0);
    if (piv != c) {
      for (std::size_t j = 0; j < k; ++j) std::swap(w(c, j), w(piv, j));
      det = -det;
    }
    det *= w(c, c);
    for (std::size_t r = c + 1; r < k; ++r) {
      if (w(r, c).is_zero()) continue;
      const Scalar f = w(r, c) / w(c, c);
      for (std::size_t j = c; j < k; ++j) w(r, j) -= f * w(c, j);
    }
  }
  return det;
}

/// Free unimodular lattice {basis * v + translation : v in Z^{m+n}}, also
/// read as the affine map v -> basis * v + translation.
class AffineLatticeState {
 public:
  AffineLatticeState(Matrix<Scalar> basis, Vector translation)
      : basis_(std::move(basis)), translation_(std::move(translation)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() != translation_.size())
      throw DimensionError("affine lattice needs a square basis matching the translation length");
    const Scalar det = determinant(basis_);
    const bool ok = det.is_exact() ? det == Scalar(1) : std::fabs(det.to_double() - 1.0) <= 1e-9;
    if (!ok) throw ParameterError("lattice basis has determinant " + det.str() + ", expected 1");
  }

  const Matrix<Scalar>& basis() const noexcept { return basis_; }
  const Vector& translation() const noexcept { return translation_; }

  Vector apply(std::span<const Scalar> v) const {
    Vector out = multiply(basis_, v);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += translation_[i];
    return out;
  }

  /// (this o other)(v) = this(other(v)).
  AffineLatticeState compose(const AffineLatticeState& other) const {
    Matrix<Scalar> b = basis_ * other.basis_;
    Vector w = multiply(basis_, other.translation_);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += translation_[i];
    return AffineLatticeState(std::move(b), std::move(w));
  }

  friend bool operator==(const AffineLatticeState&, const AffineLatticeState&) = default;

 private:
  Matrix<Scalar> basis_;
  Vector translation_;
};

inline AffineLatticeState l_tilde(const AffineSystem& sys) {
  const std::size_t m = sys.m(), n = sys.n(), k = m + n;
  const bool exact = sys.is_exact();
  const Scalar one = exact ? Scalar(1) : Scalar(1.0);
  const Scalar zero = exact ? Scalar(0) : Scalar(0.0);
  Matrix<Scalar> basis(k, k, zero);
  for (std::size_t i = 0; i < k; ++i) basis(i, i) = one;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) basis(i, m + j) = sys.a()(i, j);
  Vector w(k, zero);
  for (std::size_t i = 0; i < m; ++i) w[i] = sys.b()[i];
  return AffineLatticeState(std::move(basis), std::move(w));
}

/// <A', b'> with g_t L~_{A,b} g_{-t} = L~_{A',b'}. Exact at t = 0.
inline AffineSystem conjugate_flow(const FlowSpec& fs, const AffineSystem& sys, double t) {
  if (fs.m() != sys.m() || fs.n() != sys.n()) throw DimensionError("flow and system dimensions differ");
  if (t == 0.0) return sys;
  const Scalar a_scale(std::exp(to_double(fs.matrix_rate()) * t));
  const Scalar b_scale(fs.expand(t));
  std::vector<Scalar> a;
  for (const auto& x : sys.a().data()) a.push_back(a_scale * x);
  Vector b;
  for (const auto& x : sys.b()) b.push_back(b_scale * x);
  return AffineSystem(sys.m(), sys.n(), std::move(a), std::move(b));
}

/// g_t L~ (p, q) = (e^{t/m}(Aq + b + p), e^{-t/n} q).
inline std::vector<double> vector_image(const FlowSpec& fs, const AffineSystem& sys, const IntegerCandidate& v,
                                        double t) {
  if (fs.m() != sys.m() || fs.n() != sys.n()) throw DimensionError("flow and system dimensions differ");
  const Vector r = sys.residual(v.p, v.q);
  std::vector<double> out;
  out.reserve(fs.dim());
  const double up = fs.expand(t), down = fs.contract(t);
  for (const auto& x : r) out.push_back(up * x.to_double());
  for (const auto& x : v.q) out.push_back(down * x.convert_to<double>());
  return out;
}

inline double sup_norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

}  // namespace balab
