#pragma once

// Exact classification of systems of affine forms.
//
//  * rational:  A q0 + b + p0 = 0 has an integer solution (p0, q0);
//               then the constant of <A, b> equals that of A.
//  * Kronecker: some u in Z^m has A^T u in Z^n but b^T u not in Z;
//               then |Aq + b + p| is bounded below and the constant is +inf.
//
// Both cases are mutually exclusive: a rational b gives b^T u in Z
// whenever A^T u is integral.

#include <optional>
#include <string>
#include <vector>

#include "balab/core/hnf.hpp"
#include "balab/forms/system.hpp"

namespace balab {

namespace detail {

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

inline Integer common_denominator(std::span<const Scalar> xs) {
  Integer d = 1;
  for (const auto& x : xs) d = lcm(d, boost::multiprecision::denominator(x.rational()));
  return d;
}

inline Integer scaled(const Scalar& x, const Integer& d) {
  const Rational r = x.rational() * Rational(d);
  return boost::multiprecision::numerator(r);
}

inline bool is_integral(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

inline Rational dist_to_integer(const Rational& r) {
  const Rational frac = r - Rational(floor(r));
  return frac <= Rational(1, 2) ? frac : Rational(1 - frac);
}

}  // namespace detail

/// Integer (p0, q0) with A q0 + b + p0 = 0, or nullopt for irrational systems.
inline std::optional<IntegerCandidate> rationality_witness(const AffineSystem& sys) {
  sys.require_exact("rationality_witness");
  const std::size_t m = sys.m(), n = sys.n();

  if (std::all_of(sys.b().begin(), sys.b().end(), [](const Scalar& x) { return detail::is_integral(x.rational()); })) {
    IntegerCandidate w{IntVector(m), IntVector(n, Integer(0))};
    for (std::size_t i = 0; i < m; ++i) w.p[i] = -boost::multiprecision::numerator(sys.b()[i].rational());
    return w;
  }

  // Row i scaled by the lcm of its denominators; unknowns ordered (q, p).
  IntMatrix mat(m, n + m, Integer(0));
  IntVector rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    Vector row(sys.a().row(i).begin(), sys.a().row(i).end());
    row.push_back(sys.b()[i]);
    const Integer d = detail::common_denominator(row);
    for (std::size_t j = 0; j < n; ++j) mat(i, j) = detail::scaled(sys.a()(i, j), d);
    mat(i, n + i) = d;
    rhs[i] = -detail::scaled(sys.b()[i], d);
  }
  const auto sol = hnf_solve(mat, rhs);
  if (!sol) return std::nullopt;
  IntegerCandidate w;
  w.q.assign(sol->particular.begin(), sol->particular.begin() + static_cast<std::ptrdiff_t>(n));
  w.p.assign(sol->particular.begin() + static_cast<std::ptrdiff_t>(n), sol->particular.end());
  return w;
}

/// Basis of the full-rank subgroup {u in Z^m : A^T u in Z^n}.
inline std::vector<IntVector> integral_dual_basis(const AffineSystem& sys) {
  sys.require_exact("integral_dual_basis");
  const std::size_t m = sys.m(), n = sys.n();
  // Row j: D_j * (A^T u)_j - D_j z_j = 0 with unknowns (u, z).
  IntMatrix mat(n, m + n, Integer(0));
  for (std::size_t j = 0; j < n; ++j) {
    Vector column;
    for (std::size_t i = 0; i < m; ++i) column.push_back(sys.a()(i, j));
    const Integer d = detail::common_denominator(column);
    for (std::size_t i = 0; i < m; ++i) mat(j, i) = detail::scaled(sys.a()(i, j), d);
    mat(j, m + j) = -d;
  }
  const auto sol = hnf_solve(mat, IntVector(n, Integer(0)));
  std::vector<IntVector> basis;
  for (const auto& k : sol->kernel) {
    IntVector u(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(m));
    const auto lead = std::find_if(u.begin(), u.end(), [](const Integer& x) { return x != 0; });
    if (lead != u.end() && *lead < 0)
      for (auto& x : u) x = -x;
    basis.push_back(std::move(u));
  }
  return basis;
}

inline Rational dot(std::span<const Scalar> b, std::span<const Integer> u) {
  Rational s = 0;
  for (std::size_t i = 0; i < b.size(); ++i) s += b[i].rational() * Rational(u[i]);
  return s;
}

/// Lower bound on |Aq + b + p| (sup norm) certified by u:
/// |u^T (Aq + b + p)| >= dist(b^T u, Z) and |u^T x| <= |u|_1 |x|.
inline Rational kronecker_epsilon(const AffineSystem& sys, std::span<const Integer> u) {
  const Integer l1 = l1_norm(u);
  if (l1 == 0) return 0;
  return Rational(detail::dist_to_integer(dot(sys.b(), u))) / Rational(l1);
}

/// u in Z^m with A^T u integral and b^T u not, or nullopt. Among the basis
/// vectors that qualify, the one with the largest certified epsilon wins.
inline std::optional<IntVector> kronecker_witness(const AffineSystem& sys) {
  sys.require_exact("kronecker_witness");
  std::optional<IntVector> best;
  Rational best_eps = 0;
  for (auto& u : integral_dual_basis(sys)) {
    if (detail::is_integral(dot(sys.b(), u))) continue;
    const Rational eps = kronecker_epsilon(sys, u);
    if (!best || eps > best_eps) {
      best_eps = eps;
      best = std::move(u);
    }
  }
  return best;
}

enum class ClassificationKind { Rational, KroneckerInfinite, NeedsNumeric };

inline const char* to_string(ClassificationKind k) {
  switch (k) {
    case ClassificationKind::Rational: return "Rational";
    case ClassificationKind::KroneckerInfinite: return "KroneckerInfinite";
    case ClassificationKind::NeedsNumeric: return "NeedsNumeric";
  }
  return "?";
}

struct Classification {
  ClassificationKind kind = ClassificationKind::NeedsNumeric;
  std::optional<IntegerCandidate> rational_witness;  // set iff kind == Rational
  std::optional<IntVector> kronecker_u;              // set iff kind == KroneckerInfinite
  std::optional<Rational> epsilon;                   // Kronecker lower bound on |Aq+b+p|
  std::string note;
};

inline Classification classify(const AffineSystem& sys) {
  sys.require_exact("classify");
  Classification c;
  if (auto w = rationality_witness(sys)) {
    c.kind = ClassificationKind::Rational;
    c.rational_witness = std::move(w);
    c.note = "rational system: badly approximable iff the homogeneous part A is";
    return c;
  }
  if (auto u = kronecker_witness(sys)) {
    c.kind = ClassificationKind::KroneckerInfinite;
    c.epsilon = kronecker_epsilon(sys, *u);
    c.kronecker_u = std::move(u);
    c.note = "|Aq+b+p| >= epsilon for all integer p, q; the constant is +infinity";
    return c;
  }
  c.note = "irrational with no Kronecker obstruction; estimate the constant numerically";
  return c;
}

}  // namespace balab
