#pragma once

// Integer linear systems M x = c via column Hermite normal form.
//
// Column operations bring M to lower echelon form H = M U with U
// unimodular. Pivot rows determine y in H y = c by forward substitution;
// the trailing zero columns of H give a kernel basis through U.

#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "balab/core/linalg.hpp"

namespace balab {

using IntMatrix = Matrix<Integer>;

/// Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
inline std::tuple<Integer, Integer, Integer> extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b;
  Integer old_s = 1, s = 0;
  Integer old_t = 0, t = 1;
  while (r != 0) {
    const Integer q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

struct ColumnHermiteForm {
  IntMatrix h;          // lower echelon, h = m * u
  IntMatrix u;          // unimodular column transform
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col), cols are 0..rank-1
  std::size_t rank() const noexcept { return pivots.size(); }
};

inline ColumnHermiteForm column_hermite_form(const IntMatrix& m) {
  ColumnHermiteForm f{m, IntMatrix::identity(m.cols()), {}};
  auto& h = f.h;
  auto& u = f.u;
  const std::size_t rows = m.rows(), cols = m.cols();

  // col_k <- s col_k + t col_j, col_j <- -b' col_k + a' col_j (det 1)
  auto combine = [&](IntMatrix& x, std::size_t k, std::size_t j, const Integer& s, const Integer& t,
                     const Integer& a_red, const Integer& b_red) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const Integer xk = x(r, k), xj = x(r, j);
      x(r, k) = s * xk + t * xj;
      x(r, j) = a_red * xj - b_red * xk;
    }
  };

  std::size_t k = 0;
  for (std::size_t i = 0; i < rows && k < cols; ++i) {
    for (std::size_t j = k + 1; j < cols; ++j) {
      if (h(i, j) == 0) continue;
      const Integer a = h(i, k), b = h(i, j);
      auto [g, s, t] = extended_gcd(a, b);
      const Integer a_red = a / g, b_red = b / g;
      combine(h, k, j, s, t, a_red, b_red);
      combine(u, k, j, s, t, a_red, b_red);
    }
    if (h(i, k) == 0) continue;
    if (h(i, k) < 0) {
      for (std::size_t r = 0; r < rows; ++r) h(r, k) = -h(r, k);
      for (std::size_t r = 0; r < cols; ++r) u(r, k) = -u(r, k);
    }
    f.pivots.emplace_back(i, k);
    ++k;
  }
  return f;
}

struct IntegerSolution {
  IntVector particular;         // M * particular == c
  std::vector<IntVector> kernel;  // basis of {x : M x = 0}
};

/// One integer solution of M x = c plus an integer kernel basis, or
/// nullopt when no integer solution exists.
inline std::optional<IntegerSolution> hnf_solve(const IntMatrix& m, std::span<const Integer> c) {
  if (m.rows() != c.size())
    throw DimensionError("hnf_solve: matrix has " + std::to_string(m.rows()) +
                         " rows but right-hand side has " + std::to_string(c.size()));
  const std::size_t cols = m.cols();
  const ColumnHermiteForm f = column_hermite_form(m);

  IntVector y(cols, Integer(0));
  std::size_t next_pivot = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer rest = c[i];
    for (std::size_t j = 0; j < next_pivot; ++j) rest -= f.h(i, j) * y[j];
    if (next_pivot < f.pivots.size() && f.pivots[next_pivot].first == i) {
      const Integer& d = f.h(i, next_pivot);
      if (rest % d != 0) return std::nullopt;
      y[next_pivot] = rest / d;
      ++next_pivot;
    } else if (rest != 0) {
      return std::nullopt;
    }
  }

  IntegerSolution sol;
  sol.particular = multiply(f.u, y);
  for (std::size_t j = f.rank(); j < cols; ++j) {
    IntVector v(cols);
    for (std::size_t r = 0; r < cols; ++r) v[r] = f.u(r, j);
    sol.kernel.push_back(std::move(v));
  }
  return sol;
}

inline std::optional<IntegerSolution> hnf_solve(const IntMatrix& m, const IntVector& c) {
  return hnf_solve(m, std::span<const Integer>(c));
}

}  // namespace balab
