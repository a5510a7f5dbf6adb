#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "balab/dynamics/criteria.hpp"

namespace balab {

struct LatticeVector {
  IntegerCandidate v;
  double norm = 0;  // |g_t L~ v|
};

namespace detail {

/// Float or exact residual kernel behind one interface.
class AnyResidualKernel {
 public:
  explicit AnyResidualKernel(const AffineSystem& sys) : kernel_(make(sys)) {}

  /// Residuals at the nearest p (written to p).
  void nearest(std::span<const std::int64_t> q, IntVector& p, std::vector<double>& residuals) {
    std::visit([&](auto& k) {
      k.alpha(q, &p);
      k.last_residuals(residuals);
    }, kernel_);
  }

  /// alpha(q) as a double.
  double alpha(std::span<const std::int64_t> q) {
    if (auto* k = std::get_if<ExactResidualKernel>(&kernel_))
      return balab::to_double(Rational(k->alpha(q), k->denominator()));
    return std::get<FloatResidualKernel>(kernel_).alpha(q);
  }

 private:
  using Variant = std::variant<ExactResidualKernel, FloatResidualKernel>;
  static Variant make(const AffineSystem& sys) {
    if (sys.is_exact()) return ExactResidualKernel(sys);
    return FloatResidualKernel(sys);
  }
  Variant kernel_;
};

}  // namespace detail

/// Every v with |g_t L~ v| <= radius, sorted by norm (ties in shell order).
inline std::vector<LatticeVector> shortest_vectors_at(const FlowSpec& fs, const AffineSystem& sys, double t,
                                                      double radius, std::uint64_t budget = kDefaultBudget) {
  if (fs.m() != sys.m() || fs.n() != sys.n()) throw DimensionError("flow and system dimensions differ");
  if (!(radius > 0)) throw ParameterError("shortest_vectors_at: radius must be positive");
  const double up = fs.expand(t), down = fs.contract(t);
  const double q_bound = radius / down, p_reach = radius / up;
  const std::size_t m = sys.m(), n = sys.n();

  const double q_box_f = std::pow(2 * std::floor(q_bound) + 1, static_cast<double>(n));
  const double p_box_f = std::pow(2 * std::floor(p_reach) + 2, static_cast<double>(m));
  if (!(q_box_f * p_box_f <= static_cast<double>(budget)))
    throw BudgetError("shortest_vectors_at: enumeration exceeds budget",
                      q_box_f * p_box_f >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(q_box_f * p_box_f),
                      budget);
  const auto q_max = static_cast<std::uint64_t>(std::floor(q_bound));

  detail::AnyResidualKernel kernel(sys);
  std::vector<LatticeVector> found;
  IntVector p_near;
  std::vector<double> r;
  std::vector<std::int64_t> lo(m), hi(m), k(m);
  for (std::uint64_t s = 0; s <= q_max; ++s) {
    const double q_part = down * static_cast<double>(s);
    if (q_part > radius) break;
    for_each_in_shell(n, s, [&](const IntPoint& q) {
      kernel.nearest(q, p_near, r);
      // offsets k_i with |r_i + k_i| <= p_reach
      for (std::size_t i = 0; i < m; ++i) {
        lo[i] = static_cast<std::int64_t>(std::ceil(-p_reach - r[i]));
        hi[i] = static_cast<std::int64_t>(std::floor(p_reach - r[i]));
        if (lo[i] > hi[i]) return true;
        k[i] = lo[i];
      }
      while (true) {
        double norm = q_part;
        for (std::size_t i = 0; i < m; ++i) norm = std::max(norm, up * std::fabs(r[i] + static_cast<double>(k[i])));
        if (norm <= radius) {
          LatticeVector lv{{p_near, detail::to_integers(q)}, norm};
          for (std::size_t i = 0; i < m; ++i) lv.v.p[i] += k[i];
          found.push_back(std::move(lv));
        }
        std::size_t i = 0;
        while (i < m && k[i] == hi[i]) k[i] = lo[i], ++i;
        if (i == m) break;
        ++k[i];
      }
      return true;
    });
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.norm < b.norm; });
  return found;
}

/// Per-time diagnostics of the orbit g_t L~ Z^{m+n}.
struct OrbitDiagnostics {
  std::vector<double> times;
  std::vector<double> lambda1;     // shortest nonzero vector of g_t L_A Z^{m+n} (b dropped)
  std::vector<double> affine_min;  // min over all v of |g_t L~ v|
  std::vector<IntegerCandidate> affine_witness;
  std::vector<IntegerCandidate> lambda1_witness;
};

namespace detail {

struct ShellWalkResult {
  double norm;
  IntegerCandidate witness;
};

// Walks q shells outward from 1 starting with a q = 0 candidate, stopping once
// e^{-t/n} s can no longer beat the running minimum or the minimum reaches
// `floor_norm`.
inline ShellWalkResult min_norm_walk(const AffineSystem& sys, double up, double down, ShellWalkResult best,
                                     double floor_norm, std::uint64_t budget) {
  const std::size_t n = sys.n();
  AnyResidualKernel kernel(sys);
  std::uint64_t visited = 0;
  for (std::uint64_t s = 1;; ++s) {
    if (best.norm <= floor_norm) break;
    const double q_part = down * static_cast<double>(s);
    if (q_part >= best.norm) break;
    visited += shell_size(n, s);
    if (visited > budget) {
      const auto reach = static_cast<std::uint64_t>(std::ceil(best.norm / down));
      throw BudgetError("orbit_trace: shortest-vector walk exceeds budget", annulus_size(n, 1, reach), budget);
    }
    IntPoint best_q;
    bool improved = false;
    for_each_in_shell(n, s, [&](const IntPoint& q) {
      const double norm = std::max(up * kernel.alpha(q), q_part);
      if (norm < best.norm) {
        best.norm = norm;
        best_q = q;
        improved = true;
      }
      return true;
    });
    if (improved) {
      best.witness.q = to_integers(best_q);
      std::vector<double> r;
      kernel.nearest(best_q, best.witness.p, r);
    }
  }
  return best;
}

}  // namespace detail

inline OrbitDiagnostics orbit_trace(const FlowSpec& fs, const AffineSystem& sys, std::span<const double> times,
                                    const ScanOptions& opt = {}) {
  if (fs.m() != sys.m() || fs.n() != sys.n()) throw DimensionError("flow and system dimensions differ");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0) || !std::isfinite(times[i])) throw ParameterError("orbit_trace: times must be finite and >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) throw ParameterError("orbit_trace: times must be increasing");
  }
  const std::size_t m = sys.m(), n = sys.n();
  const auto homogeneous = AffineSystem::homogeneous(sys.a());

  double eps_floor = 0;  // |Aq + b + p| >= eps for all p, q
  if (sys.is_exact() && opt.prune)
    if (auto u = kronecker_witness(sys)) eps_floor = to_double(kronecker_epsilon(sys, *u));

  OrbitDiagnostics d;
  d.times.assign(times.begin(), times.end());
  d.lambda1.resize(times.size());
  d.affine_min.resize(times.size());
  d.affine_witness.resize(times.size());
  d.lambda1_witness.resize(times.size());

  run_parallel(times.size(), opt.threads, [&](std::size_t i) {
    const double t = times[i];
    const double up = fs.expand(t), down = fs.contract(t);

    detail::ShellWalkResult h{up, {IntVector(m, Integer(0)), IntVector(n, Integer(0))}};
    h.witness.p[0] = 1;
    h = detail::min_norm_walk(homogeneous, up, down, std::move(h), 0.0, opt.budget);
    d.lambda1[i] = h.norm;
    d.lambda1_witness[i] = std::move(h.witness);

    detail::AnyResidualKernel kernel(sys);
    const IntPoint zero(n, 0);
    detail::ShellWalkResult a{0, {{}, IntVector(n, Integer(0))}};
    std::vector<double> r;
    kernel.nearest(zero, a.witness.p, r);
    a.norm = up * sup_norm(std::span<const double>(r));
    // certified floor, with slack for the rounding in up * eps
    const double floor_norm = up * eps_floor * (1 + 1e-12);
    a = detail::min_norm_walk(sys, up, down, std::move(a), floor_norm, opt.budget);
    d.affine_min[i] = a.norm;
    d.affine_witness[i] = std::move(a.witness);
  });
  return d;
}

}  // namespace balab
