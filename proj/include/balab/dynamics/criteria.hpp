#pragma once

// Flow-side criteria for bad approximability.
//
// For a single lattice vector v = (p, q) with alpha = |Aq + b + p| and
// beta = |q|, the orbit norm is |g_t L~ v| = max(e^{t/m} alpha, e^{-t/n} beta).
// Its infimum over t >= 0 is
//
//   alpha                                  if beta < alpha (at t = 0),
//   (alpha^m beta^n)^{1/(m+n)}             if beta >= alpha, at
//                                          t* = mn/(m+n) ln(beta/alpha),
//
// so value^{m+n} equals the approximation product alpha^m beta^n exactly in
// the second case. The affine criterion minimizes over all v (v = 0
// included); the homogeneous one over v != 0 with b = 0.

#include <cmath>
#include <cstdint>
#include <optional>

#include "balab/dynamics/flow.hpp"
#include "balab/forms/statistics.hpp"

namespace balab {

struct FlowMinimum {
  Scalar value;        // inf_t |g_t L~ v|
  Scalar value_pow;    // value^{m+n}; exact for exact inputs
  double t_star = 0;   // minimizing time; meaningless when t_star_infinite
  bool t_star_infinite = false;  // alpha = 0: value 0 approached as t -> inf
  Scalar alpha;
  Scalar beta;
};

inline FlowMinimum flow_minimum_from_norms(std::size_t m, std::size_t n, const Scalar& alpha, const Scalar& beta) {
  FlowMinimum f;
  f.alpha = alpha;
  f.beta = beta;
  const auto total = static_cast<unsigned>(m + n);
  if (alpha.is_zero()) {
    f.value = alpha;
    f.value_pow = alpha;
    f.t_star_infinite = true;
    return f;
  }
  if (beta < alpha) {
    f.value = alpha;
    f.value_pow = pow(alpha, total);
    return f;
  }
  f.value_pow = pow(alpha, static_cast<unsigned>(m)) * pow(beta, static_cast<unsigned>(n));
  const double la = std::log(alpha.to_double()), lb = std::log(beta.to_double());
  const double dm = static_cast<double>(m), dn = static_cast<double>(n);
  f.value = Scalar(std::exp((dm * la + dn * lb) / (dm + dn)));
  f.t_star = dm * dn / (dm + dn) * (lb - la);
  return f;
}

inline FlowMinimum per_vector_flow_min(const FlowSpec& fs, const AffineSystem& sys, const IntegerCandidate& v) {
  if (fs.m() != sys.m() || fs.n() != sys.n()) throw DimensionError("flow and system dimensions differ");
  const Vector r = sys.residual(v.p, v.q);
  Scalar beta = Scalar(sup_norm(std::span<const Integer>(v.q)));
  if (!sys.is_exact()) beta = Scalar(beta.to_double());
  return flow_minimum_from_norms(sys.m(), sys.n(), sup_norm(r), beta);
}

/// Minimum of the per-vector flow minimum over enumerated vectors.
struct FlowCriterion {
  Scalar value;
  IntegerCandidate witness;
  FlowMinimum detail;
  std::uint64_t Q = 0;
  bool exact = false;
};

namespace detail {

// Ordering keys proportional to value^{m+n}. Exact keys share the scale
// D^{m+n}: alpha_num^{m+n} for beta < alpha, alpha_num^m beta^n D^n otherwise.
inline Integer exact_flow_key(const Integer& alpha_num, std::int64_t beta, const Integer& den, unsigned m,
                              unsigned n) {
  if (alpha_num == 0) return 0;
  if (Integer(beta) * den < alpha_num) return boost::multiprecision::pow(alpha_num, m + n);
  return boost::multiprecision::pow(alpha_num, m) * boost::multiprecision::pow(Integer(beta), n) *
         boost::multiprecision::pow(den, n);
}

inline double float_flow_key(double alpha, std::int64_t beta, unsigned m, unsigned n) {
  if (alpha == 0) return 0;
  const auto b = static_cast<double>(beta);
  if (b < alpha) return std::pow(alpha, m + n);
  return std::pow(alpha, m) * std::pow(b, n);
}

// Scans q shells [lo, Q] at the nearest p; `seed` (q = 0, any p) competes as
// the first candidate in enumeration order.
inline FlowCriterion flow_criterion_scan(const FlowSpec& fs, const AffineSystem& sys, std::uint64_t lo,
                                         std::uint64_t Q, const ScanOptions& opt,
                                         const std::optional<IntegerCandidate>& seed) {
  if (fs.m() != sys.m() || fs.n() != sys.n()) throw DimensionError("flow and system dimensions differ");
  const auto m = static_cast<unsigned>(sys.m()), n = static_cast<unsigned>(sys.n());
  check_budget(annulus_size(n, lo, Q), opt.budget, "flow criterion");
  FlowCriterion out;
  out.Q = Q;
  out.exact = sys.is_exact();

  bool scanned_wins = true;
  IntegerCandidate witness;
  Scalar alpha;

  if (out.exact) {
    const Integer den = ExactResidualKernel(sys).denominator();
    const Integer den_total = boost::multiprecision::pow(den, m + n);
    // The seed has q = 0, so its value^{m+n} is alpha^{m+n}.
    std::optional<Rational> seed_key;
    if (seed)
      seed_key = Rational(pow_exact(sup_norm(sys.residual(seed->p, seed->q)).rational(), m + n) *
                          Rational(den_total));
    // Every value is >= alpha >= eps when a Kronecker witness exists.
    std::optional<Rational> floor_key;
    if (opt.prune)
      if (auto u = kronecker_witness(sys))
        floor_key = pow_exact(kronecker_epsilon(sys, *u), m + n) * Rational(den_total);
    auto certified = [&](const Rational& key) { return key == 0 || (floor_key && key <= *floor_key); };
    if (seed_key && certified(*seed_key)) {
      scanned_wins = false;
    } else {
      const auto best = scan_shells_for_minimum<Integer>(
          n, lo, Q, opt.threads,
          [&] {
            return [kernel = ExactResidualKernel(sys), den, m, n](const IntPoint& q) mutable {
              return exact_flow_key(kernel.alpha(q), sup_norm(q), den, m, n);
            };
          },
          [&](std::uint64_t, const Integer& key) { return certified(Rational(key)); });
      scanned_wins = best.found && (!seed_key || Rational(best.key) < *seed_key);
      if (scanned_wins) {
        ExactResidualKernel kernel(sys);
        witness.q = to_integers(best.q);
        alpha = Scalar(Rational(kernel.alpha(best.q, &witness.p), den));
      }
    }
  } else {
    std::optional<double> seed_key;
    if (seed) seed_key = float_flow_key(sup_norm(sys.residual(seed->p, seed->q)).to_double(), 0, m, n);
    if (seed_key && *seed_key == 0) {
      scanned_wins = false;
    } else {
      const auto best = scan_shells_for_minimum<double>(
          n, lo, Q, opt.threads,
          [&] {
            return [kernel = FloatResidualKernel(sys), m, n](const IntPoint& q) mutable {
              return float_flow_key(kernel.alpha(q), sup_norm(q), m, n);
            };
          },
          [](std::uint64_t, double key) { return key == 0.0; });
      scanned_wins = best.found && (!seed_key || best.key < *seed_key);
      if (scanned_wins) {
        FloatResidualKernel kernel(sys);
        witness.q = to_integers(best.q);
        alpha = Scalar(kernel.alpha(best.q, &witness.p));
      }
    }
  }

  if (!scanned_wins) {
    witness = *seed;
    alpha = sup_norm(sys.residual(seed->p, seed->q));
  }
  Scalar beta(balab::sup_norm(std::span<const Integer>(witness.q)));
  if (!out.exact) beta = Scalar(beta.to_double());
  out.detail = flow_minimum_from_norms(m, n, alpha, beta);
  out.value = out.detail.value;
  out.witness = std::move(witness);
  return out;
}

}  // namespace detail

/// Certified upper bound for the largest eps with |g_t L~ v| >= eps for all
/// t >= 0 and all v in Z^{m+n} with |q| <= Q (v = 0 included). Nonincreasing
/// in Q.
inline FlowCriterion epsilon_inf(const FlowSpec& fs, const AffineSystem& sys, std::uint64_t Q,
                                 const ScanOptions& opt = {}) {
  if (fs.m() != sys.m() || fs.n() != sys.n()) throw DimensionError("flow and system dimensions differ");
  if (Q < 1) throw ParameterError("epsilon_inf: Q must be >= 1");
  return detail::flow_criterion_scan(fs, sys, 0, Q, opt, std::nullopt);
}

/// Homogeneous version over v != 0 (b = 0). The q = 0 candidates are the
/// nonzero p, best represented by p = e_1 with value 1.
inline FlowCriterion dani_homogeneous_eps(const FlowSpec& fs, const Matrix<Scalar>& a, std::uint64_t Q,
                                          const ScanOptions& opt = {}) {
  if (fs.m() != a.rows() || fs.n() != a.cols()) throw DimensionError("flow and matrix dimensions differ");
  if (Q < 1) throw ParameterError("dani_homogeneous_eps: Q must be >= 1");
  const auto sys = AffineSystem::homogeneous(a);
  IntegerCandidate e1{IntVector(sys.m(), Integer(0)), IntVector(sys.n(), Integer(0))};
  e1.p[0] = 1;
  return detail::flow_criterion_scan(fs, sys, 1, Q, opt, e1);
}

}  // namespace balab
