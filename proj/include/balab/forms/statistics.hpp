#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "balab/forms/classify.hpp"
#include "balab/forms/kernels.hpp"

namespace balab {

struct ScanOptions {
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
  bool prune = true;  // shell pruning; never changes the result
};

/// |Aq + b + p|^m |q|^n at the nearest-integer p.
struct ApproxStatistic {
  Scalar value;
  IntegerCandidate witness;
  Scalar q_norm;
};

inline ApproxStatistic product_statistic(const AffineSystem& sys, std::span<const Integer> q) {
  const Vector x = sys.apply(q);
  auto [dist, p] = dist_to_integers(x);
  Scalar q_norm = Scalar(sup_norm(q));
  if (!sys.is_exact()) q_norm = Scalar(q_norm.to_double());
  Scalar value = pow(dist, static_cast<unsigned>(sys.m())) * pow(q_norm, static_cast<unsigned>(sys.n()));
  return {std::move(value), IntegerCandidate{std::move(p), IntVector(q.begin(), q.end())}, std::move(q_norm)};
}

inline ApproxStatistic product_statistic(const AffineSystem& sys, const IntVector& q) {
  return product_statistic(sys, std::span<const Integer>(q));
}

/// Minimum of the product over the annulus N <= |q| <= Q, a truncated
/// surrogate for the liminf defining the badly approximable constant.
struct TruncatedConstant {
  Scalar value;
  IntegerCandidate witness;
  std::uint64_t N = 0;
  std::uint64_t Q = 0;
  bool exact = false;
};

namespace detail {

inline Scalar product_from_alpha(const Scalar& alpha, std::int64_t q_norm, std::size_t m, std::size_t n) {
  const Scalar beta = alpha.is_exact() ? Scalar(q_norm) : Scalar(static_cast<double>(q_norm));
  return pow(alpha, static_cast<unsigned>(m)) * pow(beta, static_cast<unsigned>(n));
}

}  // namespace detail

inline TruncatedConstant c_trunc(const AffineSystem& sys, std::uint64_t N, std::uint64_t Q,
                                 const ScanOptions& opt = {}) {
  if (N < 1) throw ParameterError("c_trunc: N must be >= 1");
  if (N > Q) throw ParameterError("c_trunc: N = " + std::to_string(N) + " exceeds Q = " + std::to_string(Q));
  const std::size_t m = sys.m(), n = sys.n();
  check_budget(annulus_size(n, N, Q), opt.budget, "c_trunc");

  TruncatedConstant out;
  out.N = N;
  out.Q = Q;
  out.exact = sys.is_exact();

  if (out.exact) {
    // Keys are alpha_num^m |q|^n; the product is key / D^m.
    const Integer den = detail::ExactResidualKernel(sys).denominator();
    const Integer den_m = boost::multiprecision::pow(den, static_cast<unsigned>(m));
    std::optional<Rational> floor_coeff;  // product >= floor_coeff * |q|^n
    if (opt.prune)
      if (auto u = kronecker_witness(sys))
        floor_coeff = pow_exact(kronecker_epsilon(sys, *u), static_cast<unsigned>(m));

    const auto best = detail::scan_shells_for_minimum<Integer>(
        n, N, Q, opt.threads,
        [&] {
          return [kernel = detail::ExactResidualKernel(sys), m, n](const IntPoint& q) mutable {
            const Integer& a = kernel.alpha(q);
            return Integer(boost::multiprecision::pow(a, static_cast<unsigned>(m)) *
                           boost::multiprecision::pow(Integer(detail::sup_norm(q)), static_cast<unsigned>(n)));
          };
        },
        [&](std::uint64_t s, const Integer& key) {
          if (key == 0) return true;
          if (!floor_coeff) return false;
          const Rational bound = *floor_coeff * pow_exact(Rational(s), static_cast<unsigned>(n));
          return Rational(key, den_m) <= bound;
        });
    detail::ExactResidualKernel kernel(sys);
    out.witness.q = detail::to_integers(best.q);
    const Integer a = kernel.alpha(best.q, &out.witness.p);
    out.value = detail::product_from_alpha(Scalar(Rational(a, den)), detail::sup_norm(best.q), m, n);
    return out;
  }

  const auto best = detail::scan_shells_for_minimum<double>(
      n, N, Q, opt.threads,
      [&] {
        return [kernel = detail::FloatResidualKernel(sys), m, n](const IntPoint& q) mutable {
          return std::pow(kernel.alpha(q), static_cast<double>(m)) *
                 std::pow(static_cast<double>(detail::sup_norm(q)), static_cast<double>(n));
        };
      },
      [](std::uint64_t, double key) { return key == 0.0; });
  detail::FloatResidualKernel kernel(sys);
  out.witness.q = detail::to_integers(best.q);
  const double a = kernel.alpha(best.q, &out.witness.p);
  out.value = detail::product_from_alpha(Scalar(a), detail::sup_norm(best.q), m, n);
  return out;
}

/// Nonincreasing approximation function psi, either the family eps / x or a
/// sampled table interpolated linearly (constant beyond its end points).
class PsiFunction {
 public:
  static PsiFunction inverse(Scalar eps = Scalar(1)) {
    if (eps.sign() <= 0) throw ParameterError("psi: eps must be positive");
    PsiFunction f;
    f.rep_ = std::move(eps);
    return f;
  }

  static PsiFunction table(std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) throw ParameterError("psi table is empty");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!(samples[i].second > 0)) throw ParameterError("psi table values must be positive");
      if (i > 0 && !(samples[i].first > samples[i - 1].first))
        throw ParameterError("psi table abscissae must be strictly increasing");
      if (i > 0 && samples[i].second > samples[i - 1].second)
        throw ParameterError("psi table is not nonincreasing at x = " + format_double(samples[i].first));
    }
    PsiFunction f;
    f.rep_ = std::move(samples);
    return f;
  }

  double operator()(double x) const {
    if (const auto* eps = std::get_if<Scalar>(&rep_)) return eps->to_double() / x;
    const auto& t = std::get<std::vector<std::pair<double, double>>>(rep_);
    if (x <= t.front().first) return t.front().second;
    if (x >= t.back().first) return t.back().second;
    const auto hi = std::upper_bound(t.begin(), t.end(), x, [](double v, const auto& s) { return v < s.first; });
    const auto lo = hi - 1;
    const double w = (x - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
  }

  /// |Aq+b+p|^m <= psi(|q|^n), given dist^m and |q|^n.
  bool admits(const Scalar& dist_pow_m, const Scalar& q_pow_n) const {
    if (const auto* eps = std::get_if<Scalar>(&rep_)) return dist_pow_m * q_pow_n <= *eps;
    return dist_pow_m.to_double() <= (*this)(q_pow_n.to_double());
  }

 private:
  std::variant<Scalar, std::vector<std::pair<double, double>>> rep_;
};

/// All q with 1 <= |q| <= Q for which |Aq + b + p|^m <= psi(|q|^n) holds at
/// the nearest p, in shell order.
inline std::vector<IntegerCandidate> psi_approx_witnesses(const AffineSystem& sys, const PsiFunction& psi,
                                                          std::uint64_t Q, const ScanOptions& opt = {}) {
  if (Q < 1) throw ParameterError("psi_approx_witnesses: Q must be >= 1");
  check_budget(annulus_size(sys.n(), 1, Q), opt.budget, "psi_approx_witnesses");
  const auto m = static_cast<unsigned>(sys.m()), n = static_cast<unsigned>(sys.n());
  std::vector<IntegerCandidate> out;
  std::optional<detail::ExactResidualKernel> exact;
  std::optional<detail::FloatResidualKernel> inexact;
  if (sys.is_exact()) exact.emplace(sys); else inexact.emplace(sys);
  IntVector p;
  for (std::uint64_t s = 1; s <= Q; ++s) {
    const Scalar qn = pow(sys.is_exact() ? Scalar(static_cast<std::int64_t>(s)) : Scalar(static_cast<double>(s)), n);
    for_each_in_shell(sys.n(), s, [&](const IntPoint& q) {
      const Scalar alpha = exact ? Scalar(Rational(exact->alpha(q, &p), exact->denominator()))
                                 : Scalar(inexact->alpha(q, &p));
      if (psi.admits(pow(alpha, m), qn)) out.push_back({p, detail::to_integers(q)});
      return true;
    });
  }
  return out;
}

}  // namespace balab
