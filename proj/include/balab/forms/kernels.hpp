#pragma once

// Per-candidate residual kernels for the enumeration loops.
//
// Both compute alpha(q) = min_p |Aq + b + p| together with the minimizing p
// (ties: residual +1/2). The exact kernel clears denominators once and works
// on integer numerators over a common denominator D. The float kernel
// accumulates the residual with fused multiply-adds after subtracting the
// rounded integer part, so the small residual keeps full precision even when
// |Aq| is large.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "balab/core/shells.hpp"
#include "balab/forms/classify.hpp"

namespace balab::detail {

class ExactResidualKernel {
 public:
  explicit ExactResidualKernel(const AffineSystem& sys) : m_(sys.m()), n_(sys.n()) {
    sys.require_exact("exact residual kernel");
    Vector all(sys.a().data().begin(), sys.a().data().end());
    all.insert(all.end(), sys.b().begin(), sys.b().end());
    den_ = common_denominator(all);
    two_den_ = 2 * den_;
    a_num_.reserve(m_ * n_);
    for (const auto& x : sys.a().data()) a_num_.push_back(scaled(x, den_));
    for (const auto& x : sys.b()) b_num_.push_back(scaled(x, den_));
    r_.resize(m_);
  }

  const Integer& denominator() const noexcept { return den_; }

  /// Numerator of alpha(q) over denominator(); writes the optimal p if asked.
  const Integer& alpha(std::span<const std::int64_t> q, IntVector* p = nullptr) {
    alpha_ = 0;
    if (p) p->resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      x_ = b_num_[i];
      for (std::size_t j = 0; j < n_; ++j)
        if (q[j] != 0) x_ += a_num_[i * n_ + j] * q[j];
      // k = ceil(x/D - 1/2) = floor((2x + D - 1) / 2D)
      k_ = floor_div(Integer(2 * x_ + den_ - 1), two_den_);
      x_ -= k_ * den_;
      r_[i] = x_;
      if (x_ < 0) x_ = -x_;
      if (x_ > alpha_) alpha_ = x_;
      if (p) (*p)[i] = -k_;
    }
    return alpha_;
  }

  /// Residuals A q + b + p of the last alpha() call, as doubles.
  void last_residuals(std::vector<double>& out) const {
    out.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) out[i] = balab::to_double(Rational(r_[i], den_));
  }

 private:
  std::size_t m_, n_;
  Integer den_, two_den_;
  IntVector a_num_, b_num_, r_;
  Integer x_, k_, alpha_;
};

class FloatResidualKernel {
 public:
  explicit FloatResidualKernel(const AffineSystem& sys) : m_(sys.m()), n_(sys.n()) {
    a_ = to_doubles(sys.a().data());
    b_ = to_doubles(sys.b());
    r_.resize(m_);
  }

  double alpha(std::span<const std::int64_t> q, IntVector* p = nullptr) {
    double best = 0;
    if (p) p->resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      double x = b_[i];
      for (std::size_t j = 0; j < n_; ++j) x += a_[i * n_ + j] * static_cast<double>(q[j]);
      const double k = std::ceil(x - 0.5);
      double r = -k;
      for (std::size_t j = 0; j < n_; ++j) r = std::fma(a_[i * n_ + j], static_cast<double>(q[j]), r);
      r += b_[i];
      r_[i] = r;
      best = std::max(best, std::fabs(r));
      if (p) (*p)[i] = Integer(-k);
    }
    return best;
  }

  void last_residuals(std::vector<double>& out) const { out = r_; }

 private:
  std::size_t m_, n_;
  std::vector<double> a_, b_, r_;
};

inline std::int64_t sup_norm(std::span<const std::int64_t> q) {
  std::int64_t s = 0;
  for (auto v : q) s = std::max(s, v < 0 ? -v : v);
  return s;
}

inline IntVector to_integers(std::span<const std::int64_t> q) { return IntVector(q.begin(), q.end()); }

/// Minimum-search over shells [lo, hi], partitioned into contiguous chunks.
/// The winner is the first strict minimum in enumeration order, regardless
/// of how many chunks are used.
template <typename Key>
struct ShellMinimum {
  bool found = false;
  Key key{};
  IntPoint q;
};

template <typename Key, typename MakeEval, typename Prune>
ShellMinimum<Key> scan_shells_for_minimum(std::size_t n, std::uint64_t lo, std::uint64_t hi, unsigned threads,
                                          MakeEval&& make_eval, Prune&& prune) {
  const auto ranges = partition_shells(n, lo, hi, threads);
  std::vector<ShellMinimum<Key>> partial(ranges.size());
  run_parallel(ranges.size(), threads, [&](std::size_t c) {
    auto eval = make_eval();
    auto& best = partial[c];
    for (std::uint64_t s = ranges[c].first; s <= ranges[c].second; ++s) {
      if (best.found && prune(s, best.key)) break;
      for_each_in_shell(n, s, [&](const IntPoint& q) {
        Key k = eval(q);
        if (!best.found || k < best.key) {
          best.found = true;
          best.key = std::move(k);
          best.q = q;
        }
        return true;
      });
    }
  });
  ShellMinimum<Key> out;
  for (auto& p : partial)
    if (p.found && (!out.found || p.key < out.key)) out = std::move(p);
  return out;
}

}  // namespace balab::detail
