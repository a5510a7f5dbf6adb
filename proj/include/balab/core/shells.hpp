#pragma once

// Enumeration of integer vectors by sup-norm shell.
//
// Shell s holds every q in Z^n with |q| = s. Within a shell vectors come in
// descending lexicographic order, so (s, ..., s) is first and +s precedes -s.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <string>
#include <limits>
#include <thread>
#include <vector>

#include "balab/core/errors.hpp"

namespace balab {

using IntPoint = std::vector<std::int64_t>;

namespace detail {

inline std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    r *= base;
  }
  return r;
}

template <typename Visit>
bool shell_recurse(IntPoint& q, std::size_t pos, bool hit, std::int64_t s, Visit& visit) {
  const std::size_t n = q.size();
  if (pos + 1 == n && !hit) {
    q[pos] = s;
    if (!visit(static_cast<const IntPoint&>(q))) return false;
    if (s != 0) {
      q[pos] = -s;
      if (!visit(static_cast<const IntPoint&>(q))) return false;
    }
    return true;
  }
  for (std::int64_t v = s; v >= -s; --v) {
    q[pos] = v;
    const bool h = hit || v == s || v == -s;
    if (pos + 1 == n) {
      if (!visit(static_cast<const IntPoint&>(q))) return false;
    } else if (!shell_recurse(q, pos + 1, h, s, visit)) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

/// Number of q in Z^n with |q| = s (saturating).
inline std::uint64_t shell_size(std::size_t n, std::uint64_t s) {
  if (s == 0) return 1;
  const auto outer = detail::saturating_pow(2 * s + 1, n);
  const auto inner = detail::saturating_pow(2 * s - 1, n);
  if (outer == std::numeric_limits<std::uint64_t>::max()) return outer;
  return outer - inner;
}

/// Number of q with lo <= |q| <= hi (saturating).
inline std::uint64_t annulus_size(std::size_t n, std::uint64_t lo, std::uint64_t hi) {
  const auto outer = detail::saturating_pow(2 * hi + 1, n);
  if (outer == std::numeric_limits<std::uint64_t>::max()) return outer;
  const auto inner = lo == 0 ? 0 : detail::saturating_pow(2 * lo - 1, n);
  return outer - inner;
}

inline void check_budget(std::uint64_t required, std::uint64_t budget, const char* what) {
  if (required > budget) throw BudgetError(std::string(what) + ": enumeration exceeds budget", required, budget);
}

/// Calls visit(q) for each q of shell s; stops early when visit returns false.
/// Returns false iff stopped early.
template <typename Visit>
bool for_each_in_shell(std::size_t n, std::uint64_t s, Visit&& visit) {
  IntPoint q(n, 0);
  if (s == 0) return visit(static_cast<const IntPoint&>(q));
  return detail::shell_recurse(q, 0, false, static_cast<std::int64_t>(s), visit);
}

/// Splits shells [lo, hi] into at most `parts` contiguous ranges of similar
/// candidate counts.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> partition_shells(std::size_t n, std::uint64_t lo,
                                                                              std::uint64_t hi, unsigned parts) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  if (parts <= 1 || lo == hi) {
    ranges.emplace_back(lo, hi);
    return ranges;
  }
  const std::uint64_t total = annulus_size(n, lo, hi);
  const std::uint64_t target = total / parts + 1;
  std::uint64_t start = lo, acc = 0;
  for (std::uint64_t s = lo; s <= hi; ++s) {
    acc += shell_size(n, s);
    if (acc >= target && ranges.size() + 1 < parts && s < hi) {
      ranges.emplace_back(start, s);
      start = s + 1;
      acc = 0;
    }
  }
  ranges.emplace_back(start, hi);
  return ranges;
}

/// Runs work(i) for i in [0, count) on up to `threads` std::threads.
template <typename Work>
void run_parallel(std::size_t count, unsigned threads, Work&& work) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          work(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace balab
