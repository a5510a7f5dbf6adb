#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace balab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector/matrix shapes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter violates an operation's precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An operation that produces exact witnesses was handed Float64 data.
class ExactnessError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would visit more candidates than allowed.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::uint64_t required, std::uint64_t budget)
      : Error(what + " (required " + std::to_string(required) + ", budget " +
              std::to_string(budget) + ")"),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

}  // namespace balab
