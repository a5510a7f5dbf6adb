#pragma once

// Scalars are either exact rationals (lowest terms, positive denominator)
// or IEEE doubles. Any operation that touches a double produces a double.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstdio>
#include <string>
#include <string_view>
#include <variant>

#include "balab/core/errors.hpp"

namespace balab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer floor_div(const Integer& num, const Integer& den) {
  Integer q = num / den;
  if (num % den != 0 && ((num < 0) != (den < 0))) --q;
  return q;
}

inline Integer floor(const Rational& r) {
  return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

inline Integer ceil(const Rational& r) { return -floor(Rational(-r)); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational pow_exact(const Rational& base, unsigned exponent) {
  return Rational(boost::multiprecision::pow(boost::multiprecision::numerator(base), exponent),
                  boost::multiprecision::pow(boost::multiprecision::denominator(base), exponent));
}

inline std::string to_string(const Rational& r) {
  const auto& den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

/// Fixed 17-significant-digit rendering used by every text output.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

inline Integer parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s));
}

}  // namespace detail

class Scalar {
 public:
  Scalar() : rep_(Rational(0)) {}
  Scalar(const Rational& r) : rep_(r) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Integer& z) : rep_(Rational(z)) {}  // NOLINT
  template <std::integral I>
  Scalar(I v) : rep_(Rational(v)) {}  // NOLINT
  template <std::floating_point F>
  Scalar(F v) : rep_(static_cast<double>(v)) {}  // NOLINT

  /// Parses "num/den", a plain integer, or a decimal literal. Decimals
  /// (and everything, when force_float is set) become Float64.
  static Scalar parse(std::string_view text, bool force_float = false) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ParameterError("empty scalar literal");

    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      const auto num_text = text.substr(0, slash);
      const auto den_text = text.substr(slash + 1);
      if (!detail::is_integer_literal(num_text) || !detail::is_integer_literal(den_text))
        throw ParameterError("malformed rational literal '" + std::string(text) + "'");
      const Integer den = detail::parse_integer(den_text);
      if (den == 0) throw ParameterError("zero denominator in '" + std::string(text) + "'");
      Rational r(detail::parse_integer(num_text), den);
      if (force_float) return Scalar(balab::to_double(r));
      return Scalar(r);
    }
    if (detail::is_integer_literal(text)) {
      Integer z = detail::parse_integer(text);
      if (force_float) return Scalar(z.convert_to<double>());
      return Scalar(z);
    }
    std::string_view body = text;
    if (body.front() == '+') body.remove_prefix(1);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(value))
      throw ParameterError("malformed scalar literal '" + std::string(text) + "'");
    return Scalar(value);
  }

  bool is_exact() const noexcept { return std::holds_alternative<Rational>(rep_); }

  const Rational& rational() const {
    if (const auto* r = std::get_if<Rational>(&rep_)) return *r;
    throw ExactnessError("exact rational required, got Float64 " + format_double(std::get<double>(rep_)));
  }

  double to_double() const {
    if (const auto* r = std::get_if<Rational>(&rep_)) return balab::to_double(*r);
    return std::get<double>(rep_);
  }

  int sign() const {
    if (const auto* r = std::get_if<Rational>(&rep_)) return r->sign();
    const double d = std::get<double>(rep_);
    return (d > 0) - (d < 0);
  }

  bool is_zero() const { return sign() == 0; }

  std::string str() const {
    if (const auto* r = std::get_if<Rational>(&rep_)) return balab::to_string(*r);
    return format_double(std::get<double>(rep_));
  }

  Scalar abs() const {
    if (const auto* r = std::get_if<Rational>(&rep_)) return Scalar(Rational(boost::multiprecision::abs(*r)));
    return Scalar(std::fabs(std::get<double>(rep_)));
  }

  Scalar operator-() const {
    if (const auto* r = std::get_if<Rational>(&rep_)) return Scalar(Rational(-*r));
    return Scalar(-std::get<double>(rep_));
  }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact_ref() + b.exact_ref()));
    return Scalar(a.to_double() + b.to_double());
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact_ref() - b.exact_ref()));
    return Scalar(a.to_double() - b.to_double());
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact_ref() * b.exact_ref()));
    return Scalar(a.to_double() * b.to_double());
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) {
      if (b.exact_ref() == 0) throw ParameterError("exact division by zero");
      return Scalar(Rational(a.exact_ref() / b.exact_ref()));
    }
    return Scalar(a.to_double() / b.to_double());
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return a.exact_ref() == b.exact_ref();
    return a.to_double() == b.to_double();
  }
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) {
      const auto& x = a.exact_ref();
      const auto& y = b.exact_ref();
      if (x < y) return std::partial_ordering::less;
      if (y < x) return std::partial_ordering::greater;
      return std::partial_ordering::equivalent;
    }
    return a.to_double() <=> b.to_double();
  }

 private:
  const Rational& exact_ref() const { return std::get<Rational>(rep_); }

  std::variant<Rational, double> rep_;
};

inline Scalar abs(const Scalar& x) { return x.abs(); }

inline Scalar pow(const Scalar& base, unsigned exponent) {
  if (base.is_exact()) return Scalar(pow_exact(base.rational(), exponent));
  return Scalar(std::pow(base.to_double(), static_cast<double>(exponent)));
}

inline Integer floor(const Scalar& x) {
  if (x.is_exact()) return floor(x.rational());
  return Integer(std::floor(x.to_double()));
}

inline Integer ceil(const Scalar& x) {
  if (x.is_exact()) return ceil(x.rational());
  return Integer(std::ceil(x.to_double()));
}

}  // namespace balab
