#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "cjsr/error.hpp"

namespace cjsr {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator. Frequencies are
/// parsed from decimal strings so that products such as 0.3 * 10 land exactly
/// on integers; no floating-point value ever enters a floor or ceiling.
class Rational {
 public:
  constexpr Rational() = default;

  Rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  /// Parses "0.13", "1", "3/10", "-0.5". At most 18 fractional digits.
  static Rational parse(std::string_view text) {
    auto fail = [&](const char* why) {
      return Error(ErrorCode::ParseError, "bad rational '" + std::string(text) + "': " + why);
    };
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) throw fail("empty");

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
      negative = s.front() == '-';
      s.remove_prefix(1);
    }

    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
      const std::int64_t num = parse_digits(s.substr(0, slash), text);
      const std::int64_t den = parse_digits(s.substr(slash + 1), text);
      if (den == 0) throw fail("zero denominator");
      return Rational(negative ? -num : num, den);
    }

    const auto dot = s.find('.');
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw fail("no digits");
    if (frac_part.size() > 18) throw fail("more than 18 fractional digits");

    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : parse_digits(int_part, text);
    const std::int64_t frac = frac_part.empty() ? 0 : parse_digits(frac_part, text);
    const __int128 num = static_cast<__int128>(whole) * den + frac;
    if (num > INT64_MAX) throw fail("out of range");
    const auto n = static_cast<std::int64_t>(num);
    return Rational(negative ? -n : n, den);
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  /// floor(this * k), exact.
  std::int64_t floor_times(std::int64_t k) const {
    return floor_div(static_cast<__int128>(num_) * k, den_);
  }

  /// ceil(this * k), exact.
  std::int64_t ceil_times(std::int64_t k) const {
    return -floor_div(-static_cast<__int128>(num_) * k, den_);
  }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  static std::int64_t parse_digits(std::string_view digits, std::string_view text) {
    if (digits.empty() || digits.size() > 18)
      throw Error(ErrorCode::ParseError, "bad rational '" + std::string(text) + "'");
    std::int64_t v = 0;
    for (char c : digits) {
      if (c < '0' || c > '9')
        throw Error(ErrorCode::ParseError, "bad rational '" + std::string(text) + "'");
      v = v * 10 + (c - '0');
    }
    return v;
  }

  static std::int64_t floor_div(__int128 a, std::int64_t b) {
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return static_cast<std::int64_t>(q);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace cjsr
