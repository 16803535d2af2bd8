#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace torsionlab {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a finite decimal ("0.75", "-1.5e0" is not
/// accepted). Decimals are converted exactly.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text ("3/2", "-1", "0").
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// A rational or +infinity. Used for valuations (zero has valuation +inf),
/// truncation levels and torsion thresholds.
class ExtendedRational {
 public:
  ExtendedRational() = default;  // +infinity
  ExtendedRational(Rational value) : value_(std::move(value)) {}  // NOLINT(implicit)
  ExtendedRational(long value) : value_(Rational(value)) {}       // NOLINT(implicit)

  static ExtendedRational infinity() { return {}; }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }
  /// Precondition: finite.
  const Rational& value() const;

  std::string to_string() const;  // "p/q" or "inf"
  double to_double() const;       // +HUGE_VAL for infinity

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b);
  friend std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b);

  friend ExtendedRational operator+(const ExtendedRational& a, const ExtendedRational& b);
  friend ExtendedRational operator-(const ExtendedRational& a, const Rational& b);

 private:
  std::optional<Rational> value_;
};

ExtendedRational parse_extended(std::string_view text);

inline ExtendedRational min(const ExtendedRational& a, const ExtendedRational& b) {
  return (a <= b) ? a : b;
}
inline ExtendedRational max(const ExtendedRational& a, const ExtendedRational& b) {
  return (a >= b) ? a : b;
}

}  // namespace torsionlab
