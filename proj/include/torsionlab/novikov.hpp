#pragma once

// Exact arithmetic in the universal Novikov ring over the rationals.
//
// An element is a finite sum  sum_i a_i T^{t_i} e^{mu_i}  together with a
// truncation level: every term with T-exponent at or above the level is
// unknown and has been discarded. Exponents of T are exact rationals, e is
// integer graded. Zero has valuation +inf.

#include "json.hpp"

#include <string>
#include <string_view>
#include <vector>

#include "torsionlab/rational.hpp"

namespace torsionlab {

struct NovikovTerm {
  Rational coeff;
  Rational t_exp;
  long e_exp = 0;

  friend bool operator==(const NovikovTerm&, const NovikovTerm&) = default;
};

class NovikovElement {
 public:
  /// The exact zero (truncation +inf).
  NovikovElement() = default;

  static NovikovElement zero(ExtendedRational trunc = {});
  static NovikovElement constant(const Rational& c, ExtendedRational trunc = {});
  static NovikovElement monomial(const Rational& coeff, const Rational& t_exp, long e_exp = 0,
                                 ExtendedRational trunc = {});
  /// Canonicalizes: merges equal (t, e) keys, drops zero coefficients and
  /// terms at or beyond the truncation level.
  static NovikovElement from_terms(std::vector<NovikovTerm> terms, ExtendedRational trunc = {});

  const std::vector<NovikovTerm>& terms() const { return terms_; }
  const ExtendedRational& trunc() const { return trunc_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  /// Member of Lambda_{0,nov}: no negative T-exponents.
  bool in_nonnegative_part() const;
  /// Member of the maximal ideal Lambda^+_{0,nov}: all T-exponents positive.
  bool in_positive_part() const;

  /// Lowers the truncation level to min(trunc, level), dropping terms.
  NovikovElement truncated(const ExtendedRational& level) const;
  /// Relabels the truncation level, keeping the current terms as an exact
  /// representative. Used when a specific representative of a residue class
  /// is chosen, e.g. for the quotients in an elimination step.
  NovikovElement with_trunc(const ExtendedRational& level) const;
  /// Collapses the e-grading (every e-power becomes e^0).
  NovikovElement ungraded() const;

  NovikovElement operator-() const;

  friend NovikovElement operator+(const NovikovElement& x, const NovikovElement& y);
  friend NovikovElement operator-(const NovikovElement& x, const NovikovElement& y);
  friend NovikovElement operator*(const NovikovElement& x, const NovikovElement& y);

  /// Same terms and same truncation level.
  friend bool operator==(const NovikovElement&, const NovikovElement&) = default;

 private:
  std::vector<NovikovTerm> terms_;
  ExtendedRational trunc_;
};

NovikovElement add(const NovikovElement& x, const NovikovElement& y);
NovikovElement mul(const NovikovElement& x, const NovikovElement& y);

/// Smallest T-exponent; +inf for zero.
ExtendedRational valuation(const NovikovElement& x);

/// Multiplicative inverse computed by a geometric series in the maximal
/// ideal. The result is reliable below trunc - 2 v(x). Monomials invert
/// exactly even without a truncation level.
/// Throws ZeroDivision for x == 0 and PrecisionExhausted when a
/// non-monomial has no finite truncation level.
NovikovElement invert(const NovikovElement& x);

/// x / y. In Lambda_{0,nov} the quotient exists iff v(x) >= v(y).
NovikovElement divide_exact(const NovikovElement& x, const NovikovElement& y);

/// Text form, e.g. "2*T(3/2)*e(-1) + T(2)". The zero element prints as "0".
std::string format(const NovikovElement& x);
/// Inverse of format(); also accepts bare "T"/"e" and decimals.
NovikovElement parse_novikov(std::string_view text, ExtendedRational trunc = {});

/// JSON form: [{"coeff":"p/q","t":"p/q","e":int}, ...].
nlohmann::json to_json(const NovikovElement& x);
NovikovElement novikov_from_json(const nlohmann::json& j, ExtendedRational trunc = {});

}  // namespace torsionlab
