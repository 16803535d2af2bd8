#include "torsionlab/rational.hpp"

#include <cctype>
#include <cmath>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw ParseError("malformed rational '" + std::string(text) + "'");
    mpz_class d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    out = Rational(mpz_class(std::string(num), 10), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class num(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    out = Rational(num, scale);
  } else {
    if (!all_digits(s)) throw ParseError("malformed rational '" + std::string(text) + "'");
    out = Rational(mpz_class(std::string(s), 10));
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

const Rational& ExtendedRational::value() const {
  if (!value_) throw InvalidArgument("value() called on +infinity");
  return *value_;
}

std::string ExtendedRational::to_string() const { return value_ ? value_->get_str() : "inf"; }

double ExtendedRational::to_double() const { return value_ ? value_->get_d() : HUGE_VAL; }

bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
  return *a.value_ == *b.value_;
}

std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.is_infinite()) return b.is_infinite() ? std::strong_ordering::equal : std::strong_ordering::greater;
  if (b.is_infinite()) return std::strong_ordering::less;
  int c = cmp(*a.value_, *b.value_);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

ExtendedRational operator+(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.is_infinite() || b.is_infinite()) return ExtendedRational::infinity();
  return Rational(*a.value_ + *b.value_);
}

ExtendedRational operator-(const ExtendedRational& a, const Rational& b) {
  if (a.is_infinite()) return a;
  return Rational(*a.value_ - b);
}

ExtendedRational parse_extended(std::string_view text) {
  auto s = trim(text);
  if (s == "inf" || s == "+inf" || s == "infinity") return ExtendedRational::infinity();
  return parse_rational(s);
}

}  // namespace torsionlab
