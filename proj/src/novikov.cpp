#include "torsionlab/novikov.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "json.hpp"
#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

int key_cmp(const NovikovTerm& a, const NovikovTerm& b) {
  if (int c = cmp(a.t_exp, b.t_exp); c != 0) return c;
  return (a.e_exp > b.e_exp) - (a.e_exp < b.e_exp);
}

bool below(const Rational& t, const ExtendedRational& level) { return level.is_infinite() || t < level.value(); }

// Sorts by (t, e), merges equal keys, drops zero coefficients and terms at or
// beyond `level`.
std::vector<NovikovTerm> canonical(std::vector<NovikovTerm> terms, const ExtendedRational& level) {
  std::sort(terms.begin(), terms.end(), [](const NovikovTerm& a, const NovikovTerm& b) { return key_cmp(a, b) < 0; });
  std::vector<NovikovTerm> out;
  out.reserve(terms.size());
  for (auto& term : terms) {
    if (!below(term.t_exp, level)) break;
    if (!out.empty() && key_cmp(out.back(), term) == 0) {
      out.back().coeff += term.coeff;
      continue;
    }
    if (!out.empty() && out.back().coeff == 0) out.pop_back();
    out.push_back(std::move(term));
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  return out;
}

// Effective valuation: the valuation of a nonzero element, the truncation
// level of a zero one.
ExtendedRational effective_valuation(const NovikovElement& x) {
  return x.is_zero() ? x.trunc() : ExtendedRational(x.terms().front().t_exp);
}

}  // namespace

NovikovElement NovikovElement::zero(ExtendedRational trunc) {
  NovikovElement out;
  out.trunc_ = std::move(trunc);
  return out;
}

NovikovElement NovikovElement::constant(const Rational& c, ExtendedRational trunc) {
  return monomial(c, Rational(0), 0, std::move(trunc));
}

NovikovElement NovikovElement::monomial(const Rational& coeff, const Rational& t_exp, long e_exp,
                                        ExtendedRational trunc) {
  return from_terms({{coeff, t_exp, e_exp}}, std::move(trunc));
}

NovikovElement NovikovElement::from_terms(std::vector<NovikovTerm> terms, ExtendedRational trunc) {
  for (auto& term : terms) {
    term.t_exp.canonicalize();
    term.coeff.canonicalize();
  }
  NovikovElement out;
  out.terms_ = canonical(std::move(terms), trunc);
  out.trunc_ = std::move(trunc);
  return out;
}

bool NovikovElement::in_nonnegative_part() const { return is_zero() || terms_.front().t_exp >= 0; }

bool NovikovElement::in_positive_part() const { return is_zero() || terms_.front().t_exp > 0; }

NovikovElement NovikovElement::truncated(const ExtendedRational& level) const {
  NovikovElement out;
  out.trunc_ = min(trunc_, level);
  for (const auto& term : terms_) {
    if (!below(term.t_exp, out.trunc_)) break;
    out.terms_.push_back(term);
  }
  return out;
}

NovikovElement NovikovElement::with_trunc(const ExtendedRational& level) const {
  NovikovElement out = truncated(level);
  out.trunc_ = level;
  return out;
}

NovikovElement NovikovElement::ungraded() const {
  std::vector<NovikovTerm> terms = terms_;
  for (auto& term : terms) term.e_exp = 0;
  return from_terms(std::move(terms), trunc_);
}

NovikovElement NovikovElement::operator-() const {
  NovikovElement out = *this;
  for (auto& term : out.terms_) term.coeff = -term.coeff;
  return out;
}

NovikovElement operator+(const NovikovElement& x, const NovikovElement& y) {
  NovikovElement out;
  out.trunc_ = min(x.trunc_, y.trunc_);
  const auto& a = x.terms_;
  const auto& b = y.terms_;
  out.terms_.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c = i == a.size() ? 1 : j == b.size() ? -1 : key_cmp(a[i], b[j]);
    const NovikovTerm& next = c <= 0 ? a[i] : b[j];
    if (!below(next.t_exp, out.trunc_)) break;
    if (c < 0) {
      out.terms_.push_back(a[i++]);
    } else if (c > 0) {
      out.terms_.push_back(b[j++]);
    } else {
      Rational sum = a[i].coeff + b[j].coeff;
      if (sum != 0) out.terms_.push_back({std::move(sum), a[i].t_exp, a[i].e_exp});
      ++i;
      ++j;
    }
  }
  return out;
}

NovikovElement operator-(const NovikovElement& x, const NovikovElement& y) { return x + (-y); }

NovikovElement operator*(const NovikovElement& x, const NovikovElement& y) {
  // A term beyond either factor's truncation level times the partner's
  // leading term is the first unreliable contribution.
  NovikovElement out;
  out.trunc_ = min(effective_valuation(x) + y.trunc_, effective_valuation(y) + x.trunc_);
  std::vector<NovikovTerm> products;
  products.reserve(x.terms_.size() * y.terms_.size());
  for (const auto& a : x.terms_) {
    for (const auto& b : y.terms_) {
      Rational t = a.t_exp + b.t_exp;
      if (!below(t, out.trunc_)) break;  // y terms are sorted by t
      products.push_back({a.coeff * b.coeff, std::move(t), a.e_exp + b.e_exp});
    }
  }
  out.terms_ = canonical(std::move(products), out.trunc_);
  return out;
}

NovikovElement add(const NovikovElement& x, const NovikovElement& y) { return x + y; }
NovikovElement mul(const NovikovElement& x, const NovikovElement& y) { return x * y; }

ExtendedRational valuation(const NovikovElement& x) {
  if (x.is_zero()) return ExtendedRational::infinity();
  return x.terms().front().t_exp;
}

NovikovElement invert(const NovikovElement& x) {
  if (x.is_zero()) throw ZeroDivision("inverse of zero");
  const NovikovTerm& lead = x.terms().front();
  if (x.terms().size() > 1 && x.terms()[1].t_exp == lead.t_exp)
    throw InvalidArgument("leading T-exponent carries several e-powers; '" + format(x) + "' is not a unit");

  const Rational& v = lead.t_exp;
  const ExtendedRational out_trunc = x.trunc() - Rational(2 * v);
  if (x.is_monomial())
    return NovikovElement::monomial(Rational(1 / lead.coeff), Rational(-v), -lead.e_exp, out_trunc);
  if (x.trunc().is_infinite())
    throw PrecisionExhausted("inverting '" + format(x) + "' needs a finite truncation level");

  // x = lead * (1 + y) with y in the maximal ideal; relative precision trunc - v.
  const Rational relative = x.trunc().value() - v;
  std::vector<NovikovTerm> y;
  for (std::size_t i = 1; i < x.terms().size(); ++i) {
    const auto& term = x.terms()[i];
    Rational t = term.t_exp - v;
    if (t >= relative) break;
    y.push_back({term.coeff / lead.coeff, std::move(t), term.e_exp - lead.e_exp});
  }

  // Support of 1/(1 + y): sums of exponents of y below the relative level.
  std::vector<NovikovTerm> support{{Rational(1), Rational(0), 0}};
  for (std::size_t frontier = 0; frontier < support.size(); ++frontier) {
    for (const auto& term : y) {
      NovikovTerm next{Rational(0), support[frontier].t_exp + term.t_exp, support[frontier].e_exp + term.e_exp};
      if (next.t_exp >= relative) continue;
      const auto at = std::lower_bound(support.begin() + frontier + 1, support.end(), next,
                                       [](const NovikovTerm& a, const NovikovTerm& b) { return key_cmp(a, b) < 0; });
      if (at == support.end() || key_cmp(*at, next) != 0) support.insert(at, std::move(next));
    }
  }

  // z_k = -sum_j y_j z_{k - j}, walking the support in increasing order.
  const auto less = [](const NovikovTerm& a, const NovikovTerm& b) { return key_cmp(a, b) < 0; };
  for (std::size_t k = 1; k < support.size(); ++k) {
    Rational acc(0);
    for (const auto& term : y) {
      if (term.t_exp > support[k].t_exp) break;
      const NovikovTerm want{Rational(0), support[k].t_exp - term.t_exp, support[k].e_exp - term.e_exp};
      const auto at = std::lower_bound(support.begin(), support.begin() + k, want, less);
      if (at != support.begin() + k && key_cmp(*at, want) == 0) acc -= term.coeff * at->coeff;
    }
    support[k].coeff = std::move(acc);
  }
  const NovikovElement sum = NovikovElement::from_terms(std::move(support), relative);

  std::vector<NovikovTerm> shifted;
  shifted.reserve(sum.terms().size());
  for (const auto& term : sum.terms())
    shifted.push_back({term.coeff / lead.coeff, term.t_exp - v, term.e_exp - lead.e_exp});
  return NovikovElement::from_terms(std::move(shifted), out_trunc);
}

NovikovElement divide_exact(const NovikovElement& x, const NovikovElement& y) {
  if (y.is_zero()) throw ZeroDivision("division by zero");
  if (y.is_monomial() || y.trunc().is_finite()) return x * invert(y);
  // Exact non-monomial divisor: invert it only as far as x is known.
  if (x.trunc().is_infinite())
    throw PrecisionExhausted("dividing by '" + format(y) + "' needs a finite truncation level");
  const Rational vy = y.terms().front().t_exp;
  const ExtendedRational vx = x.is_zero() ? x.trunc() : ExtendedRational(x.terms().front().t_exp);
  const ExtendedRational needed = x.trunc() + ExtendedRational(Rational(vy)) - vx.value();
  return x * invert(y.truncated(needed));
}

// ---------------------------------------------------------------------------
// Text encoding

std::string format(const NovikovElement& x) {
  if (x.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& term : x.terms()) {
    const bool negative = term.coeff < 0;
    Rational magnitude = abs(term.coeff);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;

    std::vector<std::string> factors;
    const bool has_t = term.t_exp != 0;
    const bool has_e = term.e_exp != 0;
    if (magnitude != 1 || (!has_t && !has_e)) factors.push_back(magnitude.get_str());
    if (has_t) factors.push_back(term.t_exp == 1 ? std::string("T") : "T(" + term.t_exp.get_str() + ")");
    if (has_e) factors.push_back("e(" + std::to_string(term.e_exp) + ")");
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out += "*";
      out += factors[i];
    }
  }
  return out;
}

namespace {

class TextParser {
 public:
  explicit TextParser(std::string_view text) : text_(text) {}

  std::vector<NovikovTerm> parse() {
    std::vector<NovikovTerm> terms;
    skip_ws();
    if (at_end()) fail("empty expression");
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
    }
    terms.push_back(term(negative));
    skip_ws();
    while (!at_end()) {
      char op = peek();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      ++pos_;
      terms.push_back(term(op == '-'));
      skip_ws();
    }
    return terms;
  }

 private:
  NovikovTerm term(bool negative) {
    NovikovTerm out{Rational(1), Rational(0), 0};
    factor(out);
    skip_ws();
    while (!at_end() && peek() == '*') {
      ++pos_;
      factor(out);
      skip_ws();
    }
    if (negative) out.coeff = -out.coeff;
    return out;
  }

  void factor(NovikovTerm& out) {
    skip_ws();
    if (at_end()) fail("unexpected end of input");
    char c = peek();
    if (c == 'T') {
      ++pos_;
      out.t_exp += optional_argument();
    } else if (c == 'e') {
      ++pos_;
      Rational k = optional_argument();
      if (k.get_den() != 1) fail("e-exponent must be an integer");
      out.e_exp += k.get_num().get_si();
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      out.coeff *= number();
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }

  Rational optional_argument() {
    skip_ws();
    if (at_end() || (peek() != '(' && peek() != '^')) return Rational(1);
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      if (!at_end() && peek() == '(') return parenthesized();
      return signed_number();
    }
    return parenthesized();
  }

  Rational parenthesized() {
    ++pos_;  // '('
    skip_ws();
    Rational value = signed_number();
    skip_ws();
    if (at_end() || peek() != ')') fail("expected ')'");
    ++pos_;
    return value;
  }

  Rational signed_number() {
    bool negative = false;
    if (!at_end() && (peek() == '-' || peek() == '+')) {
      negative = peek() == '-';
      ++pos_;
      skip_ws();
    }
    Rational v = number();
    return negative ? Rational(-v) : v;
  }

  Rational number() {
    std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    if (!at_end() && peek() == '/') {
      ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (start == pos_) fail("expected a number");
    return parse_rational(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("novikov element '" + std::string(text_) + "' at offset " + std::to_string(pos_) +
                     ": " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

NovikovElement parse_novikov(std::string_view text, ExtendedRational trunc) {
  return NovikovElement::from_terms(TextParser(text).parse(), std::move(trunc));
}

nlohmann::json to_json(const NovikovElement& x) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& term : x.terms())
    out.push_back({{"coeff", term.coeff.get_str()}, {"t", term.t_exp.get_str()}, {"e", term.e_exp}});
  return out;
}

NovikovElement novikov_from_json(const nlohmann::json& j, ExtendedRational trunc) {
  if (!j.is_array()) throw ParseError("novikov element JSON must be an array of terms");
  std::vector<NovikovTerm> terms;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("coeff") || !item.contains("t"))
      throw ParseError("novikov term needs 'coeff' and 't'");
    NovikovTerm term;
    term.coeff = parse_rational(item.at("coeff").get<std::string>());
    term.t_exp = parse_rational(item.at("t").get<std::string>());
    term.e_exp = item.value("e", 0L);
    terms.push_back(std::move(term));
  }
  return NovikovElement::from_terms(std::move(terms), std::move(trunc));
}

}  // namespace torsionlab
