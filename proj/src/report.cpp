#include "torsionlab/report.hpp"

#include <charconv>
#include <cmath>

namespace torsionlab {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

nlohmann::json exact_number(const Rational& q) {
  return {{"exact", q.get_str()}, {"decimal", to_double(q)}, {"provenance", "exact"}};
}

nlohmann::json exact_number(const ExtendedRational& q) {
  if (q.is_infinite()) return {{"exact", "inf"}, {"decimal", "inf"}, {"provenance", "exact"}};
  return exact_number(q.value());
}

nlohmann::json quadrature_number(double value, double tol) {
  nlohmann::json decimal = std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(format_double(value));
  return {{"decimal", std::move(decimal)}, {"provenance", "quadrature(" + format_double(tol) + ")"}};
}

}  // namespace torsionlab
