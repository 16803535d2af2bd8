#pragma once

// Report numbers: every value carries its provenance.
//   exact:      {"exact": "p/q", "decimal": 1.5, "provenance": "exact"}
//   quadrature: {"decimal": 1.2e-07, "provenance": "quadrature(1e-06)"}

#include <string>

#include "json.hpp"
#include "torsionlab/rational.hpp"

namespace torsionlab {

nlohmann::json exact_number(const Rational& q);
/// +inf renders as {"exact": "inf", "decimal": "inf", ...}.
nlohmann::json exact_number(const ExtendedRational& q);
nlohmann::json quadrature_number(double value, double tol);

/// Shortest round-trip rendering of a double ("1e-06", "0.25").
std::string format_double(double x);

}  // namespace torsionlab
