#include "torsionlab/hamlab/profile.hpp"

#include <cmath>
#include <sstream>

#include "torsionlab/errors.hpp"

namespace torsionlab::hamlab {

double smoothstep(double s) {
  if (s <= 0) return 0;
  if (s >= 1) return 1;
  return s * s * s * (10 - 15 * s + 6 * s * s);
}

double smoothstep_derivative(double s) {
  if (s <= 0 || s >= 1) return 0;
  const double q = s * (1 - s);
  return 30 * q * q;
}

ElongationProfile ElongationProfile::plus() { return {Kind::kPlus, 0}; }
ElongationProfile ElongationProfile::minus() { return {Kind::kMinus, 0}; }

ElongationProfile ElongationProfile::family(double K) {
  if (!(K >= 0) || !std::isfinite(K)) throw InvalidArgument("elongation parameter K must be finite and >= 0");
  return {Kind::kFamily, K};
}

ElongationProfile ElongationProfile::parse(std::string_view text) {
  if (text == "plus" || text == "rho+") return plus();
  if (text == "minus" || text == "rho-") return minus();
  if (text.rfind("K=", 0) == 0) return family(std::stod(std::string(text.substr(2))));
  throw ParseError("unknown elongation profile '" + std::string(text) + "'");
}

double ElongationProfile::operator()(double tau) const {
  switch (kind_) {
    case Kind::kPlus: return smoothstep(tau);
    case Kind::kMinus: return 1 - smoothstep(tau);
    case Kind::kFamily:
      if (K_ < 1) return K_ * family(1)(tau);
      if (tau <= -K_ + 1) return smoothstep(tau + K_);
      if (tau >= K_ - 1) return 1 - smoothstep(tau - K_ + 1);
      return 1;
  }
  return 0;
}

double ElongationProfile::derivative(double tau) const {
  switch (kind_) {
    case Kind::kPlus: return smoothstep_derivative(tau);
    case Kind::kMinus: return -smoothstep_derivative(tau);
    case Kind::kFamily:
      if (K_ < 1) return K_ * family(1).derivative(tau);
      if (tau <= -K_ + 1) return smoothstep_derivative(tau + K_);
      if (tau >= K_ - 1) return -smoothstep_derivative(tau - K_ + 1);
      return 0;
  }
  return 0;
}

std::pair<double, double> ElongationProfile::transition() const {
  if (kind_ != Kind::kFamily) return {0, 1};
  const double k = std::max(K_, 1.0);
  return {-k, k};
}

std::string ElongationProfile::describe() const {
  switch (kind_) {
    case Kind::kPlus: return "rho+";
    case Kind::kMinus: return "rho-";
    case Kind::kFamily: {
      std::ostringstream os;
      os << "rho_K(K=" << K_ << ")";
      return os.str();
    }
  }
  return "?";
}

}  // namespace torsionlab::hamlab
