#pragma once

// Elongation functions switching the Hamiltonian term along the strip.

#include <string>
#include <string_view>
#include <utility>

namespace torsionlab::hamlab {

/// Quintic smoothstep: 0 for s <= 0, 1 for s >= 1, C^2.
double smoothstep(double s);
double smoothstep_derivative(double s);

class ElongationProfile {
 public:
  enum class Kind { kPlus, kMinus, kFamily };

  /// 0 for tau <= 0, 1 for tau >= 1, non-decreasing.
  static ElongationProfile plus();
  /// 1 - plus().
  static ElongationProfile minus();
  /// 0 for |tau| >= K and 1 for |tau| <= K - 1 when K >= 1, spliced from
  /// plus(tau + K) and minus(tau - K + 1); K * rho_1 for 0 <= K < 1.
  static ElongationProfile family(double K);
  /// "plus", "minus", "K=2".
  static ElongationProfile parse(std::string_view text);

  Kind kind() const { return kind_; }
  double K() const { return K_; }
  double operator()(double tau) const;
  double derivative(double tau) const;
  /// The derivative vanishes outside this interval.
  std::pair<double, double> transition() const;
  std::string describe() const;

 private:
  ElongationProfile(Kind kind, double K) : kind_(kind), K_(K) {}
  Kind kind_;
  double K_ = 0;
};

}  // namespace torsionlab::hamlab
