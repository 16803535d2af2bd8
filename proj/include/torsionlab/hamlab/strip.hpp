#pragma once

// Discretized strips u(s, t) on [s0, s1] x [0, 1] and the quadratures of
// the action and energy identities.
//
// Derivatives are taken per cell from the edge differences averaged over
// the two opposite edges, and the integrand is evaluated at the average of
// the four corners. The symplectic area of a concatenation is therefore the
// exact sum of the pieces. Path integrals use the trapezoid rule in t.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torsionlab/hamlab/hamiltonian.hpp"
#include "torsionlab/hamlab/hofer.hpp"
#include "torsionlab/hamlab/profile.hpp"

namespace torsionlab::hamlab {

struct StripGrid {
  double s0 = 0, s1 = 1;
  std::size_t ns = 0, nt = 0;  // cells
  std::size_t dim = 0;
  std::vector<double> data;    // node (i, j) starts at ((i * (nt + 1)) + j) * dim

  StripGrid() = default;
  StripGrid(double s0, double s1, std::size_t ns, std::size_t nt, std::size_t dim);

  double hs() const { return (s1 - s0) / static_cast<double>(ns); }
  double ht() const { return 1.0 / static_cast<double>(nt); }
  double s(std::size_t i) const { return s0 + hs() * static_cast<double>(i); }
  double t(std::size_t j) const { return ht() * static_cast<double>(j); }
  const double* at(std::size_t i, std::size_t j) const { return data.data() + (i * (nt + 1) + j) * dim; }
  double* at(std::size_t i, std::size_t j) { return data.data() + (i * (nt + 1) + j) * dim; }
  Point path(std::size_t i, std::size_t j) const { return Point(at(i, j), at(i, j) + dim); }
};

/// Closed-form strip, one expression per ambient coordinate in (s, t).
class StripMap {
 public:
  StripMap(std::vector<Expression> components, double s0, double s1);
  /// Components separated by ';', e.g. "s*cos(t); s*sin(t)".
  static StripMap parse(std::string_view text, double s0, double s1);

  std::size_t dim() const { return components_.size(); }
  double s0() const { return s0_; }
  double s1() const { return s1_; }
  Point operator()(double s, double t) const;
  StripGrid sample(std::size_t ns, std::size_t nt) const;

 private:
  std::vector<Expression> components_;
  double s0_, s1_;
};

/// Glues b after a along s; a's last column must equal b's first.
StripGrid concatenate(const StripGrid& a, const StripGrid& b);

/// int u^* omega.
double symplectic_area(const StripGrid& u, const PhaseSpace& space);
/// int_0^1 H(t, u(s_i, t)) dt.
double path_integral(const HamiltonianField& h, const StripGrid& u, std::size_t i);
/// int w^* omega, plus int_0^1 H(t, w(s1, t)) dt when h is given.
double action(const StripGrid& w, const PhaseSpace& space, const HamiltonianField* h = nullptr);

struct EnergyValues {
  double energy = 0;     // (1/2) int |du/dtau|^2 + |du/dt - rho X_H(u)|^2
  double geometric = 0;  // int omega(du/dtau, du/dt - rho X_H(u))
};

EnergyValues energy_functional(const StripGrid& u, const HamiltonianField& h, const ElongationProfile& rho);

struct IdentityCheck {
  double lhs = 0;
  double rhs = 0;
  double discrepancy = 0;
};

/// geomE against int u^*omega + rho(T0) int H(u(T0)) - rho(-T0) int H(u(-T0))
/// - int int rho' H(u), on the strip's own [s0, s1] = [-T0, T0].
IdentityCheck energy_identity(const StripGrid& u, const HamiltonianField& h, const ElongationProfile& rho);

/// Applies the forward gauge map node by node.
StripGrid gauge_strip(const HamiltonianField& h, GaugeArgument which, const StripGrid& w, const FlowOptions& opts = {});

/// Dynamical action of the gauge-transformed strip against the geometric
/// action of the original plus c(H; l_a), l_a the transformed base path.
/// The second argument uses -H(1 - t, x) as the dynamical Hamiltonian.
IdentityCheck action_identity(const HamiltonianField& h, GaugeArgument which, const StripGrid& w_prime,
                              const FlowOptions& opts = {});

struct InequalityCheck {
  std::string name;
  double value = 0;
  double bound = 0;
  double slack = 0;  // value - bound for lower bounds, bound - value for upper bounds
  bool holds = false;
};

struct TelescopingReport {
  double action_difference = 0;
  double energy_side = 0;  // geomE + int int rho' H
  double discrepancy = 0;
  EnergyValues energy;
  std::vector<InequalityCheck> inequalities;
  bool pass = false;
};

/// The strip u runs from u(s0) to u(s1); `cap` ends where u starts and the
/// capping disk of the far end is cap # u. The Hamiltonian term enters each
/// end with weight rho(end). Lower action bounds are checked with the
/// non-negative energy E in place of geomE (they are identities for
/// solutions, where the two agree); the rho_K energy bound is checked for
/// geomE.
TelescopingReport verify_action_telescoping(const StripGrid& u, const StripGrid& cap, const HamiltonianField& h,
                                            const ElongationProfile& rho, const HoferNorms& norms, double tol);

}  // namespace torsionlab::hamlab
