#pragma once

// Time-dependent Hamiltonians, their flows and the gauge transformations
// between the geometric and dynamical path spaces.

#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "torsionlab/hamlab/expression.hpp"
#include "torsionlab/hamlab/phase_space.hpp"

namespace torsionlab::hamlab {

using Point = std::vector<double>;

/// Scalar function of (t, x); the common currency of the norm routines.
using ScalarField = std::function<double(double, std::span<const double>)>;

class HamiltonianField {
 public:
  HamiltonianField() = default;
  /// `h` uses the variables of VariableSet::phase(space.coords()).
  HamiltonianField(PhaseSpace space, Expression h);
  static HamiltonianField parse(std::string_view text, const PhaseSpace& space);
  static HamiltonianField zero(const PhaseSpace& space);

  const PhaseSpace& space() const { return space_; }
  const Expression& expression() const { return h_; }
  bool is_zero() const;

  double value(double t, std::span<const double> x) const;
  void gradient(double t, const double* x, double* out) const;
  void vector_field(double t, const double* x, double* out) const;

  struct BatchScratch {
    std::vector<double> work, time, grad;
  };
  /// n points in coordinate-major layout (see PhaseSpace::hamiltonian_vector_batch).
  void vector_field_batch(double t, const double* x, std::size_t n, double* out, BatchScratch& scratch) const;

  /// H(t, x) + shift(t). The flow does not see the shift.
  HamiltonianField with_shift(std::function<double(double)> shift) const;
  /// -H(1 - t, x), generating t -> phi^{1-t} (phi^1)^{-1}.
  HamiltonianField reversed() const;

  ScalarField as_scalar() const;

 private:
  PhaseSpace space_;
  Expression h_;
  std::vector<Expression> grad_;
  std::shared_ptr<const std::function<double(double)>> shift_;
  bool reversed_ = false;
};

struct FlowOptions {
  double max_step = 1e-3;
};

/// phi^{s1} (phi^{s0})^{-1}(x): integrates X_H from time s0 to s1 with
/// classical RK4 and uniform steps no longer than max_step. Throws
/// StepFailure on non-finite states.
Point transport(const HamiltonianField& h, double s0, double s1, Point x, const FlowOptions& opts = {});
/// transport() applied to n points at once, coordinate-major layout, in place.
void transport_batch(const HamiltonianField& h, double s0, double s1, std::vector<double>& points, std::size_t n,
                     const FlowOptions& opts = {});
/// phi^t_H(x).
Point flow(const HamiltonianField& h, double t, Point x, const FlowOptions& opts = {});

/// Which argument of the Lagrangian pair is moved.
enum class GaugeArgument { kFirst, kSecond };

/// Forward gauge map at time t: phi^t (phi^1)^{-1} for the first argument,
/// phi^{1-t} (phi^1)^{-1} for the second.
Point gauge_plus(const HamiltonianField& h, GaugeArgument which, double t, Point x, const FlowOptions& opts = {});
Point gauge_minus(const HamiltonianField& h, GaugeArgument which, double t, Point x, const FlowOptions& opts = {});

/// H-hat(t, x) = -H1(1 - t, x) + H0(t, phi^1_{H1} (phi^{1-t}_{H1})^{-1} x).
class HatHamiltonian {
 public:
  HatHamiltonian(HamiltonianField h0, HamiltonianField h1, FlowOptions opts = {});
  double operator()(double t, std::span<const double> x) const;
  /// n points in coordinate-major layout.
  void evaluate_batch(double t, const std::vector<double>& points, std::size_t n, double* out) const;
  ScalarField as_scalar() const;

  const HamiltonianField& first() const { return h0_; }
  const HamiltonianField& second() const { return h1_; }

 private:
  HamiltonianField h0_, h1_;
  FlowOptions opts_;
};

/// Subtracts the spatial mean at every t. Requires a compact space,
/// otherwise throws NonCompact.
HamiltonianField normalize(const HamiltonianField& h, std::size_t quadrature_nodes = 32);

/// Mean of f(t, .) over the compact space by a product rule: Gauss-Legendre
/// in height and uniform in longitude on each sphere factor.
double spatial_mean(const ScalarField& f, const PhaseSpace& space, double t, std::size_t nodes = 32);

}  // namespace torsionlab::hamlab
