#include "torsionlab/hamlab/hamiltonian.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

#include "torsionlab/errors.hpp"
#include "torsionlab/hamlab/quadrature.hpp"

namespace torsionlab::hamlab {

namespace {

constexpr std::size_t kMaxCoords = 31;

// [t, x1, ..., xm] on the stack.
struct Args {
  std::array<double, kMaxCoords + 1> v{};
  Args(double t, const double* x, std::size_t n) {
    v[0] = t;
    std::copy(x, x + n, v.begin() + 1);
  }
  std::span<const double> span(std::size_t n) const { return {v.data(), n + 1}; }
};

}  // namespace

HamiltonianField::HamiltonianField(PhaseSpace space, Expression h) : space_(std::move(space)), h_(std::move(h)) {
  if (space_.coords() > kMaxCoords) throw InvalidArgument("phase space has too many coordinates");
  if (h_.arity() != space_.coords() + 1) throw InvalidArgument("Hamiltonian arity does not match the phase space");
  for (std::size_t i = 1; i <= space_.coords(); ++i) grad_.push_back(h_.derivative(i));
}

HamiltonianField HamiltonianField::parse(std::string_view text, const PhaseSpace& space) {
  return HamiltonianField(space, Expression::parse(text, VariableSet::phase(space.coords())));
}

HamiltonianField HamiltonianField::zero(const PhaseSpace& space) {
  return HamiltonianField(space, Expression::constant(0, space.coords() + 1));
}

bool HamiltonianField::is_zero() const { return h_.is_constant() && h_.constant_value() == 0 && !shift_; }

double HamiltonianField::value(double t, std::span<const double> x) const {
  const double tau = reversed_ ? 1 - t : t;
  Args a(tau, x.data(), space_.coords());
  double v = h_(a.span(space_.coords()));
  if (reversed_) v = -v;
  if (shift_) v += (*shift_)(t);
  return v;
}

void HamiltonianField::gradient(double t, const double* x, double* out) const {
  const double tau = reversed_ ? 1 - t : t;
  Args a(tau, x, space_.coords());
  const auto s = a.span(space_.coords());
  for (std::size_t i = 0; i < grad_.size(); ++i) out[i] = reversed_ ? -grad_[i](s) : grad_[i](s);
}

void HamiltonianField::vector_field(double t, const double* x, double* out) const {
  std::array<double, kMaxCoords> g{};
  gradient(t, x, g.data());
  space_.hamiltonian_vector(x, g.data(), out);
}

void HamiltonianField::vector_field_batch(double t, const double* x, std::size_t n, double* out,
                                          BatchScratch& scratch) const {
  const std::size_t m = space_.coords();
  scratch.time.assign(n, reversed_ ? 1 - t : t);
  scratch.grad.resize(m * n);
  std::array<const double*, kMaxCoords + 1> vars{};
  vars[0] = scratch.time.data();
  for (std::size_t k = 0; k < m; ++k) vars[k + 1] = x + k * n;
  const std::span<const double* const> vs(vars.data(), m + 1);
  for (std::size_t k = 0; k < m; ++k) {
    double* g = scratch.grad.data() + k * n;
    grad_[k].evaluate_batch(vs, n, g, scratch.work);
    if (reversed_)
      for (std::size_t p = 0; p < n; ++p) g[p] = -g[p];
  }
  space_.hamiltonian_vector_batch(x, scratch.grad.data(), out, n);
}

HamiltonianField HamiltonianField::with_shift(std::function<double(double)> shift) const {
  HamiltonianField out = *this;
  if (shift_) {
    auto prev = shift_;
    out.shift_ = std::make_shared<const std::function<double(double)>>(
        [prev, shift = std::move(shift)](double t) { return (*prev)(t) + shift(t); });
  } else {
    out.shift_ = std::make_shared<const std::function<double(double)>>(std::move(shift));
  }
  return out;
}

HamiltonianField HamiltonianField::reversed() const {
  HamiltonianField out = *this;
  out.reversed_ = !reversed_;
  if (shift_) {
    auto prev = shift_;
    out.shift_ = std::make_shared<const std::function<double(double)>>([prev](double t) { return -(*prev)(1 - t); });
  }
  return out;
}

ScalarField HamiltonianField::as_scalar() const {
  return [self = *this](double t, std::span<const double> x) { return self.value(t, x); };
}

// ---------------------------------------------------------------------------

void transport_batch(const HamiltonianField& h, double s0, double s1, std::vector<double>& points, std::size_t n,
                     const FlowOptions& opts) {
  const std::size_t m = h.space().coords();
  if (points.size() != m * n) throw InvalidArgument("point batch has the wrong size");
  if (!(opts.max_step > 0)) throw InvalidArgument("flow step must be positive");
  if (s0 == s1 || h.is_zero() || n == 0) return;
  const double span = s1 - s0;
  const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(span) / opts.max_step - 1e-12)));
  const double dt = span / static_cast<double>(steps);
  bool on_sphere = false;
  for (const auto& f : h.space().factors())
    if (f.kind == PhaseFactor::Kind::kSphere) on_sphere = true;

  HamiltonianField::BatchScratch scratch;
  boost::numeric::odeint::runge_kutta4<std::vector<double>> stepper;
  auto system = [&](const std::vector<double>& state, std::vector<double>& dxdt, double t) {
    h.vector_field_batch(t, state.data(), n, dxdt.data(), scratch);
  };
  Point single(m);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = s0 + dt * static_cast<double>(k);
    stepper.do_step(system, points, t, dt);
    if (on_sphere) {
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t c = 0; c < m; ++c) single[c] = points[c * n + p];
        h.space().project(single.data());
        for (std::size_t c = 0; c < m; ++c) points[c * n + p] = single[c];
      }
    }
    for (double v : points)
      if (!std::isfinite(v)) throw StepFailure("flow left the finite range near t = " + std::to_string(t + dt));
  }
}

Point transport(const HamiltonianField& h, double s0, double s1, Point x, const FlowOptions& opts) {
  if (x.size() != h.space().coords()) throw InvalidArgument("point has the wrong number of coordinates");
  transport_batch(h, s0, s1, x, 1, opts);
  return x;
}

Point flow(const HamiltonianField& h, double t, Point x, const FlowOptions& opts) {
  return transport(h, 0, t, std::move(x), opts);
}

Point gauge_plus(const HamiltonianField& h, GaugeArgument which, double t, Point x, const FlowOptions& opts) {
  const double target = which == GaugeArgument::kFirst ? t : 1 - t;
  return transport(h, 1, target, std::move(x), opts);
}

Point gauge_minus(const HamiltonianField& h, GaugeArgument which, double t, Point x, const FlowOptions& opts) {
  const double source = which == GaugeArgument::kFirst ? t : 1 - t;
  return transport(h, source, 1, std::move(x), opts);
}

HatHamiltonian::HatHamiltonian(HamiltonianField h0, HamiltonianField h1, FlowOptions opts)
    : h0_(std::move(h0)), h1_(std::move(h1)), opts_(opts) {
  if (h0_.space().coords() != h1_.space().coords()) throw InvalidArgument("H0 and H1 live on different spaces");
}

double HatHamiltonian::operator()(double t, std::span<const double> x) const {
  Point moved = transport(h1_, 1 - t, 1, Point(x.begin(), x.end()), opts_);
  return -h1_.value(1 - t, x) + h0_.value(t, moved);
}

void HatHamiltonian::evaluate_batch(double t, const std::vector<double>& points, std::size_t n, double* out) const {
  const std::size_t m = h0_.space().coords();
  std::vector<double> moved = points;
  transport_batch(h1_, 1 - t, 1, moved, n, opts_);
  Point x(m), y(m);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < m; ++c) {
      x[c] = points[c * n + p];
      y[c] = moved[c * n + p];
    }
    out[p] = -h1_.value(1 - t, x) + h0_.value(t, y);
  }
}

ScalarField HatHamiltonian::as_scalar() const {
  return [self = *this](double t, std::span<const double> x) { return self(t, x); };
}

// ---------------------------------------------------------------------------

double spatial_mean(const ScalarField& f, const PhaseSpace& space, double t, std::size_t nodes) {
  if (!space.compact()) throw NonCompact("spatial mean needs a compact phase space");
  const auto& factors = space.factors();
  const QuadratureRule height = gauss_legendre(nodes, -1, 1);
  const std::size_t longitudes = 2 * nodes;
  const std::size_t per_factor = nodes * longitudes;
  std::size_t total = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) total *= per_factor;

  Point x(space.coords());
  double sum = 0, weight_sum = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    double w = 1;
    for (const auto& fac : factors) {
      const std::size_t idx = rest % per_factor;
      rest /= per_factor;
      const std::size_t zi = idx / longitudes, li = idx % longitudes;
      const double z = height.nodes[zi];
      const double theta = 2 * std::numbers::pi * (static_cast<double>(li) + 0.5) / static_cast<double>(longitudes);
      const double rho = std::sqrt(std::max(0.0, 1 - z * z));
      x[fac.first] = fac.radius * rho * std::cos(theta);
      x[fac.first + 1] = fac.radius * rho * std::sin(theta);
      x[fac.first + 2] = fac.radius * z;
      w *= height.weights[zi];
    }
    sum += w * f(t, x);
    weight_sum += w;
  }
  return sum / weight_sum;
}

HamiltonianField normalize(const HamiltonianField& h, std::size_t quadrature_nodes) {
  if (!h.space().compact())
    throw NonCompact("normalization needs compact factors; choose the base path so that c(H; l_a) = 0 instead");
  ScalarField f = h.as_scalar();
  PhaseSpace space = h.space();
  return h.with_shift([f, space, quadrature_nodes](double t) { return -spatial_mean(f, space, t, quadrature_nodes); });
}

}  // namespace torsionlab::hamlab
