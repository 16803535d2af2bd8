#include <cmath>
#include <numbers>

#include "doctest.h"
#include "torsionlab/errors.hpp"
#include "torsionlab/hamlab/hamiltonian.hpp"
#include "torsionlab/hamlab/hofer.hpp"
#include "torsionlab/hamlab/profile.hpp"
#include "torsionlab/hamlab/quadrature.hpp"
#include "torsionlab/hamlab/strip.hpp"
#include "torsionlab/hamlab/suites.hpp"

using namespace torsionlab;
using namespace torsionlab::hamlab;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

HamiltonianField plane_h(const char* text) { return HamiltonianField::parse(text, PhaseSpace::plane()); }

double dist(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("expression parsing and evaluation") {
  const auto vars = VariableSet::phase(2);
  const auto e = Expression::parse("2*x^2 - sin(pi*y) + t/4", vars);
  const double p[] = {1.0, 3.0, 0.5};
  CHECK(e(p) == Approx(18.0 - 1.0 + 0.25));
  CHECK(Expression::parse("3 + 4", vars).is_constant());
  CHECK_THROWS_AS(Expression::parse("x +", vars), ParseError);
  CHECK_THROWS_AS(Expression::parse("w", vars), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(x)", vars), ParseError);
}

TEST_CASE("symbolic derivatives match central differences") {
  const auto vars = VariableSet::phase(2);
  const char* texts[] = {"sin(x)*exp(y) + t*x^2/(1 + y^2)", "sqrt(1 + x^2 + y^2)*cos(t*y)",
                         "tanh(x - y) + log(2 + sin(x*y))", "cosh(x/3)^3 - sinh(y)*tan(x/5)"};
  for (const char* text : texts) {
    const auto e = Expression::parse(text, vars);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto d = e.derivative(k);
      double p[] = {0.3, -0.7, 1.1};
      const double h = 1e-5;
      double a[3] = {p[0], p[1], p[2]}, b[3] = {p[0], p[1], p[2]};
      a[k] += h;
      b[k] -= h;
      CHECK(d(p) == Approx((e(a) - e(b)) / (2 * h)).epsilon(1e-7));
    }
  }
}

TEST_CASE("batch evaluation agrees with pointwise evaluation") {
  const auto vars = VariableSet::phase(2);
  const auto e = Expression::parse("sin(x)*cos(y) + t*x*y", vars);
  const std::vector<double> t{0.1, 0.2, 0.3}, x{1, 2, 3}, y{-1, 0.5, 4};
  const double* cols[] = {t.data(), x.data(), y.data()};
  std::vector<double> out(3), work;
  e.evaluate_batch(cols, 3, out.data(), work);
  for (std::size_t i = 0; i < 3; ++i) {
    const double p[] = {t[i], x[i], y[i]};
    CHECK(out[i] == Approx(e(p)).epsilon(1e-14));
  }
}

TEST_CASE("quadrature rules") {
  const auto g = gauss_legendre(5, 0, 2);
  double s = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 9);
  CHECK(s == Approx(std::pow(2.0, 10) / 10).epsilon(1e-12));
  const auto tr = trapezoid(4);
  CHECK(tr.nodes.size() == 5);
  CHECK(tr.weights[0] == Approx(0.125));
}

TEST_CASE("elongation profiles") {
  const auto plus = ElongationProfile::plus();
  const auto minus = ElongationProfile::minus();
  const auto fam = ElongationProfile::family(2);
  for (double tau = -3; tau <= 3; tau += 0.01) {
    CHECK(plus(tau) + minus(tau) == Approx(1.0));
    CHECK(plus.derivative(tau) >= -1e-15);
    CHECK(fam(tau) >= -1e-15);
    CHECK(fam(tau) <= 1 + 1e-15);
    const double h = 1e-6;
    CHECK(plus.derivative(tau) == Approx((plus(tau + h) - plus(tau - h)) / (2 * h)).epsilon(1e-6));
    CHECK(fam.derivative(tau) == Approx((fam(tau + h) - fam(tau - h)) / (2 * h)).epsilon(1e-6));
  }
  CHECK(plus(-0.5) == 0);
  CHECK(plus(1.5) == 1);
  CHECK(fam(2.5) == 0);
  CHECK(fam(-2.5) == 0);
  CHECK(fam(0.5) == 1);
  CHECK(fam(-1) == 1);
  const auto zero = ElongationProfile::family(0);
  for (double tau = -3; tau <= 3; tau += 0.25) CHECK(zero(tau) == 0);
  CHECK(ElongationProfile::parse("K=2").K() == 2);
  CHECK(ElongationProfile::family(0.5)(0) == Approx(0.5 * ElongationProfile::family(1)(0)));
}

TEST_CASE("phase spaces") {
  const auto s = PhaseSpace::sphere(4 * kPi);
  CHECK(s.factors()[0].radius == Approx(1.0));
  CHECK(s.compact());
  CHECK_FALSE(PhaseSpace::plane().compact());
  const auto p = PhaseSpace::parse("R2*S2:1");
  CHECK(p.coords() == 5);
  CHECK_THROWS_AS(PhaseSpace::parse("T2"), ParseError);
}

TEST_CASE("rotation flow direction") {
  const auto h = plane_h("(x^2 + y^2)/2");
  for (double t : {0.3, 1.0, 2.5}) {
    const auto p = flow(h, t, {1.0, 0.0});
    // dH = omega(X_H, .) gives X_H = (y, -x): clockwise rotation.
    CHECK(p[0] == Approx(std::cos(t)).epsilon(1e-10));
    CHECK(p[1] == Approx(-std::sin(t)).epsilon(1e-10));
  }
  const auto c = flow(plane_h("7"), 1.0, {0.4, -2.0});
  CHECK(c == Point{0.4, -2.0});
}

TEST_CASE("height flow on a sphere rotates with period 2 pi r") {
  const double area = 3.0;
  const auto space = PhaseSpace::sphere(area);
  const double r = space.factors()[0].radius;
  const auto h = HamiltonianField::parse("z", space);
  const Point start{r * std::sqrt(0.75), 0.0, r * 0.5};
  const auto back = flow(h, 2 * kPi * r, start, {1e-3});
  CHECK(dist(back, start) < 1e-9);
  const auto quarter = flow(h, 0.5 * kPi * r, start, {1e-3});
  CHECK(quarter[2] == Approx(start[2]).epsilon(1e-10));
  CHECK(std::abs(quarter[0]) < 1e-9);
}

TEST_CASE("flows are symplectic") {
  const auto h = plane_h("x^4/4 + sin(y)*x + t*y^2");
  const Point p{0.3, -0.4};
  const double eps = 1e-6;
  auto f = [&](double dx, double dy) { return flow(h, 0.8, {p[0] + dx, p[1] + dy}); };
  const auto fx1 = f(eps, 0), fx0 = f(-eps, 0), fy1 = f(0, eps), fy0 = f(0, -eps);
  const double a = (fx1[0] - fx0[0]) / (2 * eps), b = (fy1[0] - fy0[0]) / (2 * eps);
  const double c = (fx1[1] - fx0[1]) / (2 * eps), d = (fy1[1] - fy0[1]) / (2 * eps);
  CHECK(a * d - b * c == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("hofer norms") {
  HoferSampler sampler;
  sampler.box = {{-kPi, kPi}};
  const auto sx = hofer_norms(plane_h("sin(x)"), sampler);
  CHECK(sx.e_minus == Approx(1.0).epsilon(1e-10));
  CHECK(sx.e_plus == Approx(1.0).epsilon(1e-10));
  CHECK(sx.norm == Approx(2.0).epsilon(1e-10));

  const auto th = hofer_norms(plane_h("t*cos(x)*sin(y)"), sampler);
  CHECK(th.norm == Approx(1.0).epsilon(1e-10));

  // Constant H: E^- = -c and E^+ = c, so the norm vanishes.
  const auto c = hofer_norms(plane_h("3/2"), sampler);
  CHECK(c.e_minus == Approx(-1.5));
  CHECK(c.e_plus == Approx(1.5));
  CHECK(c.norm == Approx(0.0));

  HoferSampler none;
  CHECK_THROWS_AS(hofer_norms(plane_h("x"), none), UnboundedDomain);

  const auto sphere = PhaseSpace::sphere(2.0);
  const double r = sphere.factors()[0].radius;
  const auto z = hofer_norms(HamiltonianField::parse("z", sphere), HoferSampler{});
  CHECK(z.e_minus == Approx(r).epsilon(1e-10));
  CHECK(z.e_plus == Approx(r).epsilon(1e-10));
}

TEST_CASE("normalize") {
  const auto sphere = PhaseSpace::sphere(1.0);
  const auto c = normalize(HamiltonianField::parse("5", sphere));
  const double p[] = {0.0, 0.0, sphere.factors()[0].radius};
  CHECK(std::abs(c.value(0.3, p)) < 1e-12);
  const auto z = normalize(HamiltonianField::parse("z", sphere));
  CHECK(z.value(0.3, p) == Approx(p[2]).epsilon(1e-12));
  const auto zz = normalize(HamiltonianField::parse("z^2 + t", sphere));
  const double r = sphere.factors()[0].radius;
  CHECK(zz.value(0.5, p) == Approx(r * r - r * r / 3).epsilon(1e-10));
  CHECK_THROWS_AS(normalize(plane_h("x")), NonCompact);
}

TEST_CASE("hat hamiltonian trivial cases") {
  const auto h0 = plane_h("sin(x + t)*cos(y)");
  const auto h1 = plane_h("cos(x)*(1 + t) + y/3");
  const auto zero = HamiltonianField::zero(PhaseSpace::plane());
  const HatHamiltonian only_first(h0, zero);
  const HatHamiltonian only_second(zero, h1);
  for (double t : {0.0, 0.3, 0.9}) {
    const double x[] = {0.7, -1.2};
    CHECK(only_first(t, x) == Approx(h0.value(t, x)).epsilon(1e-12));
    CHECK(only_second(t, x) == Approx(-h1.value(1 - t, x)).epsilon(1e-12));
  }
  HoferSampler sampler;
  sampler.box = {{0, 2 * kPi}};
  const auto a = hofer_norms(only_second.as_scalar(), PhaseSpace::plane(), sampler);
  const auto b = hofer_norms(h1, sampler);
  CHECK(a.e_minus == Approx(b.e_plus).epsilon(1e-8));
  CHECK(a.e_plus == Approx(b.e_minus).epsilon(1e-8));
}

TEST_CASE("hat hamiltonian batch evaluation") {
  const HatHamiltonian hat(plane_h("sin(x)*cos(y + t)"), plane_h("cos(x - y)*(1 + t)"));
  const std::vector<double> pts{0.1, 1.2, -0.5, 0.4, 2.0, -1.0};  // 3 points, coordinate major
  std::vector<double> out(3);
  hat.evaluate_batch(0.4, pts, 3, out.data());
  for (std::size_t i = 0; i < 3; ++i) {
    const double x[] = {pts[i], pts[3 + i]};
    CHECK(out[i] == Approx(hat(0.4, x)).epsilon(1e-10));
  }
}

TEST_CASE("gauge maps") {
  const auto h = plane_h("x^2/2 + x*y/3 + sin(t)*y");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 20; ++i) {
    const Point x{u(rng), u(rng)};
    const double t = 0.5 * (u(rng) + 1);
    for (auto which : {GaugeArgument::kFirst, GaugeArgument::kSecond}) {
      const auto back = gauge_minus(h, which, t, gauge_plus(h, which, t, x));
      CHECK(dist(back, x) < 1e-8);
    }
  }
  const auto zero = HamiltonianField::zero(PhaseSpace::plane());
  CHECK(gauge_plus(zero, GaugeArgument::kFirst, 0.3, {1, 2}) == Point{1, 2});
  // At t = 1 the first-argument gauge is the identity.
  CHECK(dist(gauge_plus(h, GaugeArgument::kFirst, 1.0, {0.2, 0.1}), {0.2, 0.1}) < 1e-14);
}

TEST_CASE("action examples") {
  const auto space = PhaseSpace::plane();
  const auto constant = StripMap::parse("1; 2", 0, 1).sample(8, 8);
  CHECK(action(constant, space) == 0);
  const auto rect = StripMap::parse("3*s; 2*t", 0, 1).sample(16, 16);
  CHECK(action(rect, space) == Approx(6.0).epsilon(1e-12));
  const auto c = plane_h("5/2");
  CHECK(action(rect, space, &c) == Approx(8.5).epsilon(1e-12));
}

TEST_CASE("symplectic area is additive under concatenation") {
  const auto space = PhaseSpace::plane();
  const auto a = StripMap::parse("s*cos(t); s*sin(t) + s^2", 0, 1).sample(20, 20);
  const auto b = StripMap::parse("s*cos(t); s*sin(t) + s^2", 1, 2).sample(20, 20);
  CHECK(symplectic_area(concatenate(a, b), space) ==
        Approx(symplectic_area(a, space) + symplectic_area(b, space)).epsilon(1e-14));
}

TEST_CASE("energy functional") {
  const auto zero = HamiltonianField::zero(PhaseSpace::plane());
  const auto constant = StripMap::parse("1; 2", -1, 1).sample(8, 8);
  const auto e0 = energy_functional(constant, zero, ElongationProfile::plus());
  CHECK(e0.energy == 0);
  CHECK(e0.geometric == 0);

  // z = exp(s + i t) is holomorphic, so E = geomE = area.
  const auto hol = StripMap::parse("exp(s)*cos(t); exp(s)*sin(t)", -1, 0).sample(256, 256);
  const auto e = energy_functional(hol, zero, ElongationProfile::plus());
  const double area = 0.5 * (1 - std::exp(-2.0));
  CHECK(e.geometric == Approx(area).epsilon(1e-4));
  CHECK(e.energy == Approx(area).epsilon(1e-4));
}

TEST_CASE("energy identity") {
  const auto u = StripMap::parse("s + sin(t)/(1 + s^2); cos(t)*s/3 + t", -3, 3).sample(600, 100);
  // Constant H cancels up to the quadrature of rho'.
  const auto c = energy_identity(u, plane_h("2"), ElongationProfile::plus());
  CHECK(c.discrepancy < 1e-6);
  const auto z = energy_identity(u, HamiltonianField::zero(PhaseSpace::plane()), ElongationProfile::family(2));
  CHECK(z.discrepancy < 1e-12);
  CHECK(z.lhs == Approx(symplectic_area(u, PhaseSpace::plane())).epsilon(1e-12));
  const auto q = energy_identity(u, plane_h("x^2/2 - x*y + y/5"), ElongationProfile::family(2));
  CHECK(q.discrepancy < 1e-3);
}

TEST_CASE("action identity") {
  const auto w = StripMap::parse("s + t/2; s*t - 1/3", 0, 1).sample(64, 64);
  const auto zero = HamiltonianField::zero(PhaseSpace::plane());
  CHECK(action_identity(zero, GaugeArgument::kFirst, w).discrepancy < 1e-14);
  const auto lin = plane_h("2*x - y/3");
  for (auto which : {GaugeArgument::kFirst, GaugeArgument::kSecond})
    CHECK(action_identity(lin, which, w).discrepancy < 1e-4);
}

TEST_CASE("action telescoping") {
  const auto space = PhaseSpace::plane();
  const auto u = StripMap::parse("s/4 + cos(t)/(1 + s^2); sin(t)/(1 + s^2)", -3, 3).sample(240, 64);
  // Cap: radial contraction of the starting path to the origin.
  StripGrid c2(-4, -3, 40, 64, 2);
  for (std::size_t i = 0; i <= c2.ns; ++i)
    for (std::size_t j = 0; j <= c2.nt; ++j) {
      const double lam = static_cast<double>(i) / static_cast<double>(c2.ns);
      for (std::size_t k = 0; k < 2; ++k) c2.at(i, j)[k] = lam * u.at(0, j)[k];
    }
  HoferSampler sampler;
  sampler.box = {{-3, 3}};
  const auto zero = HamiltonianField::zero(space);
  const auto r0 = verify_action_telescoping(u, c2, zero, ElongationProfile::family(2), hofer_norms(zero, sampler), 1e-9);
  CHECK(r0.discrepancy < 1e-12);
  CHECK(r0.pass);
  const auto h = plane_h("3/4");
  const auto r1 = verify_action_telescoping(u, c2, h, ElongationProfile::plus(), hofer_norms(h, sampler), 1e-6);
  CHECK(r1.discrepancy < 1e-6);
  CHECK(r1.pass);
  const auto q = plane_h("x^2/3 + x*y/5 - y");
  const auto r2 = verify_action_telescoping(u, c2, q, ElongationProfile::family(2), hofer_norms(q, sampler), 1e-3);
  CHECK(r2.pass);
  for (const auto& ineq : r2.inequalities) CHECK(ineq.slack >= -1e-3);
}

TEST_CASE("fitted order") {
  const std::vector<std::size_t> res{64, 128, 256};
  const std::vector<double> err{3.0 / (64.0 * 64), 3.0 / (128.0 * 128), 3.0 / (256.0 * 256)};
  CHECK(*fitted_order(res, err) == Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(fitted_order({256}, {1e-7}).has_value());
}

TEST_CASE("suites are deterministic and independent of the thread count") {
  SuiteOptions o;
  o.seed = 5;
  o.cases = 6;
  o.threads = 1;
  const auto a = to_json(run_suite(Suite::kHofer, o)).dump();
  o.threads = 3;
  const auto b = to_json(run_suite(Suite::kHofer, o)).dump();
  CHECK(a == b);
  o.seed = 6;
  CHECK(to_json(run_suite(Suite::kHofer, o)).dump() != a);

  auto g1 = case_generator(9, Suite::kEnergy, 4), g2 = case_generator(9, Suite::kEnergy, 4);
  CHECK(g1() == g2());
  CHECK(case_generator(9, Suite::kEnergy, 4)() != case_generator(9, Suite::kEnergy, 5)());
}

TEST_CASE("small suite runs") {
  SuiteOptions o;
  o.seed = 1;
  o.cases = 2;
  o.resolution = 64;
  const auto e = run_suite(Suite::kEnergy, o);
  CHECK(e.resolutions == std::vector<std::size_t>{16, 32, 64});
  REQUIRE(e.convergence_order.has_value());
  CHECK(*e.convergence_order == Approx(2.0).epsilon(0.15));
  const auto j = to_json(e);
  CHECK(j.contains("max_discrepancy"));
  CHECK(j["cases"].size() == 4);  // two profiles per strip

  o.cases = 3;
  o.convergence = false;
  const auto hofer = run_suite(Suite::kHofer, o);
  CHECK(hofer.pass);
  CHECK(hofer.max_discrepancy < 1e-9);

  CHECK(parse_suite("actiondiff") == Suite::kActionDiff);
  CHECK_THROWS(parse_suite("bogus"));
}

TEST_CASE("random families have the documented shapes") {
  auto rng = case_generator(3, Suite::kActionDiff, 0);
  CHECK(random_quadratic(rng, true).expression().derivative(1).derivative(1).is_constant());
  const auto strip = random_decaying_strip(rng, 5);
  CHECK(strip.s0() == -5);
  CHECK(strip.dim() == 2);
  const auto per = random_periodic(rng);
  const double a[] = {0.3, 1.1}, b[] = {0.3 + 2 * kPi, 1.1 - 2 * kPi};
  CHECK(per.value(0.2, a) == Approx(per.value(0.2, b)).epsilon(1e-12));
}
