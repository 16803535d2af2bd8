#include "torsionlab/hamlab/strip.hpp"

#include <array>
#include <cmath>

#include "torsionlab/errors.hpp"

namespace torsionlab::hamlab {

StripGrid::StripGrid(double s0_, double s1_, std::size_t ns_, std::size_t nt_, std::size_t dim_)
    : s0(s0_), s1(s1_), ns(ns_), nt(nt_), dim(dim_), data((ns_ + 1) * (nt_ + 1) * dim_, 0.0) {
  if (ns == 0 || nt == 0) throw InvalidArgument("strip grid needs at least one cell in each direction");
  if (!(s1 > s0)) throw InvalidArgument("strip grid needs s1 > s0");
}

StripMap::StripMap(std::vector<Expression> components, double s0, double s1)
    : components_(std::move(components)), s0_(s0), s1_(s1) {
  if (components_.empty()) throw InvalidArgument("strip needs at least one component");
  if (!(s1 > s0)) throw InvalidArgument("strip needs s1 > s0");
}

StripMap StripMap::parse(std::string_view text, double s0, double s1) {
  std::vector<Expression> comps;
  const VariableSet vars = VariableSet::strip();
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(';', start);
    comps.push_back(Expression::parse(text.substr(start, end == std::string_view::npos ? end : end - start), vars));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return StripMap(std::move(comps), s0, s1);
}

Point StripMap::operator()(double s, double t) const {
  const std::array<double, 2> v{s, t};
  Point p;
  for (const auto& c : components_) p.push_back(c(v));
  return p;
}

StripGrid StripMap::sample(std::size_t ns, std::size_t nt) const {
  StripGrid g(s0_, s1_, ns, nt, dim());
  for (std::size_t i = 0; i <= ns; ++i) {
    for (std::size_t j = 0; j <= nt; ++j) {
      const std::array<double, 2> v{g.s(i), g.t(j)};
      double* out = g.at(i, j);
      for (std::size_t k = 0; k < components_.size(); ++k) out[k] = components_[k](v);
    }
  }
  return g;
}

StripGrid concatenate(const StripGrid& a, const StripGrid& b) {
  if (a.nt != b.nt || a.dim != b.dim) throw InvalidArgument("concatenated strips need matching grids");
  if (std::abs(a.hs() - b.hs()) > 1e-12 * std::max(1.0, a.hs())) throw InvalidArgument("concatenated strips need equal spacing");
  for (std::size_t j = 0; j <= a.nt; ++j)
    for (std::size_t k = 0; k < a.dim; ++k)
      if (std::abs(a.at(a.ns, j)[k] - b.at(0, j)[k]) > 1e-12)
        throw InvalidArgument("concatenated strips do not share the gluing path");
  StripGrid out(a.s0, a.s1 + (b.s1 - b.s0), a.ns + b.ns, a.nt, a.dim);
  for (std::size_t i = 0; i <= a.ns; ++i)
    for (std::size_t j = 0; j <= a.nt; ++j) std::copy(a.at(i, j), a.at(i, j) + a.dim, out.at(i, j));
  for (std::size_t i = 1; i <= b.ns; ++i)
    for (std::size_t j = 0; j <= b.nt; ++j) std::copy(b.at(i, j), b.at(i, j) + b.dim, out.at(a.ns + i, j));
  return out;
}

namespace {

constexpr std::size_t kMaxDim = 31;

struct Cell {
  std::array<double, kMaxDim> ds{}, dt{}, center{};
};

void cell_at(const StripGrid& u, std::size_t i, std::size_t j, Cell& c) {
  const double* a = u.at(i, j);
  const double* b = u.at(i + 1, j);
  const double* e = u.at(i, j + 1);
  const double* d = u.at(i + 1, j + 1);
  const double hs = u.hs(), ht = u.ht();
  for (std::size_t k = 0; k < u.dim; ++k) {
    c.ds[k] = 0.5 * ((b[k] - a[k]) + (d[k] - e[k])) / hs;
    c.dt[k] = 0.5 * ((e[k] - a[k]) + (d[k] - b[k])) / ht;
    c.center[k] = 0.25 * (a[k] + b[k] + e[k] + d[k]);
  }
}

void check_dim(const StripGrid& u, const PhaseSpace& space) {
  if (u.dim != space.coords()) throw InvalidArgument("strip dimension does not match the phase space");
  if (u.dim > kMaxDim) throw InvalidArgument("strip dimension too large");
}

}  // namespace

double symplectic_area(const StripGrid& u, const PhaseSpace& space) {
  check_dim(u, space);
  Cell c;
  double sum = 0;
  for (std::size_t i = 0; i < u.ns; ++i) {
    for (std::size_t j = 0; j < u.nt; ++j) {
      cell_at(u, i, j, c);
      sum += space.omega(c.center.data(), c.ds.data(), c.dt.data());
    }
  }
  return sum * u.hs() * u.ht();
}

double path_integral(const HamiltonianField& h, const StripGrid& u, std::size_t i) {
  check_dim(u, h.space());
  double sum = 0;
  for (std::size_t j = 0; j <= u.nt; ++j) {
    const double w = (j == 0 || j == u.nt) ? 0.5 : 1.0;
    sum += w * h.value(u.t(j), std::span<const double>(u.at(i, j), u.dim));
  }
  return sum * u.ht();
}

double action(const StripGrid& w, const PhaseSpace& space, const HamiltonianField* h) {
  double a = symplectic_area(w, space);
  if (h) a += path_integral(*h, w, w.ns);
  return a;
}

EnergyValues energy_functional(const StripGrid& u, const HamiltonianField& h, const ElongationProfile& rho) {
  const PhaseSpace& space = h.space();
  check_dim(u, space);
  Cell c;
  std::array<double, kMaxDim> xh{}, v{};
  EnergyValues out;
  for (std::size_t i = 0; i < u.ns; ++i) {
    const double tau = u.s0 + u.hs() * (static_cast<double>(i) + 0.5);
    const double r = rho(tau);
    for (std::size_t j = 0; j < u.nt; ++j) {
      const double t = u.ht() * (static_cast<double>(j) + 0.5);
      cell_at(u, i, j, c);
      h.vector_field(t, c.center.data(), xh.data());
      double e = 0;
      for (std::size_t k = 0; k < u.dim; ++k) {
        v[k] = c.dt[k] - r * xh[k];
        e += c.ds[k] * c.ds[k] + v[k] * v[k];
      }
      out.energy += 0.5 * e;
      out.geometric += space.omega(c.center.data(), c.ds.data(), v.data());
    }
  }
  const double area = u.hs() * u.ht();
  out.energy *= area;
  out.geometric *= area;
  return out;
}

namespace {

// Both t-integrals below use the edge midpoints that the energy integrand
// samples; the s-direction uses the trapezoid rule at the nodes.
double edge_path_integral(const HamiltonianField& h, const StripGrid& u, std::size_t i) {
  std::array<double, kMaxDim> mid{};
  double sum = 0;
  for (std::size_t j = 0; j < u.nt; ++j) {
    const double *a = u.at(i, j), *b = u.at(i, j + 1);
    for (std::size_t k = 0; k < u.dim; ++k) mid[k] = 0.5 * (a[k] + b[k]);
    sum += h.value(u.ht() * (static_cast<double>(j) + 0.5), std::span<const double>(mid.data(), u.dim));
  }
  return sum * u.ht();
}

// int int rho'(tau) H(t, u)
double profile_term(const StripGrid& u, const HamiltonianField& h, const ElongationProfile& rho) {
  double sum = 0;
  for (std::size_t i = 0; i <= u.ns; ++i) {
    const double dr = rho.derivative(u.s(i));
    if (dr == 0) continue;
    const double wi = (i == 0 || i == u.ns) ? 0.5 : 1.0;
    sum += wi * dr * edge_path_integral(h, u, i);
  }
  return sum * u.hs();
}

}  // namespace

IdentityCheck energy_identity(const StripGrid& u, const HamiltonianField& h, const ElongationProfile& rho) {
  IdentityCheck out;
  out.lhs = energy_functional(u, h, rho).geometric;
  out.rhs = symplectic_area(u, h.space()) + rho(u.s1) * edge_path_integral(h, u, u.ns) -
            rho(u.s0) * edge_path_integral(h, u, 0) - profile_term(u, h, rho);
  out.discrepancy = std::abs(out.lhs - out.rhs);
  return out;
}

StripGrid gauge_strip(const HamiltonianField& h, GaugeArgument which, const StripGrid& w, const FlowOptions& opts) {
  check_dim(w, h.space());
  StripGrid out = w;
  const std::size_t n = w.ns + 1, m = w.dim;
  std::vector<double> row(n * m);
  for (std::size_t j = 0; j <= w.nt; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < m; ++k) row[k * n + i] = w.at(i, j)[k];
    const double target = which == GaugeArgument::kFirst ? w.t(j) : 1 - w.t(j);
    transport_batch(h, 1, target, row, n, opts);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < m; ++k) out.at(i, j)[k] = row[k * n + i];
  }
  return out;
}

IdentityCheck action_identity(const HamiltonianField& h, GaugeArgument which, const StripGrid& w_prime,
                              const FlowOptions& opts) {
  const HamiltonianField dynamical = which == GaugeArgument::kFirst ? h : h.reversed();
  const StripGrid w = gauge_strip(h, which, w_prime, opts);
  IdentityCheck out;
  out.lhs = action(w, h.space(), &dynamical);
  out.rhs = action(w_prime, h.space()) + path_integral(dynamical, w, 0);
  out.discrepancy = std::abs(out.lhs - out.rhs);
  return out;
}

TelescopingReport verify_action_telescoping(const StripGrid& u, const StripGrid& cap, const HamiltonianField& h,
                                            const ElongationProfile& rho, const HoferNorms& norms, double tol) {
  const PhaseSpace& space = h.space();
  const StripGrid total = concatenate(cap, u);
  const double r_start = rho(u.s0), r_end = rho(u.s1);
  for (double tau : {u.s0, u.s1})
    if (rho.derivative(tau) != 0) throw InvalidArgument("elongation profile must be constant at the strip ends");

  TelescopingReport rep;
  rep.action_difference = (symplectic_area(total, space) + r_end * path_integral(h, u, u.ns)) -
                          (symplectic_area(cap, space) + r_start * path_integral(h, u, 0));
  const double rho_term = profile_term(u, h, rho);
  rep.energy = energy_functional(u, h, rho);
  rep.energy_side = rep.energy.geometric + rho_term;
  rep.discrepancy = std::abs(rep.action_difference - rep.energy_side);

  // Total increase and decrease of rho along the strip.
  double up = 0, down = 0;
  switch (rho.kind()) {
    case ElongationProfile::Kind::kPlus: up = 1; break;
    case ElongationProfile::Kind::kMinus: down = 1; break;
    case ElongationProfile::Kind::kFamily: up = down = std::min(rho.K(), 1.0); break;
  }
  const double lower = -(up * norms.e_minus + down * norms.e_plus);
  const double value = rep.energy.energy + rho_term;
  std::string name = rho.kind() == ElongationProfile::Kind::kPlus    ? "action difference >= -E^-(H)"
                     : rho.kind() == ElongationProfile::Kind::kMinus ? "action difference >= -E^+(H)"
                                                                     : "action difference >= -||H||";
  rep.inequalities.push_back(InequalityCheck{name, value, lower, value - lower, value - lower >= -tol});
  if (rho.kind() == ElongationProfile::Kind::kFamily && rho.K() >= 1) {
    const double area = symplectic_area(u, space);
    const double bound = area + norms.norm;
    rep.inequalities.push_back(InequalityCheck{"geometric energy <= int u^*omega + ||H||", rep.energy.geometric, bound,
                                               bound - rep.energy.geometric, bound - rep.energy.geometric >= -tol});
  }
  rep.pass = rep.discrepancy <= tol;
  for (const auto& c : rep.inequalities) rep.pass = rep.pass && c.holds;
  return rep;
}

}  // namespace torsionlab::hamlab
