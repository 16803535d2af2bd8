#include "torsionlab/hamlab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <thread>

#include "torsionlab/errors.hpp"
#include "torsionlab/report.hpp"

namespace torsionlab::hamlab {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kStripHalfLength = 5;

// Portable uniform draw; std::uniform_real_distribution is not specified
// bit for bit across standard libraries.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::string num(double x) { return "(" + format_double(x) + ")"; }

// Runs task(i) for i < count on a small pool and rethrows the first failure.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<std::size_t> resolution_ladder(const SuiteOptions& opts) {
  if (opts.resolution == 0) throw InvalidArgument("resolution must be positive");
  if (!opts.convergence) return {opts.resolution};
  if (opts.resolution % 4 != 0 || opts.resolution < 8)
    throw InvalidArgument("convergence study needs a resolution divisible by 4 and at least 8");
  return {opts.resolution / 4, opts.resolution / 2, opts.resolution};
}

// ---------------------------------------------------------------------------

struct QuadratureSuite {
  std::vector<std::size_t> resolutions;
  std::function<std::string(std::size_t)> label;
  std::function<double(std::size_t, std::size_t)> discrepancy;  // (case, resolution)
};

void run_quadrature(const QuadratureSuite& q, std::size_t count, std::size_t threads, SuiteReport& rep) {
  rep.resolutions = q.resolutions;
  rep.cases.resize(count);
  parallel_for(count, threads, [&](std::size_t i) {
    SuiteCase c;
    c.index = i;
    c.label = q.label(i);
    for (std::size_t n : q.resolutions) c.discrepancies.push_back(q.discrepancy(i, n));
    c.discrepancy = c.discrepancies.back();
    c.pass = c.discrepancy <= rep.tol;
    rep.cases[i] = std::move(c);
  });
  if (q.resolutions.size() > 1) {
    std::vector<double> sums(q.resolutions.size(), 0.0);
    for (const auto& c : rep.cases)
      for (std::size_t k = 0; k < sums.size(); ++k) sums[k] += c.discrepancies[k];
    rep.convergence_order = fitted_order(q.resolutions, sums);
    rep.order_window = std::pair{1.7, 2.3};
  }
}

void run_energy(const SuiteOptions& opts, std::size_t strips, SuiteReport& rep) {
  QuadratureSuite q;
  q.resolutions = resolution_ladder(opts);
  const auto profile = [](std::size_t i) {
    return i % 2 == 0 ? ElongationProfile::plus() : ElongationProfile::family(2);
  };
  q.label = [&](std::size_t i) { return "strip " + std::to_string(i / 2) + ", rho " + profile(i).describe(); };
  q.discrepancy = [&](std::size_t i, std::size_t n) {
    auto rng = case_generator(opts.seed, Suite::kEnergy, i / 2);
    const StripMap u = random_decaying_strip(rng, kStripHalfLength);
    const HamiltonianField h = random_quadratic(rng, false);
    const std::size_t ns = static_cast<std::size_t>(2 * kStripHalfLength) * n;
    return energy_identity(u.sample(ns, n), h, profile(i)).discrepancy;
  };
  run_quadrature(q, 2 * strips, opts.threads, rep);
  rep.notes.push_back(
      "identity checked in integration-by-parts form for arbitrary smooth strips; the strips are not "
      "certified solutions of the perturbed Cauchy-Riemann equation");
}

void run_actiondiff(const SuiteOptions& opts, std::size_t strips, SuiteReport& rep) {
  QuadratureSuite q;
  q.resolutions = resolution_ladder(opts);
  q.label = [](std::size_t i) {
    return "strip " + std::to_string(i / 2) + ", " + (i % 2 == 0 ? "linear H" : "quadratic H");
  };
  const FlowOptions flow{opts.flow_step};
  q.discrepancy = [&](std::size_t i, std::size_t n) {
    auto rng = case_generator(opts.seed, Suite::kActionDiff, i / 2);
    const StripMap w = random_analytic_strip(rng);
    const HamiltonianField h = random_quadratic(rng, i % 2 == 0);
    return action_identity(h, GaugeArgument::kFirst, w.sample(n, n), flow).discrepancy;
  };
  run_quadrature(q, 2 * strips, opts.threads, rep);
  rep.notes.push_back("flow step " + format_double(opts.flow_step));
}

// H = (1 + g t)(a sin(m x + p) + b cos(n y + q)) + d on [0, 2 pi]^2, or
// (1 + g t) c z + d on a sphere; the extremes are known in closed form.
void run_hofer(const SuiteOptions& opts, std::size_t count, SuiteReport& rep) {
  rep.cases.resize(count);
  parallel_for(count, opts.threads, [&](std::size_t i) {
    auto rng = case_generator(opts.seed, Suite::kHofer, i);
    const double g = uniform(rng, -0.5, 0.5), d = uniform(rng, -0.5, 0.5);
    double amplitude;
    HamiltonianField h;
    HoferSampler sampler;
    SuiteCase c;
    c.index = i;
    if (i % 6 == 5) {
      const double area = uniform(rng, 0.5, 3), k = uniform(rng, -1, 1);
      const PhaseSpace space = PhaseSpace::sphere(area);
      h = HamiltonianField::parse("(1 + " + num(g) + "*t)*" + num(k) + "*z + " + num(d), space);
      amplitude = std::abs(k) * space.factors()[0].radius;
      c.label = "height on " + space.describe();
    } else {
      const double a = uniform(rng, -1, 1), b = uniform(rng, -1, 1);
      const int m = uniform_int(rng, 1, 3), n = uniform_int(rng, 1, 3);
      const double p = uniform(rng, 0, kTwoPi), r = uniform(rng, 0, kTwoPi);
      h = HamiltonianField::parse("(1 + " + num(g) + "*t)*(" + num(a) + "*sin(" + std::to_string(m) + "*x + " +
                                      num(p) + ") + " + num(b) + "*cos(" + std::to_string(n) + "*y + " + num(r) +
                                      ")) + " + num(d),
                                  PhaseSpace::plane());
      amplitude = std::abs(a) + std::abs(b);
      sampler.box = {{0, kTwoPi}};
      c.label = "trigonometric on [0, 2pi]^2";
    }
    const HoferNorms norms = hofer_norms(h, sampler);
    const double exact_plus = amplitude * (1 + g / 2) + d, exact_minus = amplitude * (1 + g / 2) - d;
    c.discrepancy = std::max({std::abs(norms.e_plus - exact_plus), std::abs(norms.e_minus - exact_minus),
                              std::abs(norms.norm - (norms.e_plus + norms.e_minus))});
    c.discrepancies = {c.discrepancy};
    c.pass = c.discrepancy <= rep.tol;
    rep.cases[i] = std::move(c);
  });
  rep.notes.push_back("exact values from the closed-form extremes of each Hamiltonian");
}

void run_hat(const SuiteOptions& opts, std::size_t count, SuiteReport& rep) {
  rep.cases.resize(count);
  const FlowOptions flow{opts.flow_step};
  parallel_for(count, opts.threads, [&](std::size_t i) {
    auto rng = case_generator(opts.seed, Suite::kHat, i);
    const HamiltonianField h0 = random_periodic(rng);
    const HamiltonianField h1 = random_periodic(rng);
    HoferSampler fine;
    fine.box = {{0, kTwoPi}};
    fine.grid_budget = 16384;
    fine.starts = 8;
    HoferSampler coarse = fine;
    coarse.grid_budget = 400;
    coarse.starts = 1;
    coarse.max_refine_evals = 200;
    coarse.tolerance = 1e-7;

    const HatHamiltonian hat(h0, h1, flow);
    const HoferNorms n0 = hofer_norms(h0, fine), n1 = hofer_norms(h1, fine);
    const HoferNorms nh = hofer_norms(
        hat.as_scalar(), h0.space(), coarse,
        [&hat](double t, const std::vector<double>& pts, std::size_t n, double* out) {
          hat.evaluate_batch(t, pts, n, out);
        });
    const double slack_minus = n0.e_minus + n1.e_plus - nh.e_minus;
    const double slack_plus = n0.e_plus + n1.e_minus - nh.e_plus;
    SuiteCase c;
    c.index = i;
    c.label = "periodic pair " + std::to_string(i);
    c.margin = std::min(slack_minus, slack_plus);
    c.discrepancy = std::max(0.0, -*c.margin);
    c.discrepancies = {c.discrepancy};
    c.pass = c.discrepancy <= rep.tol;
    rep.cases[i] = std::move(c);
  });
  rep.notes.push_back("discrepancy is the inequality violation max(0, -slack); margin is the smaller slack");
  rep.notes.push_back("Hamiltonians are 2pi-periodic in x and y so that flows never leave the sampled range");
}

}  // namespace

Suite parse_suite(std::string_view name) {
  if (name == "actiondiff") return Suite::kActionDiff;
  if (name == "energy") return Suite::kEnergy;
  if (name == "hofer") return Suite::kHofer;
  if (name == "hat") return Suite::kHat;
  throw InvalidArgument("unknown suite '" + std::string(name) + "' (expected actiondiff, energy, hofer or hat)");
}

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::kActionDiff: return "actiondiff";
    case Suite::kEnergy: return "energy";
    case Suite::kHofer: return "hofer";
    case Suite::kHat: return "hat";
  }
  return "";
}

double default_tolerance(Suite suite) { return suite == Suite::kHat ? 1e-8 : 1e-6; }

std::size_t default_case_count(Suite suite) {
  switch (suite) {
    case Suite::kActionDiff: return 20;
    case Suite::kEnergy: return 50;
    case Suite::kHofer: return 24;
    case Suite::kHat: return 50;
  }
  return 0;
}

std::mt19937_64 case_generator(std::uint64_t seed, Suite suite, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

HamiltonianField random_quadratic(std::mt19937_64& rng, bool linear) {
  double q[2][2];
  for (auto& row : q)
    for (double& v : row) v = uniform(rng, -0.5, 0.5);
  const double qxx = q[0][0], qyy = q[1][1], qxy = (q[0][1] + q[1][0]) / 2;
  const double bx = uniform(rng, -1, 1), by = uniform(rng, -1, 1);
  std::string text = num(bx) + "*x + " + num(by) + "*y";
  if (!linear) text = "0.5*(" + num(qxx) + "*x^2 + 2*" + num(qxy) + "*x*y + " + num(qyy) + "*y^2) + " + text;
  return HamiltonianField::parse(text, PhaseSpace::plane());
}

StripMap random_decaying_strip(std::mt19937_64& rng, double T0) {
  double c[8];
  for (double& v : c) v = uniform(rng, -0.5, 0.5);
  const double k = uniform(rng, 1, 2);
  const std::string sigma = "(0.5*(1 + tanh(" + num(k) + "*s)))";
  const std::string bump = "exp(-s^2)";
  const std::string x = "(" + num(c[0]) + " + " + num(c[1]) + "*t)*(1 - " + sigma + ") + (" + num(c[2]) + " + " +
                        num(c[3]) + "*sin(pi*t))*" + sigma + " + " + num(c[4]) + "*" + bump + "*cos(pi*t)";
  const std::string y = "(" + num(c[5]) + " + " + num(c[6]) + "*t^2)*(1 - " + sigma + ") + (" + num(c[7]) + " + " +
                        num(c[1]) + "*cos(pi*t))*" + sigma + " + " + num(c[3]) + "*" + bump + "*t";
  return StripMap::parse(x + "; " + y, -T0, T0);
}

StripMap random_analytic_strip(std::mt19937_64& rng) {
  double c[8];
  for (double& v : c) v = uniform(rng, -0.25, 0.25);
  const std::string x = num(c[0]) + " + " + num(c[1]) + "*s + " + num(c[2]) + "*sin(pi*t) + " + num(c[3]) + "*s*t";
  const std::string y = num(c[4]) + " + " + num(c[5]) + "*t + " + num(c[6]) + "*s^2 + " + num(c[7]) + "*cos(pi*s*t)";
  return StripMap::parse(x + "; " + y, 0, 1);
}

HamiltonianField random_periodic(std::mt19937_64& rng) {
  std::string text = num(uniform(rng, -0.5, 0.5));
  for (int k = 0; k < 2; ++k) {
    const double a = uniform(rng, -1, 1), b = uniform(rng, -0.5, 0.5), p = uniform(rng, 0, kTwoPi);
    int m = 0, n = 0;
    while (m == 0 && n == 0) {
      m = uniform_int(rng, -2, 2);
      n = uniform_int(rng, -2, 2);
    }
    text += " + " + num(a) + "*(1 + " + num(b) + "*t)*sin(" + std::to_string(m) + "*x + " + std::to_string(n) +
            "*y + " + num(p) + ")";
  }
  return HamiltonianField::parse(text, PhaseSpace::plane());
}

std::optional<double> fitted_order(const std::vector<std::size_t>& resolutions, const std::vector<double>& errors) {
  if (resolutions.size() != errors.size() || resolutions.size() < 2) return std::nullopt;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!(errors[k] > 0) || !std::isfinite(errors[k])) return std::nullopt;
    xs.push_back(-std::log(static_cast<double>(resolutions[k])));
    ys.push_back(std::log(errors[k]));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k] / n;
    my += ys[k] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxy / sxx;
}

SuiteReport run_suite(Suite suite, const SuiteOptions& opts) {
  SuiteReport rep;
  rep.suite = suite;
  rep.seed = opts.seed;
  rep.tol = opts.tol.value_or(default_tolerance(suite));
  if (!(rep.tol > 0)) throw InvalidArgument("tolerance must be positive");
  if (!(opts.flow_step > 0)) throw InvalidArgument("flow step must be positive");
  const std::size_t count = opts.cases ? opts.cases : default_case_count(suite);
  switch (suite) {
    case Suite::kEnergy: run_energy(opts, count, rep); break;
    case Suite::kActionDiff: run_actiondiff(opts, count, rep); break;
    case Suite::kHofer: run_hofer(opts, count, rep); break;
    case Suite::kHat: run_hat(opts, count, rep); break;
  }
  rep.pass = true;
  for (const auto& c : rep.cases) {
    rep.max_discrepancy = std::max(rep.max_discrepancy, c.discrepancy);
    rep.pass = rep.pass && c.pass;
  }
  if (rep.order_window) {
    rep.pass = rep.pass && rep.convergence_order && *rep.convergence_order >= rep.order_window->first &&
               *rep.convergence_order <= rep.order_window->second;
  }
  return rep;
}

nlohmann::json to_json(const SuiteReport& rep) {
  using nlohmann::json;
  json cases = json::array();
  for (const auto& c : rep.cases) {
    json row{{"index", c.index}, {"label", c.label}, {"discrepancy", quadrature_number(c.discrepancy, rep.tol)}};
    if (c.discrepancies.size() > 1) {
      json per = json::array();
      for (double d : c.discrepancies) per.push_back(quadrature_number(d, rep.tol));
      row["by_resolution"] = std::move(per);
    }
    if (c.margin) row["margin"] = quadrature_number(*c.margin, rep.tol);
    row["pass"] = c.pass;
    cases.push_back(std::move(row));
  }
  json out{{"suite", to_string(rep.suite)},
           {"seed", rep.seed},
           {"resolution", rep.resolutions.empty() ? json(nullptr) : json(rep.resolutions.back())},
           {"resolutions", rep.resolutions},
           {"tol", rep.tol},
           {"cases", std::move(cases)},
           {"case_count", rep.cases.size()},
           {"max_discrepancy", quadrature_number(rep.max_discrepancy, rep.tol)}};
  out["convergence_order"] = rep.convergence_order ? quadrature_number(*rep.convergence_order, rep.tol) : json(nullptr);
  if (rep.order_window) out["order_window"] = {rep.order_window->first, rep.order_window->second};
  out["pass"] = rep.pass;
  out["notes"] = rep.notes;
  return out;
}

}  // namespace torsionlab::hamlab
