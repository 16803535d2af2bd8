#pragma once

// Seeded verification suites over random instances. Every case draws from
// its own generator seeded by (seed, suite, case index), so results do not
// depend on the order or the number of worker threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "torsionlab/hamlab/hamiltonian.hpp"
#include "torsionlab/hamlab/strip.hpp"

namespace torsionlab::hamlab {

enum class Suite { kActionDiff, kEnergy, kHofer, kHat };

Suite parse_suite(std::string_view name);
std::string to_string(Suite suite);

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t resolution = 256;  // cells per unit length, h = 1 / resolution
  std::optional<double> tol;     // suite default when empty
  std::size_t cases = 0;         // suite default when 0; strips (two rows each) for energy and actiondiff
  bool convergence = true;       // also run at resolution / 2 and / 4
  double flow_step = 1e-3;
  std::size_t threads = 0;       // 0: hardware concurrency
};

struct SuiteCase {
  std::size_t index = 0;
  std::string label;
  std::vector<double> discrepancies;  // one per resolution, coarse to fine
  double discrepancy = 0;             // at the finest resolution
  std::optional<double> margin;       // smallest inequality slack (hat)
  bool pass = false;
};

struct SuiteReport {
  Suite suite = Suite::kEnergy;
  std::uint64_t seed = 0;
  double tol = 0;
  std::vector<std::size_t> resolutions;
  std::vector<SuiteCase> cases;
  double max_discrepancy = 0;
  std::optional<double> convergence_order;
  std::optional<std::pair<double, double>> order_window;
  bool pass = false;
  std::vector<std::string> notes;
};

double default_tolerance(Suite suite);
std::size_t default_case_count(Suite suite);

SuiteReport run_suite(Suite suite, const SuiteOptions& opts);
nlohmann::json to_json(const SuiteReport& report);

/// Least-squares slope of log(error) against log(1 / resolution).
std::optional<double> fitted_order(const std::vector<std::size_t>& resolutions, const std::vector<double>& errors);

// Random families, exposed for the tests.

std::mt19937_64 case_generator(std::uint64_t seed, Suite suite, std::size_t index);

/// (1/2) x^T Q x + b.x on R^2; Q = 0 for the linear family.
HamiltonianField random_quadratic(std::mt19937_64& rng, bool linear);
/// Smooth strip on [-T0, T0] x [0, 1] converging exponentially to paths at both ends.
StripMap random_decaying_strip(std::mt19937_64& rng, double T0);
/// Polynomial and trigonometric strip on [0, 1] x [0, 1].
StripMap random_analytic_strip(std::mt19937_64& rng);
/// Time-dependent trigonometric Hamiltonian, 2 pi periodic in x and y.
HamiltonianField random_periodic(std::mt19937_64& rng);

}  // namespace torsionlab::hamlab
