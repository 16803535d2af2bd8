#pragma once

// Hofer norm ||H|| = int_0^1 (max H_t - min H_t) dt split into its negative
// part E^-(H) = int -min H_t dt and positive part E^+(H) = int max H_t dt.

#include <cstddef>
#include <utility>
#include <vector>

#include "torsionlab/hamlab/hamiltonian.hpp"

namespace torsionlab::hamlab {

struct HoferSampler {
  /// One interval per plane coordinate, or a single interval used for all
  /// of them. Sphere factors are sampled on the whole sphere.
  std::vector<std::pair<double, double>> box;
  std::size_t time_nodes = 8;   // Gauss-Legendre nodes on [0, 1]
  std::size_t grid_budget = 4096;
  std::size_t starts = 4;       // grid extremes refined by compass search
  double tolerance = 1e-12;     // final compass step, relative to the box
  std::size_t max_refine_evals = 4000;
};

struct HoferNorms {
  double e_minus = 0;
  double e_plus = 0;
  double norm = 0;  // e_minus + e_plus
  std::vector<double> times;
  std::vector<double> minima;
  std::vector<double> maxima;
};

/// Optional vectorized form of a ScalarField: n points in coordinate-major
/// layout, values written to out. Used for the grid and the compass polls.
using BatchField = std::function<void(double, const std::vector<double>&, std::size_t, double*)>;

/// Throws UnboundedDomain when a plane coordinate has no box.
HoferNorms hofer_norms(const ScalarField& f, const PhaseSpace& space, const HoferSampler& sampler,
                       const BatchField& batch = {});
HoferNorms hofer_norms(const HamiltonianField& h, const HoferSampler& sampler);

/// min and max of f(t, .) over the sampled domain.
std::pair<double, double> spatial_extremes(const ScalarField& f, const PhaseSpace& space, double t,
                                           const HoferSampler& sampler, const BatchField& batch = {});

}  // namespace torsionlab::hamlab
