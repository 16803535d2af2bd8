#pragma once

// Toy phase spaces: products of symplectic planes and round spheres.
//
// A plane uses coordinates (x, y) with omega = dx ^ dy. A sphere S^2(a) is
// the round sphere of radius sqrt(a / 4 pi) in R^3 with its induced area
// form omega_p(u, v) = <p/|p|, u x v>, so the total area is a.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace torsionlab::hamlab {

struct PhaseFactor {
  enum class Kind { kPlane, kSphere };
  Kind kind = Kind::kPlane;
  double area = 0;   // sphere only
  double radius = 0; // sphere only
  std::size_t first = 0;

  std::size_t coords() const { return kind == Kind::kPlane ? 2 : 3; }
};

class PhaseSpace {
 public:
  PhaseSpace() = default;

  /// R^{2n}.
  static PhaseSpace plane(std::size_t n = 1);
  static PhaseSpace sphere(double area);
  static PhaseSpace product(const std::vector<PhaseSpace>& parts);
  /// "R2", "R4", "S2:1" joined by '*'.
  static PhaseSpace parse(std::string_view text);

  std::size_t coords() const { return coords_; }
  const std::vector<PhaseFactor>& factors() const { return factors_; }
  bool compact() const;
  std::string describe() const;

  /// X_H from grad H, defined by dH = omega(X_H, .). On a plane
  /// X_H = (H_y, -H_x); on a sphere X_H = grad H x n.
  void hamiltonian_vector(const double* x, const double* grad, double* out) const;
  /// Same for n points in coordinate-major layout: coordinate k of point p
  /// at [k * n + p].
  void hamiltonian_vector_batch(const double* x, const double* grad, double* out, std::size_t n) const;
  /// omega_x(a, b).
  double omega(const double* x, const double* a, const double* b) const;
  /// Moves sphere components back onto their spheres.
  void project(double* x) const;

 private:
  std::size_t coords_ = 0;
  std::vector<PhaseFactor> factors_;
};

}  // namespace torsionlab::hamlab
