#pragma once

// Toric fibers and their Floer cohomology at bounding cochain 0.
//
// A moment model is a list of facets {u : <n_j, u> >= c_j}. Every facet
// carries one Maslov-2 disk class whose boundary is the facet normal and
// whose area at the fiber over u is l_j(u) = <n_j, u> - c_j. An open facet
// bounds the region but has no opposite partner (the C factor).
//
// The Floer differential is contraction of the exterior algebra by
// w = sum_j T^{l_j(u)} n_j, every disk counted with coefficient +1.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "torsionlab/novikov.hpp"
#include "torsionlab/valmat.hpp"

namespace torsionlab {

enum class FacetKind { kClosed, kOpen };

struct Facet {
  std::vector<long> normal;
  Rational offset;
  FacetKind kind = FacetKind::kClosed;
};

/// Bookkeeping for models built from named factors.
struct Factor {
  enum class Kind { kSphere, kProjective, kCylinder, kCustom };
  Kind kind = Kind::kCustom;
  Rational size;          // sphere area, projective lambda; unused otherwise
  std::size_t first_coord = 0;
  std::size_t dim = 0;
  std::size_t first_facet = 0;
  std::size_t facet_count = 0;
};

using FiberPoint = std::vector<Rational>;

class MomentModel {
 public:
  MomentModel() = default;
  /// Validates dimensions and primitivity of normals.
  MomentModel(std::size_t dim, std::vector<Facet> facets);

  /// S^2(a): facets u >= 0 and -u >= -a.
  static MomentModel sphere(const Rational& area);
  /// CP^k(lambda): u_i >= 0 and -(u_1 + ... + u_k) >= -lambda.
  static MomentModel projective(std::size_t k, const Rational& lambda);
  /// C: one open facet u >= 0.
  static MomentModel cylinder();
  static MomentModel product(const std::vector<MomentModel>& factors);

  std::size_t dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Factor>& factors() const { return factors_; }
  bool has_open_facet() const;

  /// e.g. "S2(3/2) x CP2(10)".
  std::string describe() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Facet> facets_;
  std::vector<Factor> factors_;
};

struct DiskClass {
  std::vector<long> boundary;
  Rational area;
};

struct FloerModel {
  std::vector<NovikovElement> w;
  ChainComplex complex;
};

/// Throws FiberOnBoundary unless every area is positive.
std::vector<Rational> facet_areas(const MomentModel& m, const FiberPoint& u);
std::vector<DiskClass> enumerate_disks(const MomentModel& m, const FiberPoint& u);
/// sum_j T^{l_j(u)}.
NovikovElement potential(const MomentModel& m, const FiberPoint& u);

/// Contraction complex of a covector, graded so that C^p is the exterior
/// power of degree n - p. Entries are truncated at `trunc`.
ChainComplex koszul_complex(const std::vector<NovikovElement>& w, const ExtendedRational& trunc);

/// Truncation defaults to default_truncation() of w. Throws
/// PrecisionExhausted if truncation would erase a nonzero component of w.
FloerModel floer_model(const MomentModel& m, const FiberPoint& u, const std::optional<ExtendedRational>& trunc = {});
/// Aggregated over all degrees.
ModuleDecomposition floer_cohomology(const MomentModel& m, const FiberPoint& u,
                                     const std::optional<ExtendedRational>& trunc = {});
ExtendedRational torsion_threshold_at(const MomentModel& m, const FiberPoint& u,
                                      const std::optional<ExtendedRational>& trunc = {});
/// Lower bound on the displacement energy of the fiber; +inf means
/// non-displaceable.
ExtendedRational displacement_bound(const MomentModel& m, const FiberPoint& u,
                                    const std::optional<ExtendedRational>& trunc = {});

struct OptimizeResult {
  FiberPoint u;
  ExtendedRational threshold;
  std::size_t evaluations = 0;
};

/// Exact grid search over the interior followed by coordinate refinement.
/// `cap` bounds coordinates that no facet bounds from above (C factors).
/// Throws UnboundedDomain when some coordinate has no bound and no cap,
/// EmptyInterior when no grid point is interior.
OptimizeResult optimize_threshold(const MomentModel& m, std::size_t resolution,
                                  const std::optional<Rational>& cap = {},
                                  const std::optional<ExtendedRational>& trunc = {});

/// {dim, facets:[{normal, offset, kind}]} or {product:[{sphere:a}, {cp:{k,lambda}}, {cylinder:true}]}.
MomentModel model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MomentModel& m);
/// "sphere:3/2*sphere:5*cp:2:10*cylinder".
MomentModel model_from_shorthand(std::string_view text);
/// Comma separated rationals.
FiberPoint parse_fiber(std::string_view text);

}  // namespace torsionlab
