#pragma once

// Ambient toric models for polydisk and cylinder embeddings, and the
// displacement-energy lower bounds they produce.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "torsionlab/toric.hpp"

namespace torsionlab {

enum class PolydiskMode {
  kCylinderSphere,   // C x S^2(1), fiber S^1(S) x equator
  kSpheres,          // S^2(1+eps') x S^2(lambda)^{n-1}
  kSpheresProjective // S^2(1+eps')^{n-k} x CP^k(lambda)
};

/// "1.3", "1.4", "1.5".
PolydiskMode parse_polydisk_mode(const std::string& text);
std::string to_string(PolydiskMode mode);

struct PolydiskSpec {
  PolydiskMode mode = PolydiskMode::kSpheres;
  long n = 2;
  std::optional<long> k;          // projective mode only; n - 1 for the sphere mode
  Rational S;
  std::optional<Rational> eps;    // default: eps' / 2
  Rational eps2{1, 2};
  std::optional<Rational> lambda;  // default: (k+1) S + 1

  long effective_k() const;
  Rational effective_lambda() const;
  Rational effective_eps() const { return eps ? *eps : eps2 / 2; }
};

struct ConstraintCheck {
  std::string name;
  bool ok = false;
};

struct Ambient {
  MomentModel model;
  FiberPoint fiber;
  std::vector<std::string> containment;
};

struct PolydiskReport {
  PolydiskSpec spec;
  Ambient ambient;
  std::vector<Rational> facet_areas;
  ExtendedRational bound;
  bool certified = false;
  std::vector<ConstraintCheck> constraints;
  std::string claim;
};

/// Every inequality the construction relies on, in a fixed order.
std::vector<ConstraintCheck> check_constraints(const PolydiskSpec& spec);

/// Throws ConstraintViolated naming the first failed inequality.
Ambient build_ambient(const PolydiskSpec& spec);
/// With `extrapolate`, failed constraints are reported and the model is
/// evaluated anyway with certified = false.
PolydiskReport polydisk_bound(const PolydiskSpec& spec, bool extrapolate = false,
                              const std::optional<ExtendedRational>& trunc = {});

nlohmann::json to_json(const PolydiskReport& report);

}  // namespace torsionlab
