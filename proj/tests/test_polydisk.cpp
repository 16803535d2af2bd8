#include "doctest.h"
#include "support.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/polydisk.hpp"

using namespace torsionlab;
using testsupport::q;

namespace {

PolydiskSpec spec(PolydiskMode mode, long n, Rational S) {
  PolydiskSpec s;
  s.mode = mode;
  s.n = n;
  s.S = std::move(S);
  return s;
}

}  // namespace

TEST_CASE("ambient constructions") {
  auto s = spec(PolydiskMode::kSpheres, 3, q(2));
  s.lambda = q(5);
  const auto a = build_ambient(s);
  CHECK(a.model.describe() == MomentModel::product({MomentModel::sphere(q(3, 2)), MomentModel::sphere(q(5)),
                                                    MomentModel::sphere(q(5))})
                                  .describe());
  CHECK(a.fiber == FiberPoint{q(3, 4), q(2), q(2)});

  auto p = spec(PolydiskMode::kSpheresProjective, 3, q(2));
  p.k = 2;
  p.lambda = q(10);
  const auto b = build_ambient(p);
  CHECK(b.fiber == FiberPoint{q(3, 4), q(2), q(2)});
  CHECK(facet_areas(b.model, b.fiber) == std::vector<Rational>{q(3, 4), q(3, 4), q(2), q(2), q(6)});

  const auto c = build_ambient(spec(PolydiskMode::kCylinderSphere, 2, q(3, 4)));
  CHECK(c.fiber == FiberPoint{q(3, 4), q(1, 2)});
  CHECK(c.model.has_open_facet());
}

TEST_CASE("bounds equal S") {
  CHECK(polydisk_bound(spec(PolydiskMode::kSpheres, 3, q(2))).bound == ExtendedRational(q(2)));
  auto p = spec(PolydiskMode::kSpheresProjective, 3, q(2));
  p.k = 2;
  p.lambda = q(10);
  const auto r = polydisk_bound(p);
  CHECK(r.bound == ExtendedRational(q(2)));
  CHECK(r.certified);
  CHECK(polydisk_bound(spec(PolydiskMode::kCylinderSphere, 2, q(3, 4))).bound == ExtendedRational(q(3, 4)));
}

TEST_CASE("bound is independent of the auxiliary parameters") {
  for (long n : {2, 3, 4}) {
    for (const Rational S : {q(3, 2), q(2), q(5, 2)}) {
      for (const Rational e2 : {q(1, 4), q(1, 2), q(3, 4)}) {
        for (const Rational lam : {Rational(2 * S + 1), Rational(5 * S)}) {
          auto s = spec(PolydiskMode::kSpheres, n, S);
          s.eps2 = e2;
          s.lambda = lam;
          const auto r = polydisk_bound(s);
          CHECK(r.certified);
          CHECK(r.bound == ExtendedRational(S));
        }
      }
    }
  }
}

TEST_CASE("bound scales linearly with S") {
  for (long k = 3; k <= 8; ++k) {
    const Rational S = q(k, 2);
    auto s = spec(PolydiskMode::kSpheres, 3, S);
    CHECK(polydisk_bound(s).bound == ExtendedRational(S));
    CHECK(polydisk_bound(spec(PolydiskMode::kCylinderSphere, 2, S)).bound == ExtendedRational(S));
  }
}

TEST_CASE("violated constraints are named") {
  auto s = spec(PolydiskMode::kSpheres, 3, q(2));
  s.lambda = q(3);
  const auto checks = check_constraints(s);
  bool any_failed = false;
  for (const auto& c : checks) any_failed = any_failed || !c.ok;
  CHECK(any_failed);
  try {
    build_ambient(s);
    FAIL("expected ConstraintViolated");
  } catch (const ConstraintViolated& e) {
    const std::string what = e.what();
    CHECK(what.find("lambda") != std::string::npos);
  }
  const auto r = polydisk_bound(s, true);
  CHECK_FALSE(r.certified);
  CHECK(r.claim.find("not established") == 0);

  CHECK_THROWS_AS(polydisk_bound(spec(PolydiskMode::kCylinderSphere, 2, q(1, 2))), ConstraintViolated);
  CHECK_THROWS_AS(polydisk_bound(spec(PolydiskMode::kSpheres, 3, q(0))), ConstraintViolated);
}

TEST_CASE("mode names") {
  CHECK(parse_polydisk_mode("1.4") == PolydiskMode::kSpheres);
  CHECK(to_string(PolydiskMode::kSpheresProjective) == "1.5");
  CHECK_THROWS(parse_polydisk_mode("2.0"));
}
