#include "doctest.h"
#include "support.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/toric.hpp"

using namespace torsionlab;
using testsupport::nv;
using testsupport::q;

namespace {

MomentModel spheres(const std::vector<Rational>& areas) {
  std::vector<MomentModel> f;
  for (const auto& a : areas) f.push_back(MomentModel::sphere(a));
  return MomentModel::product(f);
}

MomentModel section8() { return spheres({q(3, 2), q(5), q(5)}); }

MomentModel plane_sphere() { return MomentModel::product({MomentModel::cylinder(), MomentModel::sphere(q(1))}); }

}  // namespace

TEST_CASE("facet areas") {
  CHECK(facet_areas(MomentModel::sphere(q(1)), {q(1, 2)}) == std::vector<Rational>{q(1, 2), q(1, 2)});
  CHECK(facet_areas(MomentModel::sphere(q(5)), {q(2)}) == std::vector<Rational>{q(2), q(3)});
  CHECK(facet_areas(MomentModel::projective(2, q(10)), {q(2), q(2)}) == std::vector<Rational>{q(2), q(2), q(6)});
  CHECK_THROWS_AS(facet_areas(MomentModel::sphere(q(1)), {q(1)}), FiberOnBoundary);
  CHECK_THROWS_AS(facet_areas(MomentModel::sphere(q(1)), {q(0)}), FiberOnBoundary);
  CHECK_THROWS_AS(facet_areas(MomentModel::sphere(q(1)), {q(1, 2), q(1, 2)}), InvalidArgument);
}

TEST_CASE("disk classes") {
  const auto c = enumerate_disks(MomentModel::cylinder(), {q(3, 4)});
  REQUIRE(c.size() == 1);
  CHECK(c[0].boundary == std::vector<long>{1});
  CHECK(c[0].area == q(3, 4));
  const auto s = enumerate_disks(MomentModel::sphere(q(3, 2)), {q(3, 4)});
  REQUIRE(s.size() == 2);
  CHECK(s[0].boundary[0] == -s[1].boundary[0]);
  CHECK(s[0].area == s[1].area);
}

TEST_CASE("potential") {
  CHECK(potential(MomentModel::sphere(q(1)), {q(1, 2)}) == nv("2*T(1/2)"));
  CHECK(potential(MomentModel::sphere(q(5)), {q(2)}) == nv("T(2) + T(3)"));
  CHECK(potential(MomentModel::cylinder(), {q(3, 4)}) == nv("T(3/4)"));
}

TEST_CASE("floer model covectors") {
  const auto eq = floer_model(MomentModel::sphere(q(1)), {q(1, 2)});
  REQUIRE(eq.w.size() == 1);
  CHECK(eq.w[0].is_zero());

  const auto s8 = floer_model(section8(), {q(3, 4), q(2), q(2)});
  REQUIRE(s8.w.size() == 3);
  CHECK(s8.w[0].is_zero());
  CHECK(s8.w[1].ungraded().truncated(s8.w[1].trunc()) == nv("T(2) - T(3)", s8.w[1].trunc()));
  CHECK(s8.w[2] == s8.w[1]);

  const auto ps = floer_model(plane_sphere(), {q(3, 4), q(1, 2)});
  CHECK(valuation(ps.w[0]) == ExtendedRational(q(3, 4)));
  CHECK(ps.w[1].is_zero());
}

TEST_CASE("floer cohomology examples") {
  const auto two = floer_cohomology(spheres({q(1), q(1)}), {q(1, 2), q(1, 2)});
  CHECK(two.betti == 4);
  CHECK(two.torsion.empty());

  const auto s8 = floer_cohomology(section8(), {q(3, 4), q(2), q(2)});
  CHECK(s8.betti == 0);
  CHECK(torsion_threshold(s8) == ExtendedRational(q(2)));

  const auto ps = floer_cohomology(plane_sphere(), {q(3, 4), q(1, 2)});
  CHECK(ps.betti == 0);
  CHECK(ps.torsion == std::vector<Rational>{q(3, 4), q(3, 4)});
  CHECK(displacement_bound(plane_sphere(), {q(3, 4), q(1, 2)}) == ExtendedRational(q(3, 4)));
}

TEST_CASE("equator products are non-displaceable") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto m = spheres(std::vector<Rational>(n, q(1)));
    const FiberPoint u(n, q(1, 2));
    const auto d = floer_cohomology(m, u);
    CHECK(d.betti == (1L << n));
    CHECK(torsion_threshold_at(m, u).is_infinite());
    CHECK(displacement_bound(m, u).is_infinite());
  }
}

TEST_CASE("a single sphere fiber has threshold min(s, a - s)") {
  for (long num = 1; num < 12; ++num) {
    const Rational s = q(num, 4), a = q(3);
    if (s >= a) continue;
    const auto thr = torsion_threshold_at(MomentModel::sphere(a), {s});
    if (2 * s == a)
      CHECK(thr.is_infinite());
    else
      CHECK(thr == ExtendedRational(s < a - s ? s : a - s));
  }
}

TEST_CASE("toric cohomology agrees with the closed form and with brute force") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> area(2, 12), frac(1, 11), count(1, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = count(rng);
    std::vector<Rational> areas;
    FiberPoint u;
    for (int i = 0; i < n; ++i) {
      areas.push_back(q(area(rng), 2));
      u.push_back(areas.back() * q(frac(rng), 12));
    }
    const auto m = spheres(areas);
    const auto model = floer_model(m, u);
    ModuleDecomposition closed = testsupport::koszul_closed_form(model.w);
    closed.normalize();
    const auto got = floer_cohomology(m, u);
    CHECK(got == closed);
    CHECK(got == testsupport::brute_force_total(model.complex));
    const auto independent = testsupport::contraction_complex(model.w, model.complex.differentials[0].trunc());
    CHECK(got == testsupport::brute_force_total(independent));
  }
}

TEST_CASE("cohomology is invariant under translation and permutation") {
  const FiberPoint u{q(3, 4), q(2), q(5, 2)};
  const auto base = floer_cohomology(spheres({q(3, 2), q(5), q(6)}), u);
  const auto permuted = floer_cohomology(spheres({q(6), q(3, 2), q(5)}), {q(5, 2), q(3, 4), q(2)});
  CHECK(base == permuted);

  // Shift every facet offset and the fiber by the same vector.
  const auto m = spheres({q(3, 2), q(5), q(6)});
  const std::vector<Rational> shift{q(1, 3), q(-2), q(7)};
  std::vector<Facet> moved;
  for (auto f : m.facets()) {
    Rational dot = 0;
    for (std::size_t i = 0; i < f.normal.size(); ++i) dot += Rational(f.normal[i]) * shift[i];
    f.offset += dot;
    moved.push_back(f);
  }
  FiberPoint v = u;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += shift[i];
  CHECK(floer_cohomology(MomentModel(3, moved), v) == base);
}

TEST_CASE("truncation that would erase w is refused") {
  CHECK_THROWS_AS(floer_model(section8(), {q(3, 4), q(2), q(2)}, ExtendedRational(q(2))), PrecisionExhausted);
}

TEST_CASE("optimize threshold") {
  const auto one = optimize_threshold(MomentModel::sphere(q(1)), 8);
  CHECK(one.u == FiberPoint{q(1, 2)});
  CHECK(one.threshold.is_infinite());

  const auto two = optimize_threshold(spheres({q(1), q(1)}), 4);
  CHECK(two.u == FiberPoint{q(1, 2), q(1, 2)});
  CHECK(two.threshold.is_infinite());

  CHECK_THROWS_AS(optimize_threshold(plane_sphere(), 4), UnboundedDomain);
  const auto capped = optimize_threshold(plane_sphere(), 4, q(2));
  CHECK(capped.threshold.is_finite());
  CHECK(capped.threshold <= ExtendedRational(q(2)));
  CHECK(capped.threshold >= torsion_threshold_at(plane_sphere(), {q(3, 4), q(1, 2)}));
}

TEST_CASE("optimize threshold does not decrease under grid refinement") {
  const auto m = spheres({q(3), q(5)});
  ExtendedRational prev = q(0);
  for (std::size_t res : {2, 4, 8}) {
    const auto r = optimize_threshold(m, res);
    CHECK(r.threshold >= prev);
    prev = r.threshold;
  }
}

TEST_CASE("degenerate models") {
  // u >= 0 and -u >= 0 leave no interior.
  std::vector<Facet> flat{{{1}, q(0), FacetKind::kClosed}, {{-1}, q(0), FacetKind::kClosed}};
  CHECK_THROWS_AS(optimize_threshold(MomentModel(1, flat), 4), EmptyInterior);
  CHECK_THROWS_AS(MomentModel(1, {{{2}, q(0), FacetKind::kClosed}}), InvalidArgument);
}

TEST_CASE("model input forms") {
  const auto a = model_from_shorthand("sphere:3/2*sphere:5*sphere:5");
  CHECK(a.describe() == section8().describe());
  CHECK(model_from_json(to_json(a)).facets().size() == a.facets().size());
  const auto j = nlohmann::json::parse(R"({"product":[{"sphere":"3/2"},{"cp":{"k":2,"lambda":"10"}}]})");
  const auto b = model_from_json(j);
  CHECK(b.dim() == 3);
  CHECK(facet_areas(b, {q(3, 4), q(2), q(2)}) == std::vector<Rational>{q(3, 4), q(3, 4), q(2), q(2), q(6)});
  CHECK(parse_fiber("3/4, 2,2") == FiberPoint{q(3, 4), q(2), q(2)});
  CHECK_THROWS_AS(model_from_shorthand("torus:1"), ParseError);
}
