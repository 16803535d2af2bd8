#include "torsionlab/polydisk.hpp"

#include "torsionlab/errors.hpp"

namespace torsionlab {

PolydiskMode parse_polydisk_mode(const std::string& text) {
  if (text == "1.3") return PolydiskMode::kCylinderSphere;
  if (text == "1.4") return PolydiskMode::kSpheres;
  if (text == "1.5") return PolydiskMode::kSpheresProjective;
  throw InvalidArgument("mode must be 1.3, 1.4 or 1.5, got '" + text + "'");
}

std::string to_string(PolydiskMode mode) {
  switch (mode) {
    case PolydiskMode::kCylinderSphere: return "1.3";
    case PolydiskMode::kSpheres: return "1.4";
    case PolydiskMode::kSpheresProjective: return "1.5";
  }
  return "?";
}

long PolydiskSpec::effective_k() const {
  switch (mode) {
    case PolydiskMode::kCylinderSphere: return 1;
    case PolydiskMode::kSpheres: return n - 1;
    case PolydiskMode::kSpheresProjective:
      if (!k) throw InvalidArgument("mode 1.5 needs k");
      return *k;
  }
  return 0;
}

Rational PolydiskSpec::effective_lambda() const {
  if (lambda) return *lambda;
  const long kk = mode == PolydiskMode::kSpheres ? 1 : effective_k();
  return Rational(kk + 1) * S + 1;
}

std::vector<ConstraintCheck> check_constraints(const PolydiskSpec& spec) {
  std::vector<ConstraintCheck> out;
  if (spec.mode == PolydiskMode::kCylinderSphere) {
    out.push_back({"S > 1/2", spec.S > Rational(1, 2)});
    return out;
  }
  const long k = spec.effective_k();
  const Rational lambda = spec.effective_lambda();
  out.push_back({"n >= 2", spec.n >= 2});
  if (spec.mode == PolydiskMode::kSpheresProjective) out.push_back({"1 <= k < n", k >= 1 && k < spec.n});
  out.push_back({"S > 1", spec.S > 1});
  const Rational eps = spec.effective_eps();
  out.push_back({"0 < eps", eps > 0});
  out.push_back({"eps < eps'", eps < spec.eps2});
  out.push_back({"eps' < 1", spec.eps2 < 1});
  if (spec.mode == PolydiskMode::kSpheres) out.push_back({"lambda > 2S", lambda > 2 * spec.S});
  else out.push_back({"lambda > (k+1)S", lambda > Rational(k + 1) * spec.S});
  return out;
}

namespace {

Ambient assemble(const PolydiskSpec& spec) {
  Ambient a;
  const Rational half(1, 2);
  switch (spec.mode) {
    case PolydiskMode::kCylinderSphere:
      a.model = MomentModel::product({MomentModel::cylinder(), MomentModel::sphere(Rational(1))});
      a.fiber = {spec.S, half};
      a.containment = {"S^1(S) x equator lies in C x S^2(1)"};
      break;
    case PolydiskMode::kSpheres: {
      if (spec.n < 2) throw ConstraintViolated("n >= 2");
      const Rational lambda = spec.effective_lambda();
      std::vector<MomentModel> parts{MomentModel::sphere(1 + spec.eps2)};
      for (long i = 1; i < spec.n; ++i) parts.push_back(MomentModel::sphere(lambda));
      a.model = MomentModel::product(parts);
      a.fiber.push_back(Rational((1 + spec.eps2) * half));
      for (long i = 1; i < spec.n; ++i) a.fiber.push_back(spec.S);
      a.containment = {"D(1,S,...,S) embeds in Z_{1,n-1}(1+eps) since eps < 1",
                       "fiber torus lies in D(1,S,...,S) since (1+eps')/2 < 1",
                       "Z_{1,n-1}(1+eps) embeds in S^2(1+eps') x S^2(lambda)^{n-1} since eps < eps' and lambda > 2S"};
      break;
    }
    case PolydiskMode::kSpheresProjective: {
      const long k = spec.effective_k();
      if (k < 1 || k >= spec.n) throw ConstraintViolated("1 <= k < n");
      std::vector<MomentModel> parts;
      for (long i = 0; i < spec.n - k; ++i) parts.push_back(MomentModel::sphere(1 + spec.eps2));
      parts.push_back(MomentModel::projective(static_cast<std::size_t>(k), spec.effective_lambda()));
      a.model = MomentModel::product(parts);
      for (long i = 0; i < spec.n - k; ++i) a.fiber.push_back(Rational((1 + spec.eps2) * half));
      for (long i = 0; i < k; ++i) a.fiber.push_back(spec.S);
      a.containment = {"D^2(1)^{n-k} x B^{2k}(kS) embeds in Z_{n-k,k}(1+eps) since eps < 1",
                       "fiber torus lies in D^2(1)^{n-k} x B^{2k}(kS)",
                       "Z_{n-k,k}(1+eps) embeds in S^2(1+eps')^{n-k} x CP^k(lambda) for lambda > (k+1)S"};
      break;
    }
  }
  return a;
}

std::string claim_for(const PolydiskSpec& spec) {
  const std::string S = spec.S.get_str();
  switch (spec.mode) {
    case PolydiskMode::kCylinderSphere:
      return "S^1(" + S + ") x S^1_eq in C x S^2(1) is not displaced by any Hamiltonian of Hofer norm < " + S;
    case PolydiskMode::kSpheres:
      return S + " <= e^{Z_{1," + std::to_string(spec.n - 1) + "}(1+eps)}(D(1," + S + ",...," + S + "))";
    case PolydiskMode::kSpheresProjective: {
      const long k = spec.effective_k();
      return S + " <= e^{Z_{" + std::to_string(spec.n - k) + "," + std::to_string(k) + "}(1+eps)}(D^2(1)^" +
             std::to_string(spec.n - k) + " x B^" + std::to_string(2 * k) + "(" + Rational(k * spec.S).get_str() + "))";
    }
  }
  return {};
}

}  // namespace

Ambient build_ambient(const PolydiskSpec& spec) {
  for (const auto& c : check_constraints(spec))
    if (!c.ok) throw ConstraintViolated("constraint violated: " + c.name);
  return assemble(spec);
}

PolydiskReport polydisk_bound(const PolydiskSpec& spec, bool extrapolate, const std::optional<ExtendedRational>& trunc) {
  PolydiskReport r;
  r.spec = spec;
  r.constraints = check_constraints(spec);
  bool all_ok = true;
  for (const auto& c : r.constraints) {
    if (!c.ok && !extrapolate) throw ConstraintViolated("constraint violated: " + c.name);
    all_ok = all_ok && c.ok;
  }
  r.ambient = assemble(spec);
  r.facet_areas = facet_areas(r.ambient.model, r.ambient.fiber);
  r.bound = displacement_bound(r.ambient.model, r.ambient.fiber, trunc);
  r.certified = all_ok && r.bound >= ExtendedRational(spec.S);
  r.claim = r.certified ? claim_for(spec) : "not established (extrapolated): " + claim_for(spec);
  return r;
}

nlohmann::json to_json(const PolydiskReport& r) {
  nlohmann::json constraints = nlohmann::json::array();
  for (const auto& c : r.constraints) constraints.push_back({{"name", c.name}, {"ok", c.ok}});
  nlohmann::json fiber = nlohmann::json::array();
  for (const auto& x : r.ambient.fiber) fiber.push_back(x.get_str());
  nlohmann::json areas = nlohmann::json::array();
  for (const auto& x : r.facet_areas) areas.push_back(x.get_str());
  nlohmann::json params = {{"mode", to_string(r.spec.mode)}, {"S", r.spec.S.get_str()}};
  if (r.spec.mode != PolydiskMode::kCylinderSphere) {
    params["n"] = r.spec.n;
    params["k"] = r.spec.effective_k();
    params["eps"] = r.spec.effective_eps().get_str();
    params["eps2"] = r.spec.eps2.get_str();
    params["lambda"] = r.spec.effective_lambda().get_str();
  }
  return {{"inputs", std::move(params)},
          {"bound", r.bound.to_string()},
          {"certified", r.certified},
          {"certified_lower_bound", r.spec.S.get_str()},
          {"certification", r.certified ? "certified: threshold bound applied to the ambient fiber" : "extrapolated"},
          {"claim", r.claim},
          {"constraints", std::move(constraints)},
          {"model", r.ambient.model.describe()},
          {"fiber", std::move(fiber)},
          {"facet_areas", std::move(areas)},
          {"containment", r.ambient.containment}};
}

}  // namespace torsionlab
