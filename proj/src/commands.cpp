#include "torsionlab/commands.hpp"

#include <fstream>
#include <sstream>

#include "torsionlab/errors.hpp"
#include "torsionlab/report.hpp"

namespace torsionlab {

namespace {

using nlohmann::json;

json exact_list(const std::vector<Rational>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(exact_number(x));
  return out;
}

json text_list(const std::vector<Rational>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.get_str());
  return out;
}

json decomposition_json(const ModuleDecomposition& dec) {
  return {{"betti", dec.betti}, {"torsion", exact_list(dec.torsion)}, {"threshold", exact_number(torsion_threshold(dec))}};
}

std::string displaceability(const ExtendedRational& bound) {
  if (bound.is_infinite()) return "non-displaceable";
  return "displacement energy >= " + bound.to_string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// {command, inputs, <outputs...>, certification}
json make_report(const char* command, json inputs, json outputs, json certification) {
  json r{{"command", command}, {"inputs", std::move(inputs)}};
  for (auto& [key, value] : outputs.items()) r[key] = std::move(value);
  r["certification"] = std::move(certification);
  return r;
}

}  // namespace

json parse_json_argument(std::string_view text) {
  std::string body = !text.empty() && text.front() == '@' ? read_file(std::string(text.substr(1))) : std::string(text);
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

MomentModel parse_model_argument(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first == std::string_view::npos) throw InvalidArgument("empty model description");
  if (text[first] == '{' || text[first] == '@') return model_from_json(parse_json_argument(text.substr(first)));
  return model_from_shorthand(text);
}

json torsion_report(const MomentModel& model, const FiberPoint& fiber, const std::optional<ExtendedRational>& trunc,
                    const std::optional<Rational>& hofer) {
  const FloerModel fm = floer_model(model, fiber, trunc);
  const ModuleDecomposition total = decompose_total(fm.complex);
  const ExtendedRational threshold = torsion_threshold(total);
  const ExtendedRational level =
      fm.complex.differentials.empty() ? ExtendedRational::infinity() : fm.complex.differentials.front().trunc();

  json inputs{{"model", model.describe()}, {"fiber", text_list(fiber)}, {"trunc", level.to_string()}};
  if (hofer) inputs["hofer"] = hofer->get_str();

  json disks = json::array();
  for (const auto& d : enumerate_disks(model, fiber)) disks.push_back({{"boundary", d.boundary}, {"area", exact_number(d.area)}});
  json w = json::array();
  for (const auto& x : fm.w) w.push_back(format(x));
  json per_degree = json::array();
  const auto all = decompose_all(fm.complex);
  for (std::size_t k = 0; k < all.size(); ++k) {
    json entry = decomposition_json(all[k]);
    entry["degree"] = k;
    per_degree.push_back(std::move(entry));
  }

  json outputs = decomposition_json(total);
  outputs.update({{"facet_areas", exact_list(facet_areas(model, fiber))},
               {"disks", std::move(disks)},
               {"w", std::move(w)},
               {"per_degree", std::move(per_degree)},
               {"displacement_bound", exact_number(threshold)},
               {"status", displaceability(threshold)}});
  if (hofer) {
    outputs["b_count"] = b_count(total, *hofer);
    outputs["intersection_bound"] = theorem_j_bound(total, *hofer);
  }
  return make_report("torsion", std::move(inputs), std::move(outputs),
                     {{"exact", true}, {"note", "all disk classes counted with coefficient +1 at bounding cochain 0"}});
}

json polydisk_report(const PolydiskSpec& spec, bool extrapolate, const std::optional<ExtendedRational>& trunc) {
  const PolydiskReport r = polydisk_bound(spec, extrapolate, trunc);
  json inputs{{"mode", to_string(spec.mode)}, {"S", spec.S.get_str()}, {"extrapolate", extrapolate}};
  if (spec.mode != PolydiskMode::kCylinderSphere) {
    inputs["n"] = spec.n;
    inputs["k"] = spec.effective_k();
    inputs["eps"] = spec.effective_eps().get_str();
    inputs["eps2"] = spec.eps2.get_str();
    inputs["lambda"] = spec.effective_lambda().get_str();
  }
  json constraints = json::array();
  for (const auto& c : r.constraints) constraints.push_back({{"name", c.name}, {"ok", c.ok}});
  json outputs{{"bound", exact_number(r.bound)},
               {"certified", r.certified},
               {"constraints", std::move(constraints)},
               {"certified_lower_bound", r.certified ? exact_number(spec.S) : json(nullptr)},
               {"model", r.ambient.model.describe()},
               {"fiber", exact_list(r.ambient.fiber)},
               {"facet_areas", exact_list(r.facet_areas)},
               {"containment", r.ambient.containment},
               {"claim", r.claim}};
  return make_report("polydisk", std::move(inputs), std::move(outputs),
                     {{"status", r.certified ? "certified" : "extrapolated"},
                      {"paper_direction", "bound >= S is the certified direction; equality is the model value"}});
}

json snf_report(const NovikovMatrix& m) {
  const SmithForm f = smith_normal_form(m);
  const bool identity = (f.U * m * f.V - f.D).is_zero();
  return make_report("snf", {{"matrix", to_json(m)}},
                     {{"rank", f.rank},
                      {"pivots", exact_list(f.pivot_valuations())},
                      {"D", to_json(f.D)},
                      {"U", to_json(f.U)},
                      {"V", to_json(f.V)}},
                     {{"exact", true}, {"identity_U_m_V_equals_D", identity}, {"trunc", m.trunc().to_string()}});
}

json decompose_report(const ChainComplex& c, const std::optional<std::size_t>& degree,
                      const std::optional<Rational>& hofer) {
  c.check_square_zero();
  const auto all = decompose_all(c);
  const ModuleDecomposition total = decompose_total(c);
  json per_degree = json::array();
  for (std::size_t k = 0; k < all.size(); ++k) {
    json entry = decomposition_json(all[k]);
    entry["degree"] = k;
    per_degree.push_back(std::move(entry));
  }
  if (degree && *degree >= all.size())
    throw InvalidArgument("degree " + std::to_string(*degree) + " out of range (complex has degrees 0.." +
                          std::to_string(all.size() - 1) + ")");
  const ModuleDecomposition& selected = degree ? all[*degree] : total;
  json inputs{{"ranks", c.ranks}};
  inputs["trunc"] = c.differentials.empty() ? "inf" : c.differentials.front().trunc().to_string();
  inputs["degree"] = degree ? json(*degree) : json("all");
  if (hofer) inputs["hofer"] = hofer->get_str();
  json outputs = decomposition_json(selected);
  outputs["per_degree"] = std::move(per_degree);
  if (hofer) {
    outputs["b_count"] = b_count(selected, *hofer);
    outputs["intersection_bound"] = theorem_j_bound(selected, *hofer);
  }
  return make_report("decompose", std::move(inputs), std::move(outputs), {{"exact", true}, {"square_zero", true}});
}

json optimize_report(const MomentModel& model, std::size_t resolution, const std::optional<Rational>& cap,
                     const std::optional<ExtendedRational>& trunc) {
  const OptimizeResult r = optimize_threshold(model, resolution, cap, trunc);
  json inputs{{"model", model.describe()}, {"resolution", resolution}};
  inputs["cap"] = cap ? json(cap->get_str()) : json(nullptr);
  inputs["trunc"] = trunc ? json(trunc->to_string()) : json("default");
  return make_report("optimize", std::move(inputs),
                     {{"fiber", exact_list(r.u)},
                      {"threshold", exact_number(r.threshold)},
                      {"status", displaceability(r.threshold)},
                      {"evaluations", r.evaluations}},
                     {{"exact", true},
                      {"note", "threshold at the reported fiber is exact; optimality is over the searched grid only"}});
}

json verify_report(hamlab::Suite suite, const hamlab::SuiteOptions& opts) {
  const hamlab::SuiteReport r = hamlab::run_suite(suite, opts);
  json body = hamlab::to_json(r);
  json inputs{{"suite", hamlab::to_string(suite)},
              {"seed", opts.seed},
              {"resolution", opts.resolution},
              {"tol", r.tol},
              {"cases", body["case_count"]},
              {"convergence", opts.convergence},
              {"flow_step", opts.flow_step}};
  return make_report("verify", std::move(inputs), std::move(body),
                     {{"pass", r.pass}, {"provenance", "quadrature(" + format_double(r.tol) + ")"}});
}

}  // namespace torsionlab
