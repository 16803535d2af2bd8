// torsionlab command-line front end. Talks to the core only through the C API.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "torsionlab/torsionlab.h"

namespace {

using nlohmann::json;

struct Global {
  bool json_out = false;
  bool timing = false;
  std::string trunc;
};

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

int exit_code(tl_status st) {
  switch (st) {
    case TL_OK: return 0;
    case TL_CONSTRAINT_VIOLATED: return 2;
    case TL_PRECISION_EXHAUSTED: return 3;
    default: return 1;
  }
}

int fail(tl_status st, const Global& g) {
  const std::string msg = tl_last_error();
  if (g.json_out) {
    std::cout << json{{"error", tl_status_name(st)}, {"message", msg}, {"status", static_cast<int>(st)}}.dump(2) << "\n";
  } else {
    std::cerr << "error: " << tl_status_name(st) << ": " << msg << "\n";
    if (st == TL_PRECISION_EXHAUSTED) std::cerr << "hint: raise the truncation budget with --trunc\n";
  }
  return exit_code(st);
}

// Takes ownership of a report string from the C API.
json take(char* text) {
  json j = json::parse(text);
  tl_string_free(text);
  return j;
}

std::string exact(const json& n) {
  if (n.is_object() && n.contains("exact")) return n["exact"].get<std::string>();
  if (n.is_object() && n.contains("decimal")) return n["decimal"].dump();
  return n.is_string() ? n.get<std::string>() : n.dump();
}

std::string list(const json& xs, const char* open = "{", const char* close = "}") {
  std::ostringstream out;
  out << open;
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? ", " : "") << exact(xs[i]);
  out << close;
  return out.str();
}

std::string decomposition(const json& d) {
  return "betti " + d["betti"].dump() + ", torsion " + list(d["torsion"]) + ", threshold " + exact(d["threshold"]);
}

std::string sci(double x, int digits = 3) {
  std::ostringstream out;
  out.precision(digits);
  out << std::scientific << x;
  return out.str();
}

void print_text(const json& r) {
  const std::string cmd = r["command"];
  const json& in = r["inputs"];
  const json& out = r;
  if (cmd == "torsion") {
    std::cout << "model: " << in["model"].get<std::string>() << "\n"
              << "fiber: " << list(in["fiber"], "(", ")") << "\n"
              << "facet areas: " << list(out["facet_areas"], "(", ")") << "\n"
              << "w: " << list(out["w"], "(", ")") << "\n"
              << "cohomology: " << decomposition(out) << "\n";
    if (out.contains("intersection_bound"))
      std::cout << "intersection bound at hofer " << in["hofer"].get<std::string>() << ": "
                << out["intersection_bound"].dump() << "\n";
    std::cout << out["status"].get<std::string>() << "\n";
  } else if (cmd == "polydisk") {
    std::cout << "mode " << in["mode"].get<std::string>() << ": " << out["model"].get<std::string>() << "\n"
              << "fiber: " << list(out["fiber"], "(", ")") << "\n"
              << "facet areas: " << list(out["facet_areas"], "(", ")") << "\n";
    for (const auto& c : out["constraints"])
      std::cout << "  [" << (c["ok"].get<bool>() ? "ok" : "FAILED") << "] " << c["name"].get<std::string>() << "\n";
    std::cout << "lower bound: " << exact(out["bound"]) << " (" << r["certification"]["status"].get<std::string>()
              << ")\n"
              << out["claim"].get<std::string>() << "\n";
  } else if (cmd == "snf") {
    std::cout << "rank: " << out["rank"].dump() << "\n"
              << "pivot valuations: " << list(out["pivots"]) << "\n"
              << "U m V = D: " << (r["certification"]["identity_U_m_V_equals_D"].get<bool>() ? "verified" : "FAILED")
              << " at trunc " << r["certification"]["trunc"].get<std::string>() << "\n";
  } else if (cmd == "decompose") {
    for (const auto& d : out["per_degree"]) std::cout << "H^" << d["degree"].dump() << ": " << decomposition(d) << "\n";
    std::cout << (in["degree"].is_string() ? "total: " : "selected H^" + in["degree"].dump() + ": ")
              << decomposition(out) << "\n";
    if (out.contains("intersection_bound"))
      std::cout << "intersection bound at hofer " << in["hofer"].get<std::string>() << ": "
                << out["intersection_bound"].dump() << "\n";
  } else if (cmd == "optimize") {
    std::cout << "model: " << in["model"].get<std::string>() << "\n"
              << "best fiber: " << list(out["fiber"], "(", ")") << "\n"
              << "threshold: " << exact(out["threshold"]) << "\n"
              << out["status"].get<std::string>() << " (" << out["evaluations"].dump() << " evaluations)\n";
  } else if (cmd == "verify") {
    std::cout << "suite " << out["suite"].get<std::string>() << ", seed " << out["seed"].dump() << ": "
              << out["case_count"].dump() << " cases, max discrepancy "
              << sci(out["max_discrepancy"]["decimal"].get<double>()) << " (tol " << sci(out["tol"].get<double>(), 1)
              << ")";
    if (!out["convergence_order"].is_null()) {
      std::ostringstream order;
      order.precision(3);
      order << std::fixed << out["convergence_order"]["decimal"].get<double>();
      std::cout << ", convergence order " << order.str();
    }
    std::cout << "\n";
    for (const auto& c : out["cases"])
      if (!c["pass"].get<bool>())
        std::cout << "  FAILED case " << c["index"].dump() << " (" << c["label"].get<std::string>()
                  << "): " << sci(c["discrepancy"]["decimal"].get<double>()) << "\n";
    std::cout << (out["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  }
  if (r.contains("timing")) std::cout << "time: " << r["timing"]["seconds"].get<double>() << " s\n";
}

// "256", "1/256" and "0.00390625" all mean 256 cells per unit length.
std::size_t parse_resolution(const std::string& text) {
  const auto slash = text.find('/');
  double value;
  if (slash != std::string::npos) {
    const double p = std::stod(text.substr(0, slash)), q = std::stod(text.substr(slash + 1));
    value = p / q;
  } else {
    value = std::stod(text);
  }
  if (!(value > 0)) throw CLI::ValidationError("--resolution", "must be positive");
  const double cells = value < 1 ? 1 / value : value;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * cells) throw CLI::ValidationError("--resolution", "h must be 1/N");
  return static_cast<std::size_t>(rounded);
}

std::uint64_t default_seed() {
  const char* env = std::getenv("TORSIONLAB_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring non-numeric TORSIONLAB_SEED\n";
    return 0;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torsion exponents, displacement-energy bounds and Hofer-geometry checks"};
  app.require_subcommand(1);
  Global g;
  app.add_flag("--json", g.json_out, "Machine-readable JSON report");
  app.add_flag("--timing", g.timing, "Add wall-clock timing to the report");
  app.add_option("--trunc", g.trunc, "Truncation budget p/q (default: 4x the largest input valuation)");

  std::string model_text, fiber, hofer;
  auto* torsion = app.add_subcommand("torsion", "Floer cohomology and torsion threshold of a toric fiber");
  torsion->add_option("--model", model_text, "Shorthand (sphere:1*cp:2:10*cylinder), JSON or @file")->required();
  torsion->add_option("--fiber", fiber, "Comma-separated moment coordinates")->required();
  torsion->add_option("--hofer", hofer, "Also report a + 2 b(hofer)");

  std::string mode = "1.4", S, eps, eps2, lambda;
  long n = 2, k = 0;
  bool extrapolate = false;
  auto* polydisk = app.add_subcommand("polydisk", "Displacement-energy lower bound for a polydisk embedding");
  polydisk->add_option("--mode", mode, "1.3 (cylinder), 1.4 (spheres) or 1.5 (projective)")->capture_default_str();
  polydisk->add_option("--n", n, "Complex dimension")->capture_default_str();
  polydisk->add_option("--k", k, "Projective factor dimension (mode 1.5)");
  polydisk->add_option("--S", S, "Polydisk size")->required();
  polydisk->add_option("--eps", eps, "Margin of the first factor (default eps' / 2)");
  polydisk->add_option("--eps2,--eps-prime", eps2, "Area excess of the first sphere (default 1/2)");
  polydisk->add_option("--lambda", lambda, "Size of the remaining factors (default (k+1)S + 1)");
  polydisk->add_flag("--extrapolate", extrapolate, "Evaluate even when a constraint fails (uncertified)");

  std::string matrix;
  auto* snf = app.add_subcommand("snf", "Smith normal form over the valuation ring");
  snf->add_option("--matrix", matrix, "Matrix JSON or @file")->required();

  std::string complex_text;
  long degree = -1;
  auto* decompose = app.add_subcommand("decompose", "Cohomology decomposition of a cochain complex");
  decompose->add_option("--complex", complex_text, "Complex JSON or @file")->required();
  decompose->add_option("--degree", degree, "Report this degree (default: sum over all degrees)");
  decompose->add_option("--hofer", hofer, "Also report a + 2 b(hofer)");

  std::string suite, resolution = "256";
  std::uint64_t seed = default_seed();
  double tol = 0, flow_step = 0;
  std::size_t cases = 0, threads = 0;
  bool no_convergence = false;
  auto* verify = app.add_subcommand("verify", "Seeded quadrature verification suites");
  verify->add_option("--suite", suite, "actiondiff, energy, hofer or hat")->required();
  verify->add_option("--seed", seed, "Random seed (default: TORSIONLAB_SEED or 0)");
  verify->add_option("--resolution,-r", resolution, "N or h = 1/N")->capture_default_str();
  verify->add_option("--tol", tol, "Tolerance (default: 1e-6, 1e-8 for hat)");
  verify->add_option("--cases", cases, "Number of random instances (default per suite)");
  verify->add_flag("--no-convergence", no_convergence, "Skip the runs at N/2 and N/4");
  verify->add_option("--flow-step", flow_step, "Largest flow step (default 1e-3)");
  verify->add_option("--threads", threads, "Worker threads (default: hardware)");

  std::size_t grid = 8;
  std::string cap;
  auto* optimize = app.add_subcommand("optimize", "Search the moment polytope for the largest torsion threshold");
  optimize->add_option("--model", model_text, "Shorthand, JSON or @file")->required();
  optimize->add_option("--resolution", grid, "Grid cells per unit length")->capture_default_str();
  optimize->add_option("--cap", cap, "Upper bound for coordinates without one (C factors)");

  for (auto* sub : {torsion, polydisk, snf, decompose, verify, optimize}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  const auto start = std::chrono::steady_clock::now();
  char* text = nullptr;
  tl_status st = TL_OK;
  if (torsion->parsed() || optimize->parsed()) {
    tl_model* model = nullptr;
    st = tl_model_parse(model_text.c_str(), &model);
    if (st != TL_OK) return fail(st, g);
    if (torsion->parsed())
      st = tl_torsion_report(model, fiber.c_str(), opt(g.trunc), opt(hofer), &text);
    else
      st = tl_optimize_report(model, grid, opt(cap), opt(g.trunc), &text);
    tl_model_free(model);
  } else if (polydisk->parsed()) {
    const tl_polydisk_args args{mode.c_str(), n, k, S.c_str(), opt(eps), opt(eps2), opt(lambda), extrapolate ? 1 : 0,
                                opt(g.trunc)};
    st = tl_polydisk_report(&args, &text);
  } else if (snf->parsed()) {
    tl_matrix* m = nullptr;
    st = tl_matrix_from_json(matrix.c_str(), opt(g.trunc), &m);
    if (st != TL_OK) return fail(st, g);
    st = tl_snf_report(m, &text);
    tl_matrix_free(m);
  } else if (decompose->parsed()) {
    st = tl_decompose_report(complex_text.c_str(), opt(g.trunc), degree, opt(hofer), &text);
  } else if (verify->parsed()) {
    std::size_t cells;
    try {
      cells = parse_resolution(resolution);
    } catch (const std::exception& e) {
      std::cerr << "error: invalid --resolution '" << resolution << "'\n";
      return 1;
    }
    const tl_verify_args args{suite.c_str(), seed, cells, tol, cases, no_convergence ? 0 : 1, flow_step, threads};
    st = tl_verify_report(&args, &text);
  }
  if (st != TL_OK) return fail(st, g);

  json report = take(text);
  if (g.timing)
    report["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  if (g.json_out)
    std::cout << report.dump(2) << "\n";
  else
    print_text(report);

  if (report["command"] == "verify" && !report["pass"].get<bool>()) return 1;
  return 0;
}
