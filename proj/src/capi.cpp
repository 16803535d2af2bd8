#include "torsionlab/torsionlab.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "torsionlab/commands.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/novikov.hpp"

struct tl_novikov {
  torsionlab::NovikovElement value;
};
struct tl_matrix {
  torsionlab::NovikovMatrix value;
};
struct tl_model {
  torsionlab::MomentModel value;
};

namespace {

using namespace torsionlab;

thread_local std::string last_error;

template <class F>
tl_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return TL_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<tl_status>(static_cast<int>(e.code()));
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("malformed JSON input: ") + e.what();
    return TL_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TL_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TL_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return TL_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw InvalidArgument(std::string(what) + " must not be NULL");
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const nlohmann::json& j, char** out) { *out = copy_out(j.dump()); }

std::optional<ExtendedRational> optional_extended(const char* text) {
  if (text == nullptr || *text == '\0') return std::nullopt;
  return parse_extended(text);
}

std::optional<Rational> optional_rational(const char* text) {
  if (text == nullptr || *text == '\0') return std::nullopt;
  return parse_rational(text);
}

tl_status binary(const tl_novikov* x, const tl_novikov* y, tl_novikov** out,
                 NovikovElement (*op)(const NovikovElement&, const NovikovElement&)) {
  return guarded([&] {
    require(x, "x");
    require(y, "y");
    require(out, "out");
    *out = new tl_novikov{op(x->value, y->value)};
  });
}

}  // namespace

extern "C" {

const char* tl_version(void) { return "1.0.0"; }

const char* tl_last_error(void) { return last_error.c_str(); }

const char* tl_status_name(tl_status status) {
  switch (status) {
    case TL_OK: return "ok";
    case TL_INVALID_ARGUMENT: return "InvalidArgument";
    case TL_CONSTRAINT_VIOLATED: return "ConstraintViolated";
    case TL_PRECISION_EXHAUSTED: return "PrecisionExhausted";
    case TL_ZERO_DIVISION: return "ZeroDivision";
    case TL_NOT_A_COMPLEX: return "NotAComplex";
    case TL_FIBER_ON_BOUNDARY: return "FiberOnBoundary";
    case TL_EMPTY_INTERIOR: return "EmptyInterior";
    case TL_STEP_FAILURE: return "StepFailure";
    case TL_UNBOUNDED_DOMAIN: return "UnboundedDomain";
    case TL_NON_COMPACT: return "NonCompact";
    case TL_PARSE: return "ParseError";
    case TL_INTERNAL: return "Internal";
  }
  return "Unknown";
}

void tl_string_free(char* s) { std::free(s); }

tl_status tl_novikov_parse(const char* text, const char* trunc, tl_novikov** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new tl_novikov{parse_novikov(text, optional_extended(trunc).value_or(ExtendedRational::infinity()))};
  });
}

void tl_novikov_free(tl_novikov* x) { delete x; }

tl_status tl_novikov_format(const tl_novikov* x, char** out) {
  return guarded([&] {
    require(x, "x");
    require(out, "out");
    *out = copy_out(format(x->value));
  });
}

tl_status tl_novikov_valuation(const tl_novikov* x, char** out) {
  return guarded([&] {
    require(x, "x");
    require(out, "out");
    *out = copy_out(valuation(x->value).to_string());
  });
}

tl_status tl_novikov_add(const tl_novikov* x, const tl_novikov* y, tl_novikov** out) { return binary(x, y, out, add); }

tl_status tl_novikov_mul(const tl_novikov* x, const tl_novikov* y, tl_novikov** out) { return binary(x, y, out, mul); }

tl_status tl_novikov_divide(const tl_novikov* x, const tl_novikov* y, tl_novikov** out) {
  return binary(x, y, out, divide_exact);
}

tl_status tl_novikov_invert(const tl_novikov* x, tl_novikov** out) {
  return guarded([&] {
    require(x, "x");
    require(out, "out");
    *out = new tl_novikov{invert(x->value)};
  });
}

tl_status tl_matrix_from_json(const char* json, const char* trunc, tl_matrix** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new tl_matrix{matrix_from_json(parse_json_argument(json), optional_extended(trunc))};
  });
}

void tl_matrix_free(tl_matrix* m) { delete m; }

tl_status tl_matrix_to_json(const tl_matrix* m, char** out) {
  return guarded([&] {
    require(m, "m");
    require(out, "out");
    emit(to_json(m->value), out);
  });
}

tl_status tl_snf_report(const tl_matrix* m, char** report) {
  return guarded([&] {
    require(m, "m");
    require(report, "report");
    emit(snf_report(m->value), report);
  });
}

tl_status tl_decompose_report(const char* complex_json, const char* trunc, long degree, const char* hofer,
                              char** report) {
  return guarded([&] {
    require(complex_json, "complex_json");
    require(report, "report");
    const ChainComplex c = complex_from_json(parse_json_argument(complex_json), optional_extended(trunc));
    std::optional<std::size_t> selected;
    if (degree >= 0) selected = static_cast<std::size_t>(degree);
    emit(decompose_report(c, selected, optional_rational(hofer)), report);
  });
}

tl_status tl_model_parse(const char* text, tl_model** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new tl_model{parse_model_argument(text)};
  });
}

void tl_model_free(tl_model* m) { delete m; }

tl_status tl_model_describe(const tl_model* m, char** out) {
  return guarded([&] {
    require(m, "m");
    require(out, "out");
    *out = copy_out(m->value.describe());
  });
}

tl_status tl_model_to_json(const tl_model* m, char** out) {
  return guarded([&] {
    require(m, "m");
    require(out, "out");
    emit(to_json(m->value), out);
  });
}

tl_status tl_torsion_report(const tl_model* m, const char* fiber, const char* trunc, const char* hofer, char** report) {
  return guarded([&] {
    require(m, "m");
    require(fiber, "fiber");
    require(report, "report");
    emit(torsion_report(m->value, parse_fiber(fiber), optional_extended(trunc), optional_rational(hofer)), report);
  });
}

tl_status tl_optimize_report(const tl_model* m, size_t resolution, const char* cap, const char* trunc, char** report) {
  return guarded([&] {
    require(m, "m");
    require(report, "report");
    emit(optimize_report(m->value, resolution, optional_rational(cap), optional_extended(trunc)), report);
  });
}

tl_status tl_polydisk_report(const tl_polydisk_args* args, char** report) {
  return guarded([&] {
    require(args, "args");
    require(args->mode, "mode");
    require(args->S, "S");
    require(report, "report");
    PolydiskSpec spec;
    spec.mode = parse_polydisk_mode(args->mode);
    spec.n = args->n;
    if (args->k != 0) spec.k = args->k;
    spec.S = parse_rational(args->S);
    if (auto e = optional_rational(args->eps)) spec.eps = *e;
    if (auto e = optional_rational(args->eps2)) spec.eps2 = *e;
    spec.lambda = optional_rational(args->lambda);
    emit(polydisk_report(spec, args->extrapolate != 0, optional_extended(args->trunc)), report);
  });
}

tl_status tl_verify_report(const tl_verify_args* args, char** report) {
  return guarded([&] {
    require(args, "args");
    require(args->suite, "suite");
    require(report, "report");
    hamlab::SuiteOptions opts;
    opts.seed = args->seed;
    opts.resolution = args->resolution;
    if (args->tol > 0) opts.tol = args->tol;
    opts.cases = args->cases;
    opts.convergence = args->convergence != 0;
    if (args->flow_step > 0) opts.flow_step = args->flow_step;
    opts.threads = args->threads;
    emit(verify_report(hamlab::parse_suite(args->suite), opts), report);
  });
}

}  // extern "C"
