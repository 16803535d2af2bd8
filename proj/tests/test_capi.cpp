#include <string>

#include "doctest.h"
#include "json.hpp"
#include "torsionlab/torsionlab.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  tl_string_free(s);
  return out;
}

nlohmann::json take_json(char* s) { return nlohmann::json::parse(take(s)); }

}  // namespace

TEST_CASE("novikov handles") {
  tl_novikov *a = nullptr, *b = nullptr, *p = nullptr, *inv = nullptr;
  REQUIRE(tl_novikov_parse("1 - T", "3", &a) == TL_OK);
  REQUIRE(tl_novikov_parse("1 + T + T(2)", "3", &b) == TL_OK);
  REQUIRE(tl_novikov_mul(a, b, &p) == TL_OK);
  char* text = nullptr;
  REQUIRE(tl_novikov_format(p, &text) == TL_OK);
  CHECK(take(text) == "1");
  REQUIRE(tl_novikov_invert(a, &inv) == TL_OK);
  REQUIRE(tl_novikov_format(inv, &text) == TL_OK);
  CHECK(take(text) == "1 + T + T(2)");
  REQUIRE(tl_novikov_valuation(b, &text) == TL_OK);
  CHECK(take(text) == "0");
  tl_novikov_free(a);
  tl_novikov_free(b);
  tl_novikov_free(p);
  tl_novikov_free(inv);
}

TEST_CASE("error codes") {
  tl_novikov* x = nullptr;
  CHECK(tl_novikov_parse("T(", nullptr, &x) == TL_PARSE);
  CHECK(std::string(tl_last_error()).size() > 0);
  REQUIRE(tl_novikov_parse("0", nullptr, &x) == TL_OK);
  tl_novikov* y = nullptr;
  CHECK(tl_novikov_invert(x, &y) == TL_ZERO_DIVISION);
  tl_novikov_free(x);
  CHECK(tl_novikov_parse(nullptr, nullptr, &x) == TL_INVALID_ARGUMENT);
  CHECK(std::string(tl_status_name(TL_CONSTRAINT_VIOLATED)) == "ConstraintViolated");

  tl_polydisk_args args{"1.4", 3, 0, "2", nullptr, nullptr, "3", 0, nullptr};
  char* report = nullptr;
  CHECK(tl_polydisk_report(&args, &report) == TL_CONSTRAINT_VIOLATED);
  CHECK(std::string(tl_last_error()).find("lambda") != std::string::npos);

  tl_model* m = nullptr;
  REQUIRE(tl_model_parse("sphere:1", &m) == TL_OK);
  CHECK(tl_torsion_report(m, "1", nullptr, nullptr, &report) == TL_FIBER_ON_BOUNDARY);
  tl_model_free(m);

  tl_matrix* mat = nullptr;
  CHECK(tl_matrix_from_json("{\"rows\":1", nullptr, &mat) == TL_PARSE);
  CHECK(tl_decompose_report(R"j({"ranks":[1,1,1],"differentials":[{"rows":1,"cols":1,"entries":[["1"]]},{"rows":1,"cols":1,"entries":[["1"]]}]})j",
                            nullptr, -1, nullptr, &report) == TL_NOT_A_COMPLEX);
}

TEST_CASE("reports") {
  tl_polydisk_args args{"1.4", 3, 0, "2", nullptr, nullptr, nullptr, 0, nullptr};
  char* report = nullptr;
  REQUIRE(tl_polydisk_report(&args, &report) == TL_OK);
  const auto j = take_json(report);
  CHECK(j["bound"]["exact"] == "2");
  CHECK(j["certified"] == true);

  tl_model* m = nullptr;
  REQUIRE(tl_model_parse("sphere:3/2*sphere:5*sphere:5", &m) == TL_OK);
  REQUIRE(tl_torsion_report(m, "3/4,2,2", nullptr, "1", &report) == TL_OK);
  const auto t = take_json(report);
  CHECK(t["betti"] == 0);
  CHECK(t["threshold"]["exact"] == "2");
  CHECK(t["intersection_bound"] == 8);
  char* text = nullptr;
  REQUIRE(tl_model_describe(m, &text) == TL_OK);
  CHECK(take(text).find("S2(3/2)") != std::string::npos);
  tl_model_free(m);

  tl_matrix* mat = nullptr;
  REQUIRE(tl_matrix_from_json(R"j({"rows":2,"cols":2,"entries":[["T(2)","0"],["0","T"]]})j", nullptr, &mat) == TL_OK);
  REQUIRE(tl_snf_report(mat, &report) == TL_OK);
  const auto s = take_json(report);
  CHECK(s["rank"] == 2);
  CHECK(s["certification"]["identity_U_m_V_equals_D"] == true);
  tl_matrix_free(mat);

  tl_verify_args v{"hofer", 3, 256, 0, 4, 0, 0, 1};
  REQUIRE(tl_verify_report(&v, &report) == TL_OK);
  const auto r = take_json(report);
  CHECK(r["pass"] == true);
  CHECK(r["cases"].size() == 4);
}
