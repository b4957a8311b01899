#include <doctest.h>

#include "lpiso/lpiso.h"

#include <cmath>
#include <cstring>
#include <string>

namespace {

const std::string kConfigs = LPISO_TEST_CONFIG_DIR;

struct Problem {
  lpiso_problem* p = nullptr;
  ~Problem() { lpiso_problem_free(p); }
};

struct Run {
  lpiso_report* r = nullptr;
  ~Run() { lpiso_report_free(r); }
};

}  // namespace

TEST_CASE("version and null handling") {
  CHECK(std::strlen(lpiso_version()) > 0);
  CHECK(lpiso_problem_from_json(nullptr, nullptr) == LPISO_INVALID_ARGUMENT);
  CHECK(std::strlen(lpiso_last_error()) > 0);
  lpiso_problem_free(nullptr);
  lpiso_report_free(nullptr);
  CHECK(lpiso_run(nullptr, LPISO_CMD_CLASSIFY, nullptr) == LPISO_INVALID_ARGUMENT);
  lpiso_command c;
  CHECK(lpiso_command_from_name("certify", &c) == LPISO_OK);
  CHECK(c == LPISO_CMD_CERTIFY);
  CHECK(lpiso_command_from_name("nope", &c) == LPISO_CONFIG_ERROR);
}

TEST_CASE("malformed documents are config errors") {
  Problem pr;
  CHECK(lpiso_problem_from_json("{not json", &pr.p) == LPISO_CONFIG_ERROR);
  CHECK(pr.p == nullptr);
  CHECK(lpiso_problem_from_file((kConfigs + "/malformed.json").c_str(), &pr.p) == LPISO_CONFIG_ERROR);
  CHECK(lpiso_problem_from_file((kConfigs + "/missing.json").c_str(), &pr.p) == LPISO_CONFIG_ERROR);
}

TEST_CASE("classify through the C API") {
  Problem pr;
  REQUIRE(lpiso_problem_from_json(R"({"A": [[1,0,0],[0,1,0],[0,0,1]], "B": [[1,0,0],[0,1,0],[0,0,1]], "p": 6})",
                                  &pr.p) == LPISO_OK);
  Run run;
  REQUIRE(lpiso_run(pr.p, LPISO_CMD_CLASSIFY, &run.r) == LPISO_OK);
  CHECK(lpiso_report_exit_code(run.r) == 0);
  const std::string json = lpiso_report_json(run.r);
  CHECK(json.find("Embeddable(SimilarityPlusInversion)") != std::string::npos);
  CHECK(std::string(lpiso_report_text(run.r)).find("SimilarityPlusInversion") != std::string::npos);
}

TEST_CASE("numeric and exponent errors carry their status") {
  Problem sing;
  REQUIRE(lpiso_problem_from_file((kConfigs + "/diagonalize_singular.json").c_str(), &sing.p) == LPISO_OK);
  Run r1;
  CHECK(lpiso_run(sing.p, LPISO_CMD_DIAGONALIZE, &r1.r) == LPISO_NUMERIC_ERROR);
  CHECK(r1.r == nullptr);
  CHECK(std::string(lpiso_last_error()).find("SingularMatrix") != std::string::npos);

  Problem even;
  REQUIRE(lpiso_problem_from_file((kConfigs + "/classify_even_exponent.json").c_str(), &even.p) == LPISO_OK);
  Run r2;
  CHECK(lpiso_run(even.p, LPISO_CMD_CLASSIFY, &r2.r) == LPISO_CONFIG_ERROR);
  CHECK(std::string(lpiso_last_error()).find("InvalidExponent") != std::string::npos);
}

TEST_CASE("certification outcome is in the report") {
  Problem good;
  REQUIRE(lpiso_problem_from_file((kConfigs + "/certify_translation.json").c_str(), &good.p) == LPISO_OK);
  REQUIRE(lpiso_problem_set_seed(good.p, 99) == LPISO_OK);
  Run ok;
  REQUIRE(lpiso_run(good.p, LPISO_CMD_CERTIFY, &ok.r) == LPISO_OK);
  CHECK(lpiso_report_exit_code(ok.r) == 0);
  const std::string js = lpiso_report_json(ok.r);
  CHECK((js.find("\"seed\": 99") != std::string::npos || js.find("\"seed\":99") != std::string::npos));

  Problem bad;
  REQUIRE(lpiso_problem_from_file((kConfigs + "/certify_kelvin_unit_weight.json").c_str(), &bad.p) == LPISO_OK);
  Run fail;
  REQUIRE(lpiso_run(bad.p, LPISO_CMD_CERTIFY, &fail.r) == LPISO_OK);
  CHECK(lpiso_report_exit_code(fail.r) == LPISO_CERTIFICATION_FAILED);
}

TEST_CASE("diagonalize and pseudo-norm helpers") {
  const double a[] = {2, 0, 0, -8};
  double m[4];
  int ell = -1;
  REQUIRE(lpiso_diagonalize(2, a, m, &ell) == LPISO_OK);
  CHECK(ell == 1);
  // MᵀAM by hand
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += m[k * 2 + i] * a[k * 2 + l] * m[l * 2 + j];
      CHECK(s == doctest::Approx(i != j ? 0.0 : (i == 0 ? 1.0 : -1.0)));
    }
  const double singular[] = {1, 1, 1, 1};
  CHECK(lpiso_diagonalize(2, singular, m, &ell) == LPISO_NUMERIC_ERROR);
  const double asym[] = {1, 2, 0, 1};
  CHECK(lpiso_diagonalize(2, asym, m, &ell) == LPISO_CONFIG_ERROR);
  CHECK(lpiso_diagonalize(0, a, m, &ell) == LPISO_INVALID_ARGUMENT);
  const double z[] = {3, 4};
  CHECK(lpiso_pseudo_norm_sq(2, z, 1) == -7);
}
