#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pqreduce.h"

#include <cmath>
#include <cstring>
#include <string>

TEST_CASE("version string") {
  const char* v = pqr_version_string();
  REQUIRE(v != nullptr);
  int major = -1, minor = -1, patch = -1;
  CHECK(std::sscanf(v, "%d.%d.%d", &major, &minor, &patch) == 3);
  CHECK(major >= 1);
}

TEST_CASE("closed-form spectrum through the boundary") {
  double eigs[3] = {0, 0, 0};
  double trace = 0.0;

  // Printed family for (1,2) at n^2 = 1.
  REQUIRE(pqr_closed_spectrum(1, 2, -1, 1.0, eigs, &trace) == PQR_OK);
  CHECK(eigs[0] == -12.0);
  CHECK(eigs[1] == -12.0);
  CHECK(eigs[2] == 12.0);
  CHECK(trace == -12.0);

  // Remark convention at equal weights.
  REQUIRE(pqr_closed_spectrum(1, 1, +1, 1.0, eigs, nullptr) == PQR_OK);
  CHECK(eigs[0] == 2.0);
  CHECK(eigs[1] == 2.0);
  CHECK(eigs[2] == 8.0);

  // Error paths: non-coprime weights, the singular set, bad convention.
  CHECK(pqr_closed_spectrum(2, 4, -1, 1.0, eigs, nullptr) ==
        PQR_ERR_INVALID_PARAMS);
  CHECK(std::strlen(pqr_last_error_message()) > 0);
  CHECK(pqr_closed_spectrum(1, 2, -1, 0.0, eigs, nullptr) ==
        PQR_ERR_SINGULAR_SET);
  CHECK(pqr_closed_spectrum(1, 2, 0, 1.0, eigs, nullptr) ==
        PQR_ERR_INVALID_PARAMS);
  CHECK(pqr_closed_spectrum(1, 2, -1, 1.0, nullptr, nullptr) ==
        PQR_ERR_INVALID_PARAMS);
}

TEST_CASE("quaternionic closed forms") {
  double eigs[3] = {0, 0, 0};
  REQUIRE(pqr_gl_spectrum(1, 1, 1.0, eigs) == PQR_OK);
  CHECK(eigs[0] == -2.0);
  CHECK(eigs[1] == -2.0);
  CHECK(eigs[2] == -8.0);
  CHECK(pqr_gl_spectrum(1, 1, 0.0, eigs) == PQR_ERR_INVALID_PARAMS);

  double lo = 0.0, hi = 0.0;
  REQUIRE(pqr_gl_sectional_bounds(1, 2, &lo, &hi) == PQR_OK);
  CHECK(lo == -4.0);
  CHECK(hi == 20.0);

  int positive = -1;
  REQUIRE(pqr_gl_positivity(1, 1, &positive) == PQR_OK);
  CHECK(positive == 1);
  REQUIRE(pqr_gl_positivity(2, 3, &positive) == PQR_OK);
  CHECK(positive == 0);

  REQUIRE(pqr_gl_pinching(1, 1, &lo, &hi) == PQR_OK);
  CHECK(lo == 0.25);
  CHECK(hi == 0.25);
  CHECK(pqr_gl_pinching(2, 3, &lo, &hi) == PQR_ERR_INVALID_PARAMS);
  CHECK(std::strlen(pqr_last_error_message()) > 0);
}

TEST_CASE("NULL handling") {
  CHECK(pqr_report_exit_code(nullptr) == -1);
  CHECK(pqr_run_verify(nullptr, nullptr) == PQR_ERR_INVALID_PARAMS);
  pqr_report* report = nullptr;
  CHECK(pqr_run_verify(nullptr, &report) == PQR_ERR_INVALID_PARAMS);
  CHECK(report == nullptr);
  pqr_string_free(nullptr);
  pqr_report_free(nullptr);
}

TEST_CASE("verify report lifecycle") {
  pqr_verify_options opt{};
  opt.p = 1;
  opt.q = 2;
  opt.points = 4;
  opt.jobs = 1;
  opt.seed = 3;

  pqr_report* report = nullptr;
  REQUIRE(pqr_run_verify(&opt, &report) == PQR_OK);
  REQUIRE(report != nullptr);
  CHECK(pqr_report_exit_code(report) == 0);

  char* text = nullptr;
  REQUIRE(pqr_report_render(report, PQR_FORMAT_JSON, &text) == PQR_OK);
  REQUIRE(text != nullptr);
  const std::string json(text);
  pqr_string_free(text);
  CHECK(json.find("\"command\": \"verify\"") != std::string::npos);
  CHECK(json.find("\"schema_version\": \"1\"") != std::string::npos);
  CHECK(json.find("\"exit_code\": 0") != std::string::npos);

  text = nullptr;
  REQUIRE(pqr_report_render(report, PQR_FORMAT_CSV, &text) == PQR_OK);
  REQUIRE(text != nullptr);
  const std::string csv(text);
  pqr_string_free(text);
  CHECK(csv.find("index,chart_ok,n2,") != std::string::npos);

  CHECK(pqr_report_render(report, (pqr_format)7, &text) ==
        PQR_ERR_INVALID_PARAMS);
  pqr_report_free(report);

  // Invalid options surface as status codes, not reports.
  opt.points = 0;
  report = nullptr;
  CHECK(pqr_run_verify(&opt, &report) == PQR_ERR_INVALID_PARAMS);
  CHECK(report == nullptr);
}

TEST_CASE("spectrum and gl report lifecycle") {
  pqr_report* report = nullptr;
  REQUIRE(pqr_run_spectrum(1, 2, 0, 0, &report) == PQR_OK);
  CHECK(pqr_report_exit_code(report) == 0);
  char* text = nullptr;
  REQUIRE(pqr_report_render(report, PQR_FORMAT_JSON, &text) == PQR_OK);
  const std::string json(text);
  pqr_string_free(text);
  pqr_report_free(report);
  CHECK(json.find("\"command\": \"spectrum\"") != std::string::npos);
  CHECK(json.find("\"mode\": \"grid\"") != std::string::npos);

  pqr_gl_options gopt{};
  gopt.sweep_max = 6;
  report = nullptr;
  REQUIRE(pqr_run_gl(&gopt, &report) == PQR_OK);
  CHECK(pqr_report_exit_code(report) == 0);
  text = nullptr;
  REQUIRE(pqr_report_render(report, PQR_FORMAT_CSV, &text) == PQR_OK);
  const std::string csv(text);
  pqr_string_free(text);
  pqr_report_free(report);
  // 23 coprime pairs up to 6, one CSV line each.
  CHECK(csv.find("p,q,positive,") != std::string::npos);
  int rows = 0;
  for (std::size_t at = csv.find('\n'); at != std::string::npos;
       at = csv.find('\n', at + 1)) {
    const char next = at + 1 < csv.size() ? csv[at + 1] : '#';
    if (next >= '1' && next <= '9') ++rows;
  }
  CHECK(rows == 23);
}
