#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pqr/engine.hpp"
#include "pqr/orbifold.hpp"

#include "json.hpp"

#include <fstream>
#include <numeric>
#include <string>

namespace {

using namespace pqr::engine;
using nlohmann::json;

VerifyOptions verify_12() {
  VerifyOptions vo;
  vo.p = 1;
  vo.q = 2;
  vo.points = 6;
  vo.seed = 3;
  return vo;
}

json load_schema() {
  std::ifstream in(std::string(PQR_REPO_ROOT) + "/report.schema.json");
  REQUIRE(in.good());
  return json::parse(in);
}

/// Minimal walker for the subset of JSON Schema the report schema uses:
/// $ref into $defs, oneOf, type (single or list), const, enum, required,
/// properties, items, minItems, maxItems.
bool validates(const json& root, const json& schema, const json& value) {
  if (schema.contains("$ref")) {
    const std::string ref = schema["$ref"].get<std::string>();
    REQUIRE(ref.rfind("#/$defs/", 0) == 0);
    return validates(root, root["$defs"][ref.substr(8)], value);
  }
  if (schema.contains("oneOf")) {
    int hits = 0;
    for (const auto& alt : schema["oneOf"])
      if (validates(root, alt, value)) ++hits;
    if (hits != 1) return false;
  }
  if (schema.contains("const") && schema["const"] != value) return false;
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& alt : schema["enum"])
      if (alt == value) found = true;
    if (!found) return false;
  }
  if (schema.contains("type")) {
    const auto matches = [&](const std::string& t) {
      if (t == "object") return value.is_object();
      if (t == "array") return value.is_array();
      if (t == "string") return value.is_string();
      if (t == "number") return value.is_number();
      if (t == "integer") return value.is_number_integer();
      if (t == "boolean") return value.is_boolean();
      if (t == "null") return value.is_null();
      FAIL("unknown schema type ", t);
      return false;
    };
    const json& ty = schema["type"];
    if (ty.is_string()) {
      if (!matches(ty.get<std::string>())) return false;
    } else {
      bool any = false;
      for (const auto& t : ty)
        if (matches(t.get<std::string>())) any = true;
      if (!any) return false;
    }
  }
  if (schema.contains("required")) {
    if (!value.is_object()) return false;
    for (const auto& key : schema["required"])
      if (!value.contains(key.get<std::string>())) return false;
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items())
      if (value.contains(key) && !validates(root, sub, value[key]))
        return false;
  }
  if (value.is_array()) {
    if (schema.contains("minItems") &&
        value.size() < schema["minItems"].get<std::size_t>())
      return false;
    if (schema.contains("maxItems") &&
        value.size() > schema["maxItems"].get<std::size_t>())
      return false;
    if (schema.contains("items"))
      for (const auto& item : value)
        if (!validates(root, schema["items"], item)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("verify: suite verdicts and per-point tolerances") {
  const VerificationReport rep = run_verify(verify_12());
  CHECK(rep.exit_code == 0);
  CHECK(rep.pass);
  CHECK(rep.points_failed == 0);
  CHECK(rep.failure_rate == 0.0);
  CHECK(rep.calibration.tau == -1);

  CHECK(rep.checks.closed_matrix);
  CHECK(rep.checks.trace);
  CHECK(rep.checks.fd_match);
  CHECK(rep.checks.einstein);
  CHECK(rep.checks.osserman);
  CHECK(rep.checks.selfdual);
  CHECK(rep.checks.nonhomogeneity);

  CHECK(rep.nonhomogeneity_applicable);
  CHECK(rep.max_delta_l3 > nonhomogeneity_threshold);
  CHECK(rep.max_weyl_other > weyl_other_half_min);

  REQUIRE((int)rep.points.size() == 6);
  for (const PointRecord& rec : rep.points) {
    CHECK(rec.chart_ok);
    CHECK(rec.pass);
    CHECK(rec.matrix_err <= rep.options.tol.closed);
    CHECK(rec.trace_err <= rep.options.tol.trace);
    CHECK(rec.fd_rel_err <= rep.options.tol.fd);
    CHECK(rec.einstein_residual <= rep.options.tol.einstein);
    CHECK(rec.osserman_closed <= rep.options.tol.closed);
    CHECK(rec.osserman_fd <= rec.osserman_fd_tol);
    CHECK(rec.osserman_fd_tol >= rep.options.tol.fd);
    CHECK(std::min(rec.weyl_plus, rec.weyl_minus) <= rep.options.tol.fd);
  }
}

TEST_CASE("verify: equal weights make non-homogeneity inapplicable") {
  VerifyOptions vo;
  vo.points = 4;
  vo.seed = 1;
  const VerificationReport rep = run_verify(vo);
  CHECK(rep.exit_code == 0);
  CHECK_FALSE(rep.nonhomogeneity_applicable);
  CHECK(rep.checks.nonhomogeneity);  // vacuously
}

TEST_CASE("determinism: reports do not depend on the worker count") {
  VerifyOptions vo = verify_12();
  const VerificationReport a = run_verify(vo);
  vo.jobs = 2;
  VerificationReport b = run_verify(vo);
  // Only the echoed jobs option may differ; the payload is byte-identical.
  b.options.jobs = a.options.jobs;
  CHECK(to_json(a) == to_json(b));
  CHECK(to_csv(a) == to_csv(b));

  const VerificationReport c = run_verify(verify_12());
  CHECK(to_json(a) == to_json(c));
}

TEST_CASE("spectrum: grid and sampled modes") {
  SpectrumOptions so;
  so.p = 1;
  so.q = 2;
  const SpectrumReport grid = run_spectrum(so);
  CHECK_FALSE(grid.sampled);
  CHECK(grid.exit_code == 0);
  REQUIRE(grid.rows.size() == 16);  // n^2 = 1/4, 1/2, ..., max(p,q)^2

  for (std::size_t i = 0; i < grid.rows.size(); ++i) {
    const SpectrumRow& row = grid.rows[i];
    CHECK(std::abs(row.n2 - 0.25 * double(i + 1)) <= 1e-15);
    CHECK(std::abs(row.trace_combo + 12.0) <= 1e-12);
    CHECK(row.gap == std::abs(row.l3 - row.l1));
    if (i > 0) CHECK(row.gap < grid.rows[i - 1].gap);
  }
  const SpectrumRow& unit = grid.rows[3];
  CHECK(unit.n2 == 1.0);
  CHECK(unit.l1 == -12.0);
  CHECK(unit.l2 == -12.0);
  CHECK(unit.l3 == 12.0);

  SpectrumOptions ss = so;
  ss.points = 5;
  ss.seed = 2;
  const SpectrumReport sampled = run_spectrum(ss);
  CHECK(sampled.sampled);
  CHECK(sampled.rows.size() == 5);
  for (const SpectrumRow& row : sampled.rows) CHECK(row.n2 != 0.0);
  CHECK(to_json(run_spectrum(ss)) == to_json(sampled));
}

TEST_CASE("gl: sweep rows are the coprime pairs with printed verdicts") {
  GLOptions go;
  go.sweep_max = 6;
  const GLReport rep = run_gl(go);
  CHECK(rep.exit_code == 0);
  CHECK_FALSE(rep.crosscheck_run);
  REQUIRE(rep.rows.size() == 23);

  for (const GLRow& row : rep.rows) {
    CHECK(std::gcd(row.p, row.q) == 1);
    CHECK(row.p <= 6);
    CHECK(row.q <= 6);
    pqr::orbifold::GLParams params;
    params.p = row.p;
    params.q = row.q;
    CHECK(row.positive == pqr::orbifold::positivity_predicate(params));
    const auto bounds = pqr::orbifold::gl_sectional_bounds(params);
    CHECK(row.sect_lo == bounds.first);
    CHECK(row.sect_hi == bounds.second);
    CHECK(row.has_pinch == row.positive);
    if (row.has_pinch) {
      const auto pinch = pqr::orbifold::pinching_bounds(params);
      CHECK(row.pinch_lo == pinch.first);
      CHECK(row.pinch_hi == pinch.second);
    }
  }
}

TEST_CASE("gl: crosscheck attaches a passing report") {
  GLOptions go;
  go.p = 1;
  go.q = 2;
  go.crosscheck = true;
  go.points = 3;
  go.seed = 1;
  const GLReport rep = run_gl(go);
  CHECK(rep.exit_code == 0);
  CHECK(rep.crosscheck_run);
  CHECK(rep.crosscheck.pass);
  CHECK(rep.crosscheck.points.size() == 3);
  CHECK(rep.rows.size() == 1);
}

TEST_CASE("JSON reports validate against the published schema") {
  const json schema = load_schema();

  const json v = json::parse(to_json(run_verify(verify_12())));
  CHECK(validates(schema, schema, v));

  SpectrumOptions so;
  so.p = 1;
  so.q = 2;
  const json s = json::parse(to_json(run_spectrum(so)));
  CHECK(validates(schema, schema, s));

  GLOptions go;
  go.sweep_max = 4;
  const json g = json::parse(to_json(run_gl(go)));
  CHECK(validates(schema, schema, g));

  GLOptions gc;
  gc.p = 1;
  gc.q = 2;
  gc.crosscheck = true;
  gc.points = 2;
  gc.seed = 1;
  const json g2 = json::parse(to_json(run_gl(gc)));
  CHECK(validates(schema, schema, g2));

  // The walker rejects structural damage (sanity check on the checker).
  json broken = v;
  broken["command"] = "nonsense";
  CHECK_FALSE(validates(schema, schema, broken));
  broken = v;
  broken.erase("calibration");
  CHECK_FALSE(validates(schema, schema, broken));
}

TEST_CASE("CSV rendering: fixed column order and exit-code trailer") {
  const std::string v = to_csv(run_verify(verify_12()));
  CHECK(v.find("index,chart_ok,n2,closed_l1,closed_l2,closed_l3,"
               "matrix_l1,matrix_l2,matrix_l3,matrix_err,trace_err,"
               "fd_l1,fd_l2,fd_l3,cal_l1,cal_l2,cal_l3,fd_rel_err,"
               "einstein_residual,osserman_closed,osserman_fd,"
               "weyl_plus,weyl_minus,pass\n") != std::string::npos);
  CHECK(v.find("exit_code=0") != std::string::npos);

  SpectrumOptions so;
  so.p = 1;
  so.q = 2;
  const std::string s = to_csv(run_spectrum(so));
  CHECK(s.find("n2,l1,l2,l3,gap,trace_combo\n") != std::string::npos);

  GLOptions go;
  go.sweep_max = 6;
  const std::string g = to_csv(run_gl(go));
  CHECK(g.find("p,q,positive,sect_lo,sect_hi,pinch_lo,pinch_hi\n") !=
        std::string::npos);
}
