#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>

#include "qms/analysis.hpp"
#include "qms/model_io.hpp"

using namespace qms;

namespace {

const TolerancePolicy kTol;

std::string fixture(const char* name) {
  return std::string(QMS_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("dephasing fixture parses to the expected model") {
  const auto pm = parse_model_file(fixture("dephasing.json"), kTol);
  CHECK(pm.model.dim == 2);
  CHECK(pm.model.label == "dephasing");
  REQUIRE(pm.model.lindblads.size() == 1);
  Cmat sz(2, 2);
  sz << 1, 0, 0, -1;
  CHECK(fro(pm.model.lindblads[0] - sz) == 0.0);
  CHECK(fro(pm.model.hamiltonian) == 0.0);
}

TEST_CASE("matrix files parse bare matrices") {
  const Cmat sx = parse_matrix_file(fixture("sigma_x.json"));
  Cmat want(2, 2);
  want << 0, 1, 1, 0;
  CHECK(fro(sx - want) == 0.0);
}

TEST_CASE("parse errors name the offending field") {
  CHECK_THROWS_WITH_AS(parse_model_file(fixture("missing_lindblads.json"), kTol),
                       "missing field 'L'", ParseError);
  CHECK_THROWS_AS(parse_model_file(fixture("ragged_rows.json"), kTol), ParseError);
  CHECK_THROWS_AS(parse_model_file(fixture("non_hermitian_h.json"), kTol),
                  ModelInvalid);
  CHECK_THROWS_AS(parse_model_file(fixture("no_such_file.json"), kTol), ParseError);
}

TEST_CASE("inline documents: tol overrides and validation") {
  Json doc;
  doc["dim"] = 2;
  doc["H"] = matrix_to_json(Cmat::Zero(2, 2));
  Cmat sz(2, 2);
  sz << 1, 0, 0, -1;
  doc["L"] = Json::array({matrix_to_json(sz)});
  doc["tol"] = Json{{"residual", 1e-6}};
  const auto pm = parse_model_json(doc, kTol);
  CHECK(pm.tol.residual == 1e-6);
  CHECK(pm.tol.rank_rel == kTol.rank_rel);

  doc["tol"] = Json{{"no_such_field", 1.0}};
  CHECK_THROWS_AS(parse_model_json(doc, kTol), ParseError);
  doc["tol"] = Json{{"residual", -1.0}};
  CHECK_THROWS_AS(parse_model_json(doc, kTol), std::exception);
}

TEST_CASE("model json round trip") {
  const auto pm = parse_model_file(fixture("amplitude_damping.json"), kTol);
  const Json doc = model_to_json(pm.model);
  const auto again = parse_model_json(doc, kTol);
  CHECK(again.model.dim == pm.model.dim);
  CHECK(fro(again.model.hamiltonian - pm.model.hamiltonian) == 0.0);
  CHECK(fro(again.model.lindblads[0] - pm.model.lindblads[0]) == 0.0);
  CHECK(again.model.label == pm.model.label);
}

TEST_CASE("environment tolerance overrides") {
  setenv("LINDBLAD_TOL_RESIDUAL", "1e-5", 1);
  TolerancePolicy tol;
  apply_env_tolerance_overrides(tol);
  CHECK(tol.residual == 1e-5);
  CHECK(tol.rank_rel == 1e-10);

  setenv("LINDBLAD_TOL_RESIDUAL", "bogus", 1);
  TolerancePolicy tol2;
  CHECK_THROWS_AS(apply_env_tolerance_overrides(tol2), ParseError);
  unsetenv("LINDBLAD_TOL_RESIDUAL");
}

TEST_CASE("analysis report determinism for a fixed seed") {
  const auto pm = parse_model_file(fixture("dephasing.json"), kTol);
  const auto a = analyze_model(pm.model, pm.tol, 5);
  const auto b = analyze_model(pm.model, pm.tol, 5);
  CHECK(a.report.dump(2) == b.report.dump(2));
  CHECK(!a.any_fail);
  CHECK(!a.any_error);
}

TEST_CASE("trajectory rows match the closed-form dephasing decay") {
  const auto pm = parse_model_file(fixture("dephasing.json"), kTol);
  const Cmat sx = parse_matrix_file(fixture("sigma_x.json"));
  const auto rows = evolve_trajectory(pm.model, pm.tol, sx, {0.0, 0.5, 1.0}, false);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    const double decay = std::exp(-2.0 * row.t);
    CHECK(std::abs(row.value(0, 1) - decay) < 1e-10);
    CHECK(row.fro_norm == doctest::Approx(std::sqrt(2.0) * decay));
  }
}
