// Command-line surface: analyze / verify / evolve / random-suite.
//
// Exit codes: 0 all verdicts pass, 1 usage error, 2 analysis error,
// 3 at least one verdict failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qms/analysis.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitError = 2;
constexpr int kExitVerdictFail = 3;

qms::TolerancePolicy make_tolerances(const std::vector<std::string>& overrides) {
  qms::TolerancePolicy tol;
  qms::apply_env_tolerance_overrides(tol);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw qms::ParseError("--tol expects KEY=VALUE, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    char* end = nullptr;
    const double value = std::strtod(kv.c_str() + eq + 1, &end);
    if (*end != '\0')
      throw qms::ParseError("--tol " + key + ": value is not a number");
    if (!tol.set(key, value))
      throw qms::ParseError("--tol: unknown tolerance field '" + key + "'");
  }
  tol.validate();
  return tol;
}

void write_output(const qms::Json& doc, const std::string& path, bool to_stdout) {
  const std::string text = doc.dump(2) + "\n";
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) throw qms::Error("cannot write '" + path + "'");
    out << text;
  }
  if (to_stdout) std::cout << text;
}

int exit_code_for(bool any_fail, bool any_error) {
  if (any_error) return kExitError;
  if (any_fail) return kExitVerdictFail;
  return kExitPass;
}

std::string csv_trajectory(const std::vector<qms::TrajectoryRow>& rows,
                           Eigen::Index d) {
  std::string out = "t";
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) {
      out += ",re_" + std::to_string(i) + "_" + std::to_string(j);
      out += ",im_" + std::to_string(i) + "_" + std::to_string(j);
    }
  out += ",fro_norm\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.t);
    out += buf;
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i) {
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", row.value(i, j).real(),
                      row.value(i, j).imag());
        out += buf;
      }
    std::snprintf(buf, sizeof(buf), ",%.17g\n", row.fro_norm);
    out += buf;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qmsa - analyzer for finite-dimensional quantum Markov semigroups.\n"
      "Computes the decoherence-free subalgebra, its block decomposition,\n"
      "fixed points, invariant states, and the spectral splitting of the\n"
      "Liouvillian, and verifies the associated structure results.\n\n"
      "Exit codes: 0 pass, 1 usage error, 2 analysis error, 3 verdict fail.\n"
      "Environment: LINDBLAD_TOL_<FIELD> overrides tolerance fields."};
  app.require_subcommand(1);

  std::string model_path, input_path, json_out, csv_out;
  std::vector<std::string> tol_overrides;
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::string picture = "heisenberg";
  int count = 10;
  std::vector<Eigen::Index> dims = {2, 3};
  bool require_faithful = false;

  auto* analyze = app.add_subcommand("analyze", "Full analysis report (JSON)");
  analyze->add_option("--model", model_path, "Model JSON file")->required();
  analyze->add_option("--tol", tol_overrides, "Tolerance override KEY=VALUE");
  analyze->add_option("--seed", seed, "Random seed");
  analyze->add_option("--json-out", json_out, "Write the report to a file");

  auto* verify = app.add_subcommand("verify", "Verdict-only analysis output");
  verify->add_option("--model", model_path, "Model JSON file")->required();
  verify->add_option("--tol", tol_overrides, "Tolerance override KEY=VALUE");
  verify->add_option("--seed", seed, "Random seed");

  auto* evolve = app.add_subcommand("evolve", "Evolve an observable or state");
  evolve->add_option("--model", model_path, "Model JSON file")->required();
  evolve->add_option("--input", input_path, "Observable/state JSON matrix file")
      ->required();
  evolve->add_option("--times", times, "Evaluation times")
      ->required()
      ->delimiter(',');
  evolve->add_option("--picture", picture, "heisenberg|schrodinger")
      ->check(CLI::IsMember({"heisenberg", "schrodinger"}));
  evolve->add_option("--tol", tol_overrides, "Tolerance override KEY=VALUE");
  evolve->add_option("--csv-out", csv_out, "Write the trajectory CSV to a file");
  evolve->add_option("--json-out", json_out, "Write the trajectory JSON to a file");

  auto* suite = app.add_subcommand("random-suite", "Aggregate random-model run");
  suite->add_option("--count", count, "Number of models")->required();
  suite->add_option("--dims", dims, "Hilbert-space dimensions (2..8)")
      ->delimiter(',');
  suite->add_option("--seed", seed, "Random seed");
  suite->add_option("--tol", tol_overrides, "Tolerance override KEY=VALUE");
  suite->add_flag("--require-faithful", require_faithful,
                  "Rejection-sample until a faithful invariant state exists");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints the message or the requested help
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    const qms::TolerancePolicy base = make_tolerances(tol_overrides);

    if (analyze->parsed() || verify->parsed()) {
      const qms::ParsedModel pm = qms::parse_model_file(model_path, base);
      const qms::AnalysisOutcome out =
          qms::analyze_model(pm.model, pm.tol, seed);
      if (verify->parsed()) {
        qms::Json verdicts;
        verdicts["verdicts"] = out.report["verdicts"];
        verdicts["any_fail"] = out.any_fail;
        verdicts["any_error"] = out.any_error;
        write_output(verdicts, "", true);
      } else {
        write_output(out.report, json_out, true);
      }
      return exit_code_for(out.any_fail, out.any_error);
    }

    if (evolve->parsed()) {
      const qms::ParsedModel pm = qms::parse_model_file(model_path, base);
      const qms::Cmat input = qms::parse_matrix_file(input_path);
      const auto rows = qms::evolve_trajectory(pm.model, pm.tol, input, times,
                                               picture == "schrodinger");
      const std::string csv = csv_trajectory(rows, pm.model.dim);
      if (!csv_out.empty()) {
        std::ofstream out(csv_out);
        if (!out) throw qms::Error("cannot write '" + csv_out + "'");
        out << csv;
      }
      if (!json_out.empty()) {
        qms::Json doc = qms::Json::array();
        for (const auto& row : rows) {
          qms::Json r;
          r["t"] = row.t;
          r["value"] = qms::matrix_to_json(row.value);
          r["fro_norm"] = row.fro_norm;
          doc.push_back(std::move(r));
        }
        write_output(doc, json_out, false);
      }
      if (csv_out.empty() && json_out.empty()) std::cout << csv;
      return kExitPass;
    }

    if (suite->parsed()) {
      qms::SuiteOptions opt;
      opt.count = count;
      opt.dims = dims;
      opt.seed = seed;
      opt.require_faithful = require_faithful;
      const qms::SuiteOutcome out = qms::run_random_suite(opt, base);
      write_output(out.report, json_out, true);
      return exit_code_for(out.any_fail, out.any_error);
    }
  } catch (const qms::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qms::ModelInvalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qms::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
