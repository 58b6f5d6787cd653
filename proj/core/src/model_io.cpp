#include "qms/model_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

namespace qms {

namespace {

Complex parse_entry(const Json& e, const std::string& field) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw ParseError("field '" + field + "': complex entries must be [re, im] pairs");
  const double re = e[0].get<double>(), im = e[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im))
    throw ParseError("field '" + field + "': non-finite entry");
  return {re, im};
}

}  // namespace

Cmat parse_matrix_json(const Json& doc, const std::string& field) {
  if (!doc.is_array() || doc.empty())
    throw ParseError("field '" + field + "': expected a non-empty array of rows");
  const std::size_t rows = doc.size();
  std::size_t cols = 0;
  Cmat out;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = doc[i];
    if (!row.is_array())
      throw ParseError("field '" + field + "': row " + std::to_string(i) +
                       " is not an array");
    if (i == 0) {
      cols = row.size();
      if (cols == 0) throw ParseError("field '" + field + "': empty row");
      out.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      throw ParseError("field '" + field + "': ragged rows");
    }
    for (std::size_t j = 0; j < cols; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_entry(row[j], field);
  }
  return out;
}

Cmat parse_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in '" + path + "': " + e.what());
  }
  return parse_matrix_json(doc, "matrix");
}

ParsedModel parse_model_json(const Json& doc, const TolerancePolicy& base) {
  if (!doc.is_object()) throw ParseError("model document must be a JSON object");
  if (!doc.contains("dim")) throw ParseError("missing field 'dim'");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<int>() <= 0)
    throw ParseError("field 'dim' must be a positive integer");
  if (!doc.contains("H")) throw ParseError("missing field 'H'");
  if (!doc.contains("L")) throw ParseError("missing field 'L'");

  ParsedModel out;
  out.tol = base;
  out.model.dim = doc["dim"].get<Eigen::Index>();
  out.model.hamiltonian = parse_matrix_json(doc["H"], "H");

  if (!doc["L"].is_array() || doc["L"].empty())
    throw ParseError("field 'L' must be a non-empty list of matrices");
  for (std::size_t k = 0; k < doc["L"].size(); ++k)
    out.model.lindblads.push_back(
        parse_matrix_json(doc["L"][k], "L[" + std::to_string(k) + "]"));
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw ParseError("field 'label' must be a string");
    out.model.label = doc["label"].get<std::string>();
  }
  if (doc.contains("tol")) {
    if (!doc["tol"].is_object()) throw ParseError("field 'tol' must be an object");
    for (const auto& [key, value] : doc["tol"].items()) {
      if (!value.is_number())
        throw ParseError("tolerance '" + key + "' must be a number");
      if (!out.tol.set(key, value.get<double>()))
        throw ParseError("unknown tolerance field '" + key + "'");
    }
    out.tol.validate();
  }

  const Eigen::Index d = out.model.dim;
  if (out.model.hamiltonian.rows() != d || out.model.hamiltonian.cols() != d)
    throw ModelInvalid("field 'H': expected " + std::to_string(d) + "x" +
                       std::to_string(d) + " matrix");
  if (!is_hermitian(out.model.hamiltonian, out.tol.hermitian))
    throw ModelInvalid("field 'H': not Hermitian within tolerance");
  for (std::size_t k = 0; k < out.model.lindblads.size(); ++k) {
    const auto& l = out.model.lindblads[k];
    if (l.rows() != d || l.cols() != d)
      throw ModelInvalid("field 'L[" + std::to_string(k) + "]': wrong shape");
  }
  return out;
}

ParsedModel parse_model_file(const std::string& path, const TolerancePolicy& base) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in '" + path + "': " + e.what());
  }
  return parse_model_json(doc, base);
}

Json matrix_to_json(const Cmat& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      row.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json model_to_json(const QmsModel& m) {
  Json doc;
  doc["dim"] = m.dim;
  doc["H"] = matrix_to_json(m.hamiltonian);
  Json ls = Json::array();
  for (const auto& l : m.lindblads) ls.push_back(matrix_to_json(l));
  doc["L"] = std::move(ls);
  if (!m.label.empty()) doc["label"] = m.label;
  return doc;
}

void apply_env_tolerance_overrides(TolerancePolicy& tol) {
  const char* fields[] = {"rank_rel",  "eig_cluster_abs", "residual",
                          "hermitian", "unitary",         "faithful_min_eig"};
  for (const char* f : fields) {
    std::string env = "LINDBLAD_TOL_";
    for (const char* c = f; *c; ++c) env += static_cast<char>(std::toupper(*c));
    if (const char* v = std::getenv(env.c_str())) {
      char* end = nullptr;
      const double value = std::strtod(v, &end);
      if (end == v || !std::isfinite(value) || value <= 0.0)
        throw ParseError("environment override " + env + " is not a positive number");
      tol.set(f, value);
    }
  }
  tol.validate();
}

}  // namespace qms
