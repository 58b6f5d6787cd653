#pragma once

#include <string>

#include <json.hpp>

#include "qms/qms_generator.hpp"

namespace qms {

using Json = nlohmann::ordered_json;

/// Model file contents: the model plus any per-file tolerance overrides.
struct ParsedModel {
  QmsModel model;
  TolerancePolicy tol;
};

/// Parse a model document: {"dim": d, "H": [[...]], "L": [[[...]]],
/// "label"?: str, "tol"?: {field: value}}. Complex entries are [re, im]
/// pairs. Throws ParseError / ModelInvalid naming the offending field.
ParsedModel parse_model_json(const Json& doc, const TolerancePolicy& base);
ParsedModel parse_model_file(const std::string& path, const TolerancePolicy& base);

/// Parse a bare d x d complex matrix document (observable or state input).
Cmat parse_matrix_json(const Json& doc, const std::string& field);
Cmat parse_matrix_file(const std::string& path);

Json matrix_to_json(const Cmat& a);
Json model_to_json(const QmsModel& m);

/// Apply LINDBLAD_TOL_<FIELD> environment overrides (field names upper-cased).
void apply_env_tolerance_overrides(TolerancePolicy& tol);

}  // namespace qms
