#pragma once

// JSON input/output for cycle configurations and verification reports.
//
// The document format is strict: unknown fields are rejected, every value is
// validated with a precise path in the error message, and serialization is
// deterministic (stable field order, shortest round-trip number formatting),
// so writing and re-parsing a configuration is lossless.

#include <string>
#include <vector>

#include <json.hpp>

#include "apollo/apollonius.hpp"
#include "apollo/errors.hpp"

namespace apollo {

inline constexpr const char* kToolVersion = "1.0.0";

struct ParsedConfig {
  Configuration config;
  // Normalization diagnostics (e.g. a hyperplane normal that was rescaled).
  std::vector<std::string> notes;
};

// Parses a configuration document. Throws GeometryError with code ParseError
// for malformed JSON and ValidationError (with a field path in the message)
// for schema violations.
ParsedConfig parse_configuration_text(const std::string& text);
ParsedConfig parse_configuration_json(const nlohmann::json& doc);

nlohmann::ordered_json configuration_to_json(const Configuration& cfg);
std::string write_configuration(const Configuration& cfg);

nlohmann::ordered_json vector_to_json(const Eigen::VectorXd& v);
nlohmann::ordered_json cycle_to_json(const Cycle& cycle);

// {"ok": false, "tool_version": ..., "error": {"code", "message"[, "subset"]}}
nlohmann::ordered_json error_to_json(const GeometryError& err);

}  // namespace apollo
