#include "apollo/json_io.hpp"

#include <cmath>
#include <sstream>

namespace apollo {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw GeometryError(ErrorCode::ValidationError, path + ": " + what);
}

void reject_unknown_fields(const json& obj, const std::string& path,
                           std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) invalid(path, "unknown field \"" + it.key() + "\"");
  }
}

const json& expect_field(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) invalid(path, std::string("missing field \"") + key + "\"");
  return *it;
}

double expect_number(const json& value, const std::string& path) {
  if (!value.is_number()) invalid(path, "expected a number");
  double d = value.get<double>();
  if (!std::isfinite(d)) invalid(path, "expected a finite number");
  return d;
}

Eigen::VectorXd expect_vector(const json& value, const std::string& path, int dim) {
  if (!value.is_array()) invalid(path, "expected an array of numbers");
  if (static_cast<int>(value.size()) != dim) {
    invalid(path, "expected " + std::to_string(dim) + " numbers, got " +
                      std::to_string(value.size()));
  }
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) {
    v[i] = expect_number(value[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Cycle parse_cycle(const json& obj, const std::string& path, int dim,
                  std::vector<std::string>& notes) {
  if (!obj.is_object()) invalid(path, "expected an object");
  const json& type_field = expect_field(obj, path, "type");
  if (!type_field.is_string()) invalid(path + ".type", "expected a string");
  const std::string type = type_field.get<std::string>();

  if (type == "sphere") {
    reject_unknown_fields(obj, path, {"type", "center", "radius"});
    Eigen::VectorXd center = expect_vector(expect_field(obj, path, "center"), path + ".center", dim);
    double radius = expect_number(expect_field(obj, path, "radius"), path + ".radius");
    if (radius == 0.0) {
      invalid(path + ".radius", "zero radius describes a point cycle; use {\"type\": \"point\"}");
    }
    return Sphere{std::move(center), radius};
  }
  if (type == "hyperplane") {
    reject_unknown_fields(obj, path, {"type", "normal", "offset", "orientation"});
    Eigen::VectorXd normal = expect_vector(expect_field(obj, path, "normal"), path + ".normal", dim);
    double offset = expect_number(expect_field(obj, path, "offset"), path + ".offset");
    const json& ori = expect_field(obj, path, "orientation");
    if (!ori.is_number_integer() ||
        (ori.get<long long>() != 1 && ori.get<long long>() != -1)) {
      invalid(path + ".orientation", "expected 1 or -1");
    }
    double len = normal.norm();
    if (len <= 0.0) invalid(path + ".normal", "zero normal vector");
    if (std::fabs(len - 1.0) > 1e-12) {
      std::ostringstream note;
      note << path << ".normal: rescaled to unit length (was " << len
           << "); offset rescaled to match";
      notes.push_back(note.str());
      normal /= len;
      offset /= len;
    }
    Hyperplane h;
    h.unit_normal = std::move(normal);
    h.offset = offset;
    h.orientation = static_cast<int>(ori.get<long long>());
    return h;
  }
  if (type == "point") {
    reject_unknown_fields(obj, path, {"type", "coords"});
    Eigen::VectorXd coords = expect_vector(expect_field(obj, path, "coords"), path + ".coords", dim);
    return PointSphere{std::move(coords)};
  }
  invalid(path + ".type", "expected \"sphere\", \"hyperplane\" or \"point\", got \"" + type + "\"");
}

}  // namespace

ParsedConfig parse_configuration_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GeometryError(ErrorCode::ParseError, e.what());
  }
  return parse_configuration_json(doc);
}

ParsedConfig parse_configuration_json(const json& doc) {
  if (!doc.is_object()) invalid("$", "expected a top-level object");
  reject_unknown_fields(doc, "$", {"dimension", "cycles", "label"});

  const json& dim_field = expect_field(doc, "$", "dimension");
  if (!dim_field.is_number_integer()) invalid("$.dimension", "expected an integer");
  long long dim_ll = dim_field.get<long long>();
  if (dim_ll < 2) {
    throw GeometryError(ErrorCode::UnsupportedDimension,
                        "$.dimension: expected an integer >= 2, got " + std::to_string(dim_ll));
  }
  if (dim_ll > 64) invalid("$.dimension", "dimension too large (limit 64)");
  const int dim = static_cast<int>(dim_ll);

  ParsedConfig out;
  out.config.dim = dim;
  if (auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) invalid("$.label", "expected a string");
    out.config.label = it->get<std::string>();
  }

  const json& cycles = expect_field(doc, "$", "cycles");
  if (!cycles.is_array()) invalid("$.cycles", "expected an array");
  if (cycles.empty()) invalid("$.cycles", "expected at least one cycle");
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    out.config.cycles.push_back(
        parse_cycle(cycles[i], "cycles[" + std::to_string(i) + "]", dim, out.notes));
  }
  return out;
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  // Flush signed zeros so serialized vectors have one canonical form.
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i] == 0.0 ? 0.0 : v[i]);
  return arr;
}

ordered_json cycle_to_json(const Cycle& cycle) {
  ordered_json obj;
  if (const auto* s = std::get_if<Sphere>(&cycle)) {
    obj["type"] = "sphere";
    obj["center"] = vector_to_json(s->center);
    obj["radius"] = s->signed_radius;
  } else if (const auto* h = std::get_if<Hyperplane>(&cycle)) {
    obj["type"] = "hyperplane";
    obj["normal"] = vector_to_json(h->unit_normal);
    obj["offset"] = h->offset;
    obj["orientation"] = h->orientation;
  } else {
    const auto& p = std::get<PointSphere>(cycle);
    obj["type"] = "point";
    obj["coords"] = vector_to_json(p.coords);
  }
  return obj;
}

ordered_json configuration_to_json(const Configuration& cfg) {
  ordered_json doc;
  doc["dimension"] = cfg.dim;
  ordered_json cycles = ordered_json::array();
  for (const auto& c : cfg.cycles) cycles.push_back(cycle_to_json(c));
  doc["cycles"] = std::move(cycles);
  if (!cfg.label.empty()) doc["label"] = cfg.label;
  return doc;
}

std::string write_configuration(const Configuration& cfg) {
  return configuration_to_json(cfg).dump(2) + "\n";
}

ordered_json error_to_json(const GeometryError& err) {
  ordered_json doc;
  doc["ok"] = false;
  doc["tool_version"] = kToolVersion;
  ordered_json e;
  e["code"] = error_code_name(err.code());
  e["message"] = err.what();
  if (err.subset_index() >= 0) e["subset"] = err.subset_index();
  doc["error"] = std::move(e);
  return doc;
}

}  // namespace apollo
