#include "apollo/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "apollo/json_io.hpp"
#include "apollo/scenarios.hpp"
#include "apollo/svg_render.hpp"

namespace apollo {

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GeometryError(ErrorCode::ParseError, "cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GeometryError(ErrorCode::ValidationError, "cannot write output file: " + path);
  out << content;
}

Configuration load_config(const std::string& path, std::ostream& err) {
  ParsedConfig pc = parse_configuration_text(read_file(path));
  for (const auto& note : pc.notes) err << "note: " << note << "\n";
  return std::move(pc.config);
}

// Tolerance precedence: explicit flag > APOLLONIUS_TOL environment variable >
// built-in default.
double resolve_tol(bool flag_given, double flag_value, double fallback, std::ostream& err) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv("APOLLONIUS_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(v) && v > 0.0) return v;
    err << "warning: ignoring invalid APOLLONIUS_TOL value \"" << env << "\"\n";
  }
  return fallback;
}

void emit(std::ostream& out, const ordered_json& doc) { out << doc.dump(2) << "\n"; }

ordered_json report_head(const char* theorem, bool pass) {
  ordered_json j;
  j["ok"] = true;
  j["tool_version"] = kToolVersion;
  j["theorem"] = theorem;
  j["pass"] = pass;
  return j;
}

ordered_json lines_json(const ConcurrencyReport& rep) {
  ordered_json arr = ordered_json::array();
  for (const auto& l : rep.per_line) {
    ordered_json e;
    e["label"] = l.label;
    e["distance"] = l.distance;
    arr.push_back(std::move(e));
  }
  return arr;
}

ordered_json string_array(const std::vector<std::string>& v) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : v) arr.push_back(s);
  return arr;
}

int cmd_solve(const std::string& input, std::ostream& out, std::ostream& err) {
  Configuration cfg = load_config(input, err);
  if (static_cast<int>(cfg.cycles.size()) != cfg.dim + 1) {
    throw GeometryError(ErrorCode::InvalidParams,
                        "solve expects dimension+1 cycles, got " +
                            std::to_string(cfg.cycles.size()) + " for dimension " +
                            std::to_string(cfg.dim));
  }
  for (const auto& c : cfg.cycles) {
    if (cycle_dim(c) != cfg.dim) {
      throw GeometryError(ErrorCode::DimensionMismatch, "cycle dimension mismatch");
    }
  }
  int improper = 0;
  std::vector<Cycle> roots = solve_apollonius(cfg.cycles, &improper);

  ordered_json j;
  j["ok"] = true;
  j["tool_version"] = kToolVersion;
  j["command"] = "solve";
  j["dimension"] = cfg.dim;
  j["solution_count"] = static_cast<int>(roots.size()) + improper;
  j["improper_solutions"] = improper;
  ordered_json sols = ordered_json::array();
  ordered_json residuals = ordered_json::array();
  for (const auto& root : roots) {
    sols.push_back(cycle_to_json(root));
    double worst = 0.0;
    for (const auto& c : cfg.cycles) worst = std::max(worst, std::fabs(tangency_residual(root, c)));
    residuals.push_back(worst);
  }
  j["solutions"] = std::move(sols);
  j["residuals"] = std::move(residuals);
  if (!cfg.label.empty()) j["label"] = cfg.label;
  emit(out, j);
  return 0;
}

int cmd_verify_first_level(const Configuration& cfg, double tol, std::ostream& out) {
  ConcurrencyReport rep = verify_first_level(cfg, tol);
  ordered_json j = report_head("first_level", rep.pass);
  j["point"] = vector_to_json(rep.point);
  ordered_json residuals = ordered_json::array();
  for (const auto& l : rep.per_line) residuals.push_back(l.distance);
  j["residuals"] = std::move(residuals);
  ordered_json tols;
  tols["tol"] = rep.tol;
  tols["scale"] = rep.scale;
  tols["threshold"] = rep.tol * rep.scale;
  j["tolerances"] = std::move(tols);
  j["line_count"] = rep.line_count;
  j["max_distance"] = rep.max_distance;
  j["lines"] = lines_json(rep);
  j["skipped"] = string_array(rep.skipped);
  emit(out, j);
  return rep.pass ? 0 : 1;
}

int cmd_verify_two_step(const Configuration& cfg, double tol, std::ostream& out) {
  SecondLevelReport rep = verify_second_level(cfg, tol);
  ordered_json j = report_head("two_step", rep.pass);
  j["point"] = vector_to_json(rep.point);
  ordered_json residuals = ordered_json::array();
  ordered_json assignments = ordered_json::array();
  for (const auto& a : rep.per_assignment) {
    residuals.push_back(a.lines.max_distance);
    ordered_json e;
    e["mask"] = a.mask;
    e["line_count"] = a.lines.line_count;
    e["max_distance"] = a.lines.max_distance;
    e["lines"] = lines_json(a.lines);
    e["skipped"] = string_array(a.lines.skipped);
    assignments.push_back(std::move(e));
  }
  j["residuals"] = std::move(residuals);
  ordered_json tols;
  tols["tol"] = rep.tol;
  tols["scale"] = rep.scale;
  tols["threshold"] = rep.tol * rep.scale;
  j["tolerances"] = std::move(tols);
  j["defined_lines"] = rep.defined_lines;
  j["distinct_lines"] = rep.distinct_lines;
  j["reference_line_count"] = rep.reference_line_count;
  j["assignments"] = std::move(assignments);
  emit(out, j);
  return rep.pass ? 0 : 1;
}

int cmd_verify_inscribed(const Configuration& cfg, double tol, int samples, std::uint64_t seed,
                         std::ostream& out) {
  InscribedReport rep = verify_inscribed(cfg, samples, seed, tol);
  ordered_json j = report_head("inscribed", rep.pass);
  j["point"] = vector_to_json(rep.center);
  j["inscribed"] = cycle_to_json(rep.inscribed);
  j["center_distance"] = rep.center_distance;
  j["max_residual"] = rep.max_residual;
  ordered_json residuals = ordered_json::array();
  residuals.push_back(rep.max_residual);
  residuals.push_back(rep.center_distance);
  j["residuals"] = std::move(residuals);
  ordered_json tols;
  tols["tol"] = rep.tol;
  tols["center_tol"] = rep.center_tol;
  tols["scale"] = rep.scale;
  j["tolerances"] = std::move(tols);
  j["samples"] = rep.k;
  j["seed"] = rep.seed;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : rep.per_pair) {
    ordered_json e;
    e["omitted_index"] = p.omitted_index;
    e["samples"] = p.samples;
    e["max_residual"] = p.max_residual;
    e["empty_tangent_set"] = p.empty_tangent_set;
    pairs.push_back(std::move(e));
  }
  j["pairs"] = std::move(pairs);
  emit(out, j);
  return rep.pass ? 0 : 1;
}

Eigen::Vector2d parse_vec2(const nlohmann::json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
    throw GeometryError(ErrorCode::ValidationError, path + ": expected an array of 2 numbers");
  }
  return {value[0].get<double>(), value[1].get<double>()};
}

ScenarioParams load_params_file(const std::string& path, ScenarioName name) {
  ScenarioParams p = default_params(name);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw GeometryError(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) {
    throw GeometryError(ErrorCode::ValidationError, "params: expected a top-level object");
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    const auto& value = *it;
    auto number = [&](const char* k) {
      if (!value.is_number()) {
        throw GeometryError(ErrorCode::ValidationError, std::string("params.") + k +
                                                            ": expected a number");
      }
      return value.get<double>();
    };
    if (key == "a") {
      p.a = parse_vec2(value, "params.a");
    } else if (key == "b") {
      p.b = parse_vec2(value, "params.b");
    } else if (key == "c") {
      p.c = parse_vec2(value, "params.c");
    } else if (key == "omega_center") {
      p.omega_center = parse_vec2(value, "params.omega_center");
    } else if (key == "omega_radius") {
      p.omega_radius = number("omega_radius");
    } else if (key == "r1") {
      p.r1 = number("r1");
    } else if (key == "r2") {
      p.r2 = number("r2");
    } else if (key == "r3") {
      p.r3 = number("r3");
    } else if (key == "dim") {
      if (!value.is_number_integer()) {
        throw GeometryError(ErrorCode::ValidationError, "params.dim: expected an integer");
      }
      p.dim = value.get<int>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer()) {
        throw GeometryError(ErrorCode::ValidationError, "params.seed: expected an integer >= 0");
      }
      long long s = value.get<long long>();
      if (s < 0) {
        throw GeometryError(ErrorCode::ValidationError, "params.seed: expected an integer >= 0");
      }
      p.seed = static_cast<std::uint64_t>(s);
    } else {
      throw GeometryError(ErrorCode::ValidationError, "params: unknown field \"" + key + "\"");
    }
  }
  return p;
}

// Concurrency lines and the point P for drawing on top of a scene.
Overlay first_level_overlay(const Configuration& cfg) {
  Overlay ov;
  auto pairs = apollonius_pairs(cfg);
  for (const auto& pr : pairs) {
    if (!pr.a || !pr.a_prime) continue;
    if (!has_affine_center(*pr.a) || !has_affine_center(*pr.a_prime)) continue;
    try {
      ov.lines.push_back(line_through_centers(*pr.a, *pr.a_prime));
    } catch (const GeometryError&) {
      // coincident centers: nothing to draw for this pair
    }
  }
  ov.points.push_back(LabeledPoint{p_x_point(compute_P(cfg)), "P"});
  return ov;
}

Overlay scenario_overlay(const Configuration& cfg) {
  Overlay ov = first_level_overlay(cfg);
  try {
    ov.cycles.push_back(inscribed_sphere(cfg));
  } catch (const GeometryError&) {
    // no inscribed sphere for this scene (e.g. P' projects to a point)
  }
  return ov;
}

int cmd_scenario(const std::string& name_str, const std::string& params_path, bool tol_given,
                 double tol_flag, const std::string& render_path, int width, std::ostream& out,
                 std::ostream& err) {
  ScenarioName name = scenario_from_string(name_str);
  ScenarioParams params =
      params_path.empty() ? default_params(name) : load_params_file(params_path, name);
  double tol = resolve_tol(tol_given, tol_flag, default_tolerances().scenario, err);
  ScenarioReport rep = verify_scenario(name, params, tol);

  if (!render_path.empty()) {
    RenderOptions opts;
    opts.width = width;
    write_file(render_path, render_svg(rep.configuration, scenario_overlay(rep.configuration), opts));
    err << "note: wrote " << render_path << "\n";
  }

  ordered_json j = report_head("scenario", rep.pass);
  j["name"] = to_string(rep.name);
  j["point"] = vector_to_json(rep.point);
  ordered_json residuals = ordered_json::array();
  ordered_json facts = ordered_json::array();
  for (const auto& f : rep.facts) {
    residuals.push_back(f.residual);
    ordered_json e;
    e["name"] = f.name;
    e["residual"] = f.residual;
    e["tol"] = f.tol;
    e["pass"] = f.pass;
    facts.push_back(std::move(e));
  }
  j["residuals"] = std::move(residuals);
  ordered_json tols;
  tols["tol"] = rep.tol;
  tols["scale"] = rep.scale;
  j["tolerances"] = std::move(tols);
  j["seed"] = params.seed;
  j["facts"] = std::move(facts);
  j["notes"] = string_array(rep.notes);
  j["configuration"] = configuration_to_json(rep.configuration);
  emit(out, j);
  return rep.pass ? 0 : 1;
}

int cmd_random(int dim, std::uint64_t seed, int budget, std::ostream& out, std::ostream& err) {
  int rejections = 0;
  Configuration cfg = random_configuration(dim, seed, &rejections, budget);
  err << "note: accepted after " << rejections << " rejected draw(s)\n";
  emit(out, configuration_to_json(cfg));
  return 0;
}

int cmd_render(const std::string& input, const std::string& output, int width,
               const std::string& overlay_mode, std::ostream& out, std::ostream& err) {
  Configuration cfg = load_config(input, err);
  Overlay ov;
  if (overlay_mode == "solutions") {
    if (static_cast<int>(cfg.cycles.size()) != cfg.dim + 1) {
      throw GeometryError(ErrorCode::InvalidParams,
                          "--overlay solutions expects dimension+1 cycles");
    }
    for (const auto& root : solve_apollonius(cfg.cycles)) ov.cycles.push_back(root);
  } else if (overlay_mode == "first-level") {
    ov = scenario_overlay(cfg);
  } else if (overlay_mode != "none") {
    throw GeometryError(ErrorCode::InvalidParams,
                        "unknown overlay mode \"" + overlay_mode + "\"");
  }
  RenderOptions opts;
  opts.width = width;
  std::string svg = render_svg(cfg, ov, opts);
  write_file(output, svg);

  ordered_json j;
  j["ok"] = true;
  j["tool_version"] = kToolVersion;
  j["command"] = "render";
  j["output"] = output;
  j["width"] = opts.width;
  j["overlay"] = overlay_mode;
  j["bytes"] = svg.size();
  emit(out, j);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oriented-cycle tangency engine: solves Apollonius problems, verifies "
               "concurrency and inscribed-sphere properties, renders planar scenes"};
  app.name("apollo");
  app.require_subcommand(1);

  std::string input, output, theorem, scenario_name, params_path, render_path;
  std::string overlay_mode = "none";
  double tol_flag = 0.0;
  int samples = 16;
  int width = 800;
  int dim = 2;
  int budget = 10000;
  std::uint64_t seed = 0;

  CLI::App* solve = app.add_subcommand("solve", "Solve the oriented tangency problem for dimension+1 cycles");
  solve->add_option("--input", input, "Configuration JSON file")->required();

  CLI::App* verify = app.add_subcommand("verify", "Verify a concurrency or tangency property of dimension+2 cycles");
  verify->add_option("--theorem", theorem, "first-level | two-step | inscribed")->required();
  verify->add_option("--input", input, "Configuration JSON file")->required();
  CLI::Option* verify_tol = verify->add_option("--tol", tol_flag, "Relative tolerance");
  verify->add_option("--samples", samples, "Tangent hyperplane samples per pair (inscribed)");
  verify->add_option("--seed", seed, "Sampling seed (inscribed)");

  CLI::App* scenario = app.add_subcommand("scenario", "Build and verify a named scene");
  scenario->add_option("--name", scenario_name, "Scenario name")->required();
  scenario->add_option("--params", params_path, "Scenario parameter JSON file");
  CLI::Option* scenario_tol = scenario->add_option("--tol", tol_flag, "Relative tolerance");
  scenario->add_option("--render", render_path, "Also write an SVG of the scene");
  scenario->add_option("--width", width, "SVG width in pixels");

  CLI::App* random = app.add_subcommand("random", "Generate a generic random configuration");
  random->add_option("--dim", dim, "Ambient dimension")->required();
  random->add_option("--seed", seed, "Generator seed")->required();
  random->add_option("--budget", budget, "Rejection sampling budget");

  CLI::App* render = app.add_subcommand("render", "Render a planar configuration as SVG");
  render->add_option("--input", input, "Configuration JSON file")->required();
  render->add_option("--output", output, "Output SVG file")->required();
  render->add_option("--width", width, "SVG width in pixels");
  render->add_option("--overlay", overlay_mode, "none | solutions | first-level");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(solve)) return cmd_solve(input, out, err);
    if (app.got_subcommand(verify)) {
      Configuration cfg = load_config(input, err);
      const auto& defaults = default_tolerances();
      if (theorem == "first-level" || theorem == "first_level") {
        double tol = resolve_tol(verify_tol->count() > 0, tol_flag, defaults.first_level, err);
        return cmd_verify_first_level(cfg, tol, out);
      }
      if (theorem == "two-step" || theorem == "two_step") {
        double tol = resolve_tol(verify_tol->count() > 0, tol_flag, defaults.second_level, err);
        return cmd_verify_two_step(cfg, tol, out);
      }
      if (theorem == "inscribed") {
        double tol = resolve_tol(verify_tol->count() > 0, tol_flag, defaults.inscribed, err);
        return cmd_verify_inscribed(cfg, tol, samples, seed, out);
      }
      throw GeometryError(ErrorCode::InvalidParams,
                          "unknown theorem \"" + theorem +
                              "\" (expected first-level, two-step or inscribed)");
    }
    if (app.got_subcommand(scenario)) {
      return cmd_scenario(scenario_name, params_path, scenario_tol->count() > 0, tol_flag,
                          render_path, width, out, err);
    }
    if (app.got_subcommand(random)) return cmd_random(dim, seed, budget, out, err);
    if (app.got_subcommand(render)) return cmd_render(input, output, width, overlay_mode, out, err);
  } catch (const GeometryError& e) {
    emit(out, error_to_json(e));
    return 2;
  } catch (const std::exception& e) {
    ordered_json j;
    j["ok"] = false;
    j["tool_version"] = kToolVersion;
    j["error"] = {{"code", "INTERNAL_ERROR"}, {"message", e.what()}};
    emit(out, j);
    return 2;
  }
  return 2;
}

}  // namespace apollo
