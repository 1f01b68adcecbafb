#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apollo/apollonius.hpp"

namespace apollo {

enum class ScenarioName {
  Circumcenter,
  Incenter,
  OuterApollonius,
  Mixtilinear,
  SoddyLine,
  Gasket,
  Morita3d,
  Olympiad,
};

const char* to_string(ScenarioName name);
ScenarioName scenario_from_string(const std::string& name);  // throws InvalidParams
std::vector<ScenarioName> all_scenarios();

// One record for all scenarios; each builder reads the fields it needs.
// default_params() fills scenario-appropriate values.
struct ScenarioParams {
  // triangle scenes (circumcenter, incenter, outer_apollonius, mixtilinear)
  Eigen::Vector2d a{0.0, 0.0};
  Eigen::Vector2d b{4.0, 0.0};
  Eigen::Vector2d c{0.0, 3.0};
  Eigen::Vector2d omega_center{1.5, 1.2};
  double omega_radius = 0.3;
  // gasket radii
  double r1 = 1.0;
  double r2 = 2.0;
  double r3 = 3.0;
  // soddy_line ambient dimension (morita3d is fixed at 3)
  int dim = 2;
  // seeded choices: radius jitter (soddy_line, morita3d), circle placement (olympiad)
  std::uint64_t seed = 0;
};

ScenarioParams default_params(ScenarioName name);

struct NamedFact {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct ScenarioReport {
  ScenarioName name = ScenarioName::Incenter;
  Configuration configuration;
  Eigen::VectorXd point;  // the concurrency point of the primary configuration
  std::vector<NamedFact> facts;
  std::vector<std::string> notes;  // skipped pairs, flagged solution choices
  double tol = 0.0;
  double scale = 0.0;
  bool pass = false;
};

Configuration build_scenario(ScenarioName name, const ScenarioParams& params);
ScenarioReport verify_scenario(ScenarioName name, const ScenarioParams& params,
                               double tol = default_tolerances().scenario);

/// Rejection-samples dim+2 spheres (centers in [-1,1]^dim, signed radii with
/// magnitude in [0.1, 0.4]) until the genericity certificate holds with the
/// conditioning margins the verification suites assume. Deterministic per
/// (dim, seed). Throws GenerationExhausted after `budget` attempts.
Configuration random_configuration(int dim, std::uint64_t seed, int* rejections = nullptr,
                                   int budget = 10000);

// --- small geometry helpers used by the builders and their tests ---

double triangle_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c);
Eigen::Vector2d triangle_incenter(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                  const Eigen::Vector2d& c);
double triangle_inradius(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const Eigen::Vector2d& c);
Eigen::Vector2d triangle_circumcenter(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                      const Eigen::Vector2d& c);

/// Oriented line through p and q whose unit normal points toward `toward`
/// (orientation flag +1), so a circle with positive signed radius on that side
/// is tangent exactly when its center distance equals its radius.
Hyperplane line_through(const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                        const Eigen::Vector2d& toward);

/// Centers for spheres with the given positive radii so that every pair is
/// externally tangent (|m_i - m_j| = r_i + r_j), via the Gram matrix of the
/// target distances. Requires radii.size() <= dim+1; throws InvalidParams when
/// the distances do not embed in R^dim.
std::vector<Sphere> tangent_sphere_family(int dim, const std::vector<double>& radii);

}  // namespace apollo
