#include "apollo/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "apollo/rng.hpp"

namespace apollo {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_params(bool cond, const std::string& msg) {
  if (!cond) throw GeometryError(ErrorCode::InvalidParams, msg);
}

Eigen::VectorXd embed(const Eigen::Vector2d& p) {
  Eigen::VectorXd v(2);
  v << p.x(), p.y();
  return v;
}

Cycle sphere2(const Eigen::Vector2d& center, double signed_radius) {
  return Sphere{embed(center), signed_radius};
}

NamedFact make_fact(std::string name, double residual, double tol) {
  NamedFact f;
  f.name = std::move(name);
  f.residual = residual;
  f.tol = tol;
  f.pass = std::isfinite(residual) && residual <= tol;
  return f;
}

// Distance defect of external (|d - (r1+r2)|) or internal (|d - |r1-r2||)
// tangency, on radius magnitudes.
double external_defect(const Sphere& s1, const Sphere& s2) {
  double d = (s1.center - s2.center).norm();
  return std::fabs(d - (std::fabs(s1.signed_radius) + std::fabs(s2.signed_radius)));
}

double internal_defect(const Sphere& s1, const Sphere& s2) {
  double d = (s1.center - s2.center).norm();
  return std::fabs(d - std::fabs(std::fabs(s1.signed_radius) - std::fabs(s2.signed_radius)));
}

// Max distance of the points from the line spanned by the farthest pair.
double collinearity_residual(const std::vector<Eigen::VectorXd>& pts) {
  if (pts.size() < 3) return 0.0;
  std::size_t bi = 0, bj = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d = (pts[i] - pts[j]).norm();
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }
  if (best <= 0.0) return 0.0;
  Line axis{pts[bi], (pts[bj] - pts[bi]).normalized()};
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, point_line_distance(p, axis));
  return worst;
}

const Sphere& as_sphere(const Cycle& c, const char* who) {
  const auto* s = std::get_if<Sphere>(&c);
  if (!s) {
    throw GeometryError(ErrorCode::DegenerateConfiguration,
                        std::string(who) + ": expected a sphere solution, got " + cycle_brief(c));
  }
  return *s;
}

// The two solutions for a family of mutually externally tangent positive
// spheres: the inner one comes back with negative signed radius, the enclosing
// one positive.
struct InnerOuter {
  Sphere inner;  // negative signed radius
  Sphere outer;  // positive signed radius
};

InnerOuter solve_inner_outer(const std::vector<Cycle>& family, const char* who) {
  auto roots = solve_apollonius(family);
  if (roots.size() != 2) {
    throw GeometryError(ErrorCode::DegenerateConfiguration,
                        std::string(who) + ": expected two tangent-sphere solutions, got " +
                            std::to_string(roots.size()));
  }
  const Sphere& s0 = as_sphere(roots[0], who);
  const Sphere& s1 = as_sphere(roots[1], who);
  if (s0.signed_radius < 0.0 && s1.signed_radius > 0.0) return {s0, s1};
  if (s1.signed_radius < 0.0 && s0.signed_radius > 0.0) return {s1, s0};
  throw GeometryError(ErrorCode::DegenerateConfiguration,
                      std::string(who) + ": solutions do not split into inner/outer");
}

struct TriangleScene {
  Eigen::Vector2d a, b, c;
  Hyperplane ab, bc, ca;  // oriented toward the interior
};

TriangleScene make_triangle(const ScenarioParams& p) {
  double area = triangle_area(p.a, p.b, p.c);
  double scale = std::max({(p.a - p.b).norm(), (p.b - p.c).norm(), (p.c - p.a).norm()});
  require_params(area > 1e-9 * scale * scale, "degenerate triangle");
  TriangleScene t;
  t.a = p.a;
  t.b = p.b;
  t.c = p.c;
  t.ab = line_through(p.a, p.b, p.c);
  t.bc = line_through(p.b, p.c, p.a);
  t.ca = line_through(p.c, p.a, p.b);
  return t;
}

double inside_margin(const TriangleScene& t, const Eigen::Vector2d& p) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto* h : {&t.ab, &t.bc, &t.ca}) {
    Eigen::VectorXd pe = embed(p);
    m = std::min(m, h->unit_normal.dot(pe) - h->offset);
  }
  return m;
}

// ---- builders -------------------------------------------------------------

Configuration build_circumcenter(const ScenarioParams& p) {
  TriangleScene t = make_triangle(p);
  require_params(p.omega_radius != 0.0, "omega_radius must be nonzero");
  Configuration cfg;
  cfg.dim = 2;
  cfg.label = "circumcenter";
  cfg.cycles = {PointSphere{embed(t.a)}, PointSphere{embed(t.b)}, PointSphere{embed(t.c)},
                sphere2(p.omega_center, p.omega_radius)};
  return cfg;
}

// Shared by the incenter and outer-Apollonius scenes: three inward-oriented
// side lines and a negatively oriented circle strictly inside the triangle.
Configuration build_incircle_family(const ScenarioParams& p, const char* label) {
  TriangleScene t = make_triangle(p);
  double r = std::fabs(p.omega_radius);
  require_params(r > 0.0, "omega_radius must be nonzero");
  require_params(inside_margin(t, p.omega_center) > r,
                 "circle is not strictly inside the triangle");
  Configuration cfg;
  cfg.dim = 2;
  cfg.label = label;
  cfg.cycles = {sphere2(p.omega_center, -r), Cycle{t.ab}, Cycle{t.bc}, Cycle{t.ca}};
  return cfg;
}

Configuration build_mixtilinear(const ScenarioParams& p) {
  TriangleScene t = make_triangle(p);
  Eigen::Vector2d o = triangle_circumcenter(p.a, p.b, p.c);
  double big_r = (p.a - o).norm();
  Configuration cfg;
  cfg.dim = 2;
  cfg.label = "mixtilinear";
  cfg.cycles = {sphere2(o, big_r), Cycle{t.ab}, Cycle{t.bc}, Cycle{t.ca}};
  return cfg;
}

std::vector<double> seeded_radii(int count, std::uint64_t seed, bool jitter) {
  std::vector<double> radii(count, 1.0);
  if (jitter) {
    Rng rng(seed);
    for (auto& r : radii) r = rng.uniform(0.85, 1.2);
  }
  return radii;
}

Configuration build_gasket(const ScenarioParams& p) {
  require_params(p.r1 > 0.0 && p.r2 > 0.0 && p.r3 > 0.0, "gasket radii must be positive");
  auto family = tangent_sphere_family(2, {p.r1, p.r2, p.r3});
  std::vector<Cycle> cycles(family.begin(), family.end());
  InnerOuter io = solve_inner_outer(cycles, "gasket");
  Configuration cfg;
  cfg.dim = 2;
  cfg.label = "gasket";
  cfg.cycles = cycles;
  cfg.cycles.push_back(Sphere{io.inner.center, -io.inner.signed_radius});
  return cfg;
}

Configuration build_soddy_line(const ScenarioParams& p) {
  require_params(p.dim >= 2, "soddy_line needs dim >= 2");
  auto radii = seeded_radii(p.dim + 1, p.seed, true);
  auto family = tangent_sphere_family(p.dim, radii);
  std::vector<Cycle> cycles(family.begin(), family.end());
  InnerOuter io = solve_inner_outer(cycles, "soddy_line");
  Configuration cfg;
  cfg.dim = p.dim;
  cfg.label = "soddy_line";
  cfg.cycles = cycles;
  cfg.cycles.push_back(Sphere{io.inner.center, -io.inner.signed_radius});
  return cfg;
}

Configuration build_morita3d(const ScenarioParams& p) {
  auto radii = seeded_radii(4, p.seed, p.seed != 0);
  auto family = tangent_sphere_family(3, radii);
  std::vector<Cycle> cycles(family.begin(), family.end());
  InnerOuter io = solve_inner_outer(cycles, "morita3d");
  Configuration cfg;
  cfg.dim = 3;
  cfg.label = "morita3d";
  cfg.cycles = cycles;
  cfg.cycles.push_back(Sphere{io.outer.center, -io.outer.signed_radius});
  return cfg;
}

struct OlympiadScene {
  Configuration config;
  Sphere big;                      // the enclosing circle, positive orientation
  Sphere w1, w2, w3;               // positive members of the configuration
  Sphere w4, w5, w6;               // recovered chain circles, positive orientation
  double chain_defect = 0.0;       // worst tangency defect over the whole chain
  double identification = 0.0;     // worst mismatch when removing known solutions
};

// Splits a two-root solve into (root matching `known`, the other root);
// records the match quality in `mismatch`.
Cycle remove_known(const std::vector<Cycle>& roots, const Cycle& known, double* mismatch) {
  if (roots.size() != 2) {
    throw GeometryError(ErrorCode::DegenerateConfiguration,
                        "chain solve: expected two solutions, got " +
                            std::to_string(roots.size()));
  }
  LieVec target = lift(known);
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < 2; ++i) {
    LieVec l = lift(roots[i]).normalized();
    LieVec tn = target.normalized();
    double worst = 0.0;
    for (Eigen::Index r = 0; r < l.x.size(); ++r) {
      for (Eigen::Index s = r + 1; s < l.x.size(); ++s) {
        worst = std::max(worst, std::fabs(l.x[r] * tn.x[s] - l.x[s] * tn.x[r]));
      }
    }
    if (worst < best) {
      best = worst;
      best_i = i;
    }
  }
  if (mismatch) *mismatch = std::max(*mismatch, best);
  return roots[1 - best_i];
}

OlympiadScene build_olympiad_scene(const ScenarioParams& p) {
  Rng rng(p.seed);
  double rho1 = 0.35 + 0.3 * rng.unit();
  OlympiadScene scene;
  scene.big = Sphere{embed({0.0, 0.0}), 1.0};
  scene.w1 = Sphere{embed({1.0 - rho1, 0.0}), rho1};
  scene.w2 = Sphere{embed({-rho1, 0.0}), 1.0 - rho1};
  Cycle neg_big = reversed(scene.big);

  auto roots34 = solve_apollonius(std::vector<Cycle>{neg_big, scene.w1, scene.w2});
  if (roots34.size() != 2) {
    throw GeometryError(ErrorCode::DegenerateConfiguration,
                        "olympiad: squeeze circles did not come in a pair");
  }
  const Sphere& n0 = as_sphere(roots34[0], "olympiad");
  const Sphere& n1 = as_sphere(roots34[1], "olympiad");
  const Sphere& neg_w3 = n0.center[1] > 0.0 ? n0 : n1;
  const Sphere& neg_w4 = n0.center[1] > 0.0 ? n1 : n0;
  scene.w3 = Sphere{neg_w3.center, -neg_w3.signed_radius};
  scene.w4 = Sphere{neg_w4.center, -neg_w4.signed_radius};

  auto roots5 = solve_apollonius(std::vector<Cycle>{neg_big, scene.w1, scene.w3});
  Cycle neg_w5 = remove_known(roots5, reversed(scene.w2), &scene.identification);
  const Sphere& s5 = as_sphere(neg_w5, "olympiad");
  scene.w5 = Sphere{s5.center, -s5.signed_radius};

  auto roots6 = solve_apollonius(std::vector<Cycle>{neg_big, scene.w2, scene.w3});
  Cycle neg_w6 = remove_known(roots6, reversed(scene.w1), &scene.identification);
  const Sphere& s6 = as_sphere(neg_w6, "olympiad");
  scene.w6 = Sphere{s6.center, -s6.signed_radius};

  scene.config.dim = 2;
  scene.config.label = "olympiad";
  scene.config.cycles = {neg_big, scene.w1, scene.w2, scene.w3};

  double defect = 0.0;
  for (const Sphere* w : {&scene.w3, &scene.w4}) {
    defect = std::max({defect, internal_defect(*w, scene.big), external_defect(*w, scene.w1),
                       external_defect(*w, scene.w2)});
  }
  defect = std::max({defect, internal_defect(scene.w5, scene.big),
                     external_defect(scene.w5, scene.w1), external_defect(scene.w5, scene.w3)});
  defect = std::max({defect, internal_defect(scene.w6, scene.big),
                     external_defect(scene.w6, scene.w2), external_defect(scene.w6, scene.w3)});
  scene.chain_defect = defect;
  return scene;
}

// ---- verifiers ------------------------------------------------------------

ScenarioReport begin_report(ScenarioName name, Configuration cfg, double tol) {
  ScenarioReport rep;
  rep.name = name;
  rep.configuration = std::move(cfg);
  rep.tol = tol;
  rep.scale = scene_scale(rep.configuration);
  return rep;
}

void finish_report(ScenarioReport& rep) {
  rep.pass = !rep.facts.empty();
  for (const auto& f : rep.facts) rep.pass = rep.pass && f.pass;
}

void note_skips(ScenarioReport& rep, const ConcurrencyReport& fl) {
  for (const auto& s : fl.skipped) rep.notes.push_back("skipped line: " + s);
}

ScenarioReport verify_circumcenter(const ScenarioParams& p, double tol) {
  ScenarioReport rep = begin_report(ScenarioName::Circumcenter, build_circumcenter(p), tol);
  ConcurrencyReport fl = verify_first_level(rep.configuration, tol);
  rep.point = fl.point;
  note_skips(rep, fl);
  Eigen::Vector2d o = triangle_circumcenter(p.a, p.b, p.c);
  rep.facts.push_back(make_fact("center-lines-concurrent", fl.max_distance, tol * rep.scale));
  rep.facts.push_back(
      make_fact("point-is-circumcenter", (fl.point - embed(o)).norm(), tol * rep.scale));
  finish_report(rep);
  return rep;
}

ScenarioReport verify_incenter(const ScenarioParams& p, double tol) {
  ScenarioReport rep =
      begin_report(ScenarioName::Incenter, build_incircle_family(p, "incenter"), tol);
  ConcurrencyReport fl = verify_first_level(rep.configuration, tol);
  rep.point = fl.point;
  note_skips(rep, fl);
  Eigen::Vector2d i = triangle_incenter(p.a, p.b, p.c);
  double r_in = triangle_inradius(p.a, p.b, p.c);
  Cycle inscribed = inscribed_sphere(rep.configuration);
  rep.facts.push_back(make_fact("center-lines-concurrent", fl.max_distance, tol * rep.scale));
  rep.facts.push_back(make_fact("point-is-incenter", (fl.point - embed(i)).norm(), tol * rep.scale));
  rep.facts.push_back(make_fact("inscribed-center-at-incenter",
                                (cycle_center(inscribed) - embed(i)).norm(), tol * rep.scale));
  rep.facts.push_back(make_fact("inscribed-radius-is-inradius",
                                std::fabs(radius_magnitude(inscribed) - r_in), tol * rep.scale));
  finish_report(rep);
  return rep;
}

// Centers of the two second-level solutions in the omega slot of the
// incircle-family configuration: the outer Apollonius circles O1 (unprimed,
// smaller tangent circles) and O2 (primed, larger ones).
struct OuterCenters {
  Eigen::VectorXd o1, o2;
};

OuterCenters outer_apollonius_centers(const ScenarioParams& p) {
  Configuration cfg = build_incircle_family(p, "outer_apollonius");
  auto entries = two_step_pairs(cfg, PrimeAssignment::canonical(4));
  const TwoStepEntry& e = entries[0];
  if (!e.defined || !e.b || !e.b_prime || !has_affine_center(*e.b) ||
      !has_affine_center(*e.b_prime)) {
    throw GeometryError(ErrorCode::DegenerateConfiguration,
                        "outer_apollonius: second-level pair in the omega slot is undefined" +
                            (e.reason.empty() ? std::string() : " (" + e.reason + ")"));
  }
  return OuterCenters{cycle_center(*e.b), cycle_center(*e.b_prime)};
}

ScenarioReport verify_outer_apollonius(const ScenarioParams& p, double tol) {
  ScenarioReport rep = begin_report(ScenarioName::OuterApollonius,
                                    build_incircle_family(p, "outer_apollonius"), tol);
  ConcurrencyReport fl = verify_first_level(rep.configuration, tol);
  rep.point = fl.point;
  note_skips(rep, fl);
  Eigen::Vector2d i2 = triangle_incenter(p.a, p.b, p.c);
  Eigen::VectorXd i = embed(i2);

  rep.facts.push_back(make_fact("center-lines-concurrent", fl.max_distance, tol * rep.scale));
  rep.facts.push_back(make_fact("point-is-incenter", (fl.point - i).norm(), tol * rep.scale));

  OuterCenters oc = outer_apollonius_centers(p);
  Line o_line{oc.o1, (oc.o2 - oc.o1).normalized()};
  rep.facts.push_back(
      make_fact("incenter-on-line-o1-o2", point_line_distance(i, o_line), tol * rep.scale));

  // Duality check: place the circle's center on the line joining the incenter
  // to O1 of its own configuration (found by a root search on the direction),
  // then all four of center, incenter, O1, O2 must be collinear.
  double r_in = triangle_inradius(p.a, p.b, p.c);
  double s = 0.55 * (r_in - std::fabs(p.omega_radius));
  if (s <= 0.0) {
    rep.facts.push_back(make_fact("duality-four-points-collinear",
                                  std::numeric_limits<double>::infinity(), tol * rep.scale));
    rep.notes.push_back("duality: circle too large to move inside the triangle");
  } else {
    auto h = [&](double theta) {
      Eigen::Vector2d u(std::cos(theta), std::sin(theta));
      ScenarioParams q = p;
      q.omega_center = i2 + s * u;
      OuterCenters c = outer_apollonius_centers(q);
      Eigen::VectorXd w = c.o1 - i;
      return u.x() * w[1] - u.y() * w[0];
    };
    const int samples = 48;
    double best_theta = 0.0;
    bool bracketed = false;
    double prev_theta = 0.0, prev_h = h(0.0);
    for (int k = 1; k <= samples && !bracketed; ++k) {
      double theta = 2.0 * kPi * k / samples;
      double hk = h(theta);
      if (prev_h == 0.0 || (prev_h < 0.0) != (hk < 0.0)) {
        double lo = prev_theta, hi = theta, flo = prev_h;
        for (int it = 0; it < 80; ++it) {
          double mid = 0.5 * (lo + hi);
          double fm = h(mid);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
          } else {
            lo = mid;
            flo = fm;
          }
        }
        best_theta = 0.5 * (lo + hi);
        bracketed = true;
      }
      prev_theta = theta;
      prev_h = hk;
    }
    if (!bracketed) rep.notes.push_back("duality: no direction sign change found in the scan");
    ScenarioParams q = p;
    q.omega_center = i2 + s * Eigen::Vector2d(std::cos(best_theta), std::sin(best_theta));
    OuterCenters c = outer_apollonius_centers(q);
    double res = collinearity_residual({embed(q.omega_center), i, c.o1, c.o2});
    rep.facts.push_back(make_fact("duality-four-points-collinear", res, tol * rep.scale));
  }
  finish_report(rep);
  return rep;
}

ScenarioReport verify_mixtilinear(const ScenarioParams& p, double tol) {
  ScenarioReport rep = begin_report(ScenarioName::Mixtilinear, build_mixtilinear(p), tol);
  ConcurrencyReport fl = verify_first_level(rep.configuration, tol);
  rep.point = fl.point;
  note_skips(rep, fl);
  Eigen::VectorXd i = embed(triangle_incenter(p.a, p.b, p.c));
  Eigen::Vector2d o = triangle_circumcenter(p.a, p.b, p.c);
  double big_r = (p.a - o).norm();
  const Sphere big{embed(o), big_r};

  rep.facts.push_back(make_fact("center-lines-concurrent", fl.max_distance, tol * rep.scale));
  rep.facts.push_back(make_fact("point-is-incenter", (fl.point - i).norm(), tol * rep.scale));

  // Pair omitting side k leaves the two lines meeting at one vertex; that
  // pair is (vertex point, mixtilinear circle in that corner).
  auto pairs = apollonius_pairs(rep.configuration);
  const Eigen::Vector2d vertex_for[3] = {p.c, p.a, p.b};
  double vertex_res = 0.0;
  double tangent_res = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const ApolloniusPair& pair = pairs[k];
    if (!pair.a || !pair.a_prime) {
      throw GeometryError(ErrorCode::DegenerateConfiguration,
                          "mixtilinear: corner pair has an improper member");
    }
    const auto* pt = std::get_if<PointSphere>(&*pair.a);
    if (!pt) {
      throw GeometryError(ErrorCode::DegenerateConfiguration,
                          "mixtilinear: corner pair has no point solution");
    }
    vertex_res = std::max(vertex_res, (pt->coords - embed(vertex_for[k - 1])).norm());
    tangent_res = std::max(tangent_res, internal_defect(as_sphere(*pair.a_prime, "mixtilinear"), big));
  }
  rep.facts.push_back(make_fact("point-solutions-at-vertices", vertex_res, tol * rep.scale));
  rep.facts.push_back(
      make_fact("mixtilinear-internally-tangent-to-circumcircle", tangent_res, tol * rep.scale));

  auto entries = two_step_pairs(rep.configuration, PrimeAssignment::canonical(4));
  const TwoStepEntry& e = entries[0];
  if (e.defined && e.b && e.b_prime && has_affine_center(*e.b) && has_affine_center(*e.b_prime)) {
    Line so = line_through_centers(*e.b, *e.b_prime);
    rep.facts.push_back(
        make_fact("s-i-o-collinear", point_line_distance(fl.point, so), tol * rep.scale));
    const Sphere& minus_big = as_sphere(*e.b, "mixtilinear");
    double circum_res = (minus_big.center - embed(o)).norm() +
                        std::fabs(std::fabs(minus_big.signed_radius) - big_r);
    rep.facts.push_back(
        make_fact("unprimed-second-level-is-circumcircle", circum_res, tol * rep.scale));
    if (minus_big.signed_radius > 0.0) {
      rep.notes.push_back("second-level circumcircle came back with positive orientation");
    }
  } else {
    rep.facts.push_back(make_fact("s-i-o-collinear", std::numeric_limits<double>::infinity(),
                                  tol * rep.scale));
    rep.notes.push_back("two-step pair in the circumcircle slot undefined: " + e.reason);
  }
  finish_report(rep);
  return rep;
}

ScenarioReport verify_gasket(const ScenarioParams& p, double tol) {
  require_params(p.r1 > 0.0 && p.r2 > 0.0 && p.r3 > 0.0, "gasket radii must be positive");
  auto family = tangent_sphere_family(2, {p.r1, p.r2, p.r3});
  std::vector<Cycle> base(family.begin(), family.end());
  InnerOuter io = solve_inner_outer(base, "gasket");

  Configuration cfg1;
  cfg1.dim = 2;
  cfg1.label = "gasket";
  cfg1.cycles = base;
  cfg1.cycles.push_back(Sphere{io.inner.center, -io.inner.signed_radius});

  Configuration cfg2;
  cfg2.dim = 2;
  cfg2.label = "gasket-outer-family";
  cfg2.cycles = base;
  cfg2.cycles.push_back(Sphere{io.outer.center, -io.outer.signed_radius});

  ScenarioReport rep = begin_report(ScenarioName::Gasket, cfg1, tol);
  ConcurrencyReport fl1 = verify_first_level(cfg1, tol);
  ConcurrencyReport fl2 = verify_first_level(cfg2, tol);
  rep.point = fl1.point;
  note_skips(rep, fl1);
  note_skips(rep, fl2);

  rep.facts.push_back(make_fact("inner-family-concurrent", fl1.max_distance, tol * rep.scale));
  rep.facts.push_back(make_fact("outer-family-concurrent", fl2.max_distance, tol * rep.scale));
  if ((io.outer.center - io.inner.center).norm() > 1e-9 * rep.scale) {
    Line soddy{io.inner.center, (io.outer.center - io.inner.center).normalized()};
    rep.facts.push_back(make_fact("inner-point-on-soddy-line",
                                  point_line_distance(fl1.point, soddy), tol * rep.scale));
    rep.facts.push_back(make_fact("outer-point-on-soddy-line",
                                  point_line_distance(fl2.point, soddy), tol * rep.scale));
  } else {
    rep.notes.push_back(
        "soddy line undefined: the two tangent-circle centers coincide (equal radii)");
  }

  // Curvature relation for the two solutions tangent to all three circles.
  double k1 = 1.0 / p.r1, k2 = 1.0 / p.r2, k3 = 1.0 / p.r3;
  double root = 2.0 * std::sqrt(k1 * k2 + k2 * k3 + k3 * k1);
  double k_inner = k1 + k2 + k3 + root;
  double k_outer = k1 + k2 + k3 - root;  // negative: enclosing circle
  rep.facts.push_back(make_fact("inner-radius-curvature-relation",
                                std::fabs(std::fabs(io.inner.signed_radius) - 1.0 / k_inner),
                                tol * rep.scale));
  rep.facts.push_back(make_fact("outer-radius-curvature-relation",
                                std::fabs(io.outer.signed_radius - 1.0 / std::fabs(k_outer)),
                                tol * rep.scale));
  finish_report(rep);
  return rep;
}

ScenarioReport verify_soddy_line(const ScenarioParams& p, double tol) {
  ScenarioReport rep = begin_report(ScenarioName::SoddyLine, build_soddy_line(p), tol);
  const auto& cycles = rep.configuration.cycles;
  const int n = rep.configuration.dim;

  double tangency = 0.0;
  for (int i = 0; i < n + 1; ++i) {
    for (int j = i + 1; j < n + 1; ++j) {
      tangency = std::max(tangency, external_defect(std::get<Sphere>(cycles[i]),
                                                    std::get<Sphere>(cycles[j])));
    }
  }
  rep.facts.push_back(make_fact("mutual-tangency-construction", tangency, 1e-10 * rep.scale));

  std::vector<Cycle> base(cycles.begin(), cycles.end() - 1);
  InnerOuter io = solve_inner_outer(base, "soddy_line");
  Line soddy = line_through_centers(Sphere{io.inner.center, io.inner.signed_radius},
                                    Sphere{io.outer.center, io.outer.signed_radius});

  ConcurrencyReport fl = verify_first_level(rep.configuration, tol);
  rep.point = fl.point;
  note_skips(rep, fl);
  rep.facts.push_back(make_fact("center-lines-concurrent", fl.max_distance, tol * rep.scale));
  rep.facts.push_back(
      make_fact("point-on-soddy-line", point_line_distance(fl.point, soddy), tol * rep.scale));
  finish_report(rep);
  return rep;
}

ScenarioReport verify_morita3d(const ScenarioParams& p, double tol) {
  ScenarioReport rep = begin_report(ScenarioName::Morita3d, build_morita3d(p), tol);
  ConcurrencyReport fl = verify_first_level(rep.configuration, tol);
  rep.point = fl.point;
  note_skips(rep, fl);
  rep.facts.push_back(make_fact("center-lines-concurrent", fl.max_distance, tol * rep.scale));

  InscribedReport ins = verify_inscribed(rep.configuration, 16, p.seed);
  rep.facts.push_back(make_fact("inscribed-tangent-to-sampled-planes", ins.max_residual, ins.tol));
  rep.facts.push_back(make_fact("inscribed-center-at-concurrency-point", ins.center_distance,
                                ins.center_tol * rep.scale));
  for (const auto& pair : ins.per_pair) {
    if (pair.empty_tangent_set) {
      rep.notes.push_back("pair omit=" + std::to_string(pair.omitted_index) +
                          " has no real common tangent hyperplanes (vacuous)");
    }
  }
  finish_report(rep);
  return rep;
}

ScenarioReport verify_olympiad(const ScenarioParams& p, double tol) {
  OlympiadScene scene = build_olympiad_scene(p);
  ScenarioReport rep = begin_report(ScenarioName::Olympiad, scene.config, tol);
  ConcurrencyReport fl = verify_first_level(rep.configuration, tol);
  rep.point = fl.point;
  note_skips(rep, fl);

  auto line_fact = [&](const char* name, const Sphere& from, const Sphere& to) {
    Line l{from.center, (to.center - from.center).normalized()};
    rep.facts.push_back(make_fact(name, point_line_distance(fl.point, l), tol * rep.scale));
  };
  line_fact("line-o1-o6-through-point", scene.w1, scene.w6);
  line_fact("line-o2-o5-through-point", scene.w2, scene.w5);
  line_fact("line-o3-o4-through-point", scene.w3, scene.w4);
  rep.facts.push_back(make_fact("center-lines-concurrent", fl.max_distance, tol * rep.scale));
  rep.facts.push_back(make_fact("chain-tangencies", scene.chain_defect, tol * rep.scale));
  if (scene.identification > 1e-6) {
    rep.notes.push_back("chain solves matched known circles only loosely");
  }
  finish_report(rep);
  return rep;
}

}  // namespace

// ---- public surface --------------------------------------------------------

const char* to_string(ScenarioName name) {
  switch (name) {
    case ScenarioName::Circumcenter: return "circumcenter";
    case ScenarioName::Incenter: return "incenter";
    case ScenarioName::OuterApollonius: return "outer_apollonius";
    case ScenarioName::Mixtilinear: return "mixtilinear";
    case ScenarioName::SoddyLine: return "soddy_line";
    case ScenarioName::Gasket: return "gasket";
    case ScenarioName::Morita3d: return "morita3d";
    case ScenarioName::Olympiad: return "olympiad";
  }
  return "unknown";
}

ScenarioName scenario_from_string(const std::string& name) {
  for (ScenarioName s : all_scenarios()) {
    if (name == to_string(s)) return s;
  }
  throw GeometryError(ErrorCode::InvalidParams, "unknown scenario name: " + name);
}

std::vector<ScenarioName> all_scenarios() {
  return {ScenarioName::Circumcenter, ScenarioName::Incenter,  ScenarioName::OuterApollonius,
          ScenarioName::Mixtilinear,  ScenarioName::SoddyLine, ScenarioName::Gasket,
          ScenarioName::Morita3d,     ScenarioName::Olympiad};
}

ScenarioParams default_params(ScenarioName name) {
  ScenarioParams p;
  switch (name) {
    case ScenarioName::Circumcenter:
      p.omega_center = {1.0, 1.0};
      p.omega_radius = 0.5;
      break;
    case ScenarioName::Incenter:
      p.omega_center = {1.5, 1.2};
      p.omega_radius = 0.3;
      break;
    case ScenarioName::OuterApollonius:
      p.omega_center = {1.2, 0.9};
      p.omega_radius = 0.3;
      break;
    case ScenarioName::Morita3d:
      p.dim = 3;
      break;
    case ScenarioName::SoddyLine:
      p.dim = 2;
      break;
    default:
      break;
  }
  return p;
}

Configuration build_scenario(ScenarioName name, const ScenarioParams& params) {
  switch (name) {
    case ScenarioName::Circumcenter: return build_circumcenter(params);
    case ScenarioName::Incenter: return build_incircle_family(params, "incenter");
    case ScenarioName::OuterApollonius: return build_incircle_family(params, "outer_apollonius");
    case ScenarioName::Mixtilinear: return build_mixtilinear(params);
    case ScenarioName::SoddyLine: return build_soddy_line(params);
    case ScenarioName::Gasket: return build_gasket(params);
    case ScenarioName::Morita3d: return build_morita3d(params);
    case ScenarioName::Olympiad: return build_olympiad_scene(params).config;
  }
  throw GeometryError(ErrorCode::InvalidParams, "unknown scenario");
}

ScenarioReport verify_scenario(ScenarioName name, const ScenarioParams& params, double tol) {
  switch (name) {
    case ScenarioName::Circumcenter: return verify_circumcenter(params, tol);
    case ScenarioName::Incenter: return verify_incenter(params, tol);
    case ScenarioName::OuterApollonius: return verify_outer_apollonius(params, tol);
    case ScenarioName::Mixtilinear: return verify_mixtilinear(params, tol);
    case ScenarioName::SoddyLine: return verify_soddy_line(params, tol);
    case ScenarioName::Gasket: return verify_gasket(params, tol);
    case ScenarioName::Morita3d: return verify_morita3d(params, tol);
    case ScenarioName::Olympiad: return verify_olympiad(params, tol);
  }
  throw GeometryError(ErrorCode::InvalidParams, "unknown scenario");
}

Configuration random_configuration(int dim, std::uint64_t seed, int* rejections, int budget) {
  if (dim < 2) {
    throw GeometryError(ErrorCode::UnsupportedDimension, "random_configuration needs dim >= 2");
  }
  Rng rng(seed);
  int rejected = 0;
  for (int attempt = 0; attempt < budget; ++attempt) {
    Configuration cfg;
    cfg.dim = dim;
    std::ostringstream label;
    label << "random(dim=" << dim << ",seed=" << seed << ")";
    cfg.label = label.str();
    for (int i = 0; i < dim + 2; ++i) {
      Eigen::VectorXd center(dim);
      for (int d = 0; d < dim; ++d) center[d] = rng.uniform(-1.0, 1.0);
      double r = rng.signed_uniform(0.1, 0.4);
      cfg.cycles.push_back(Sphere{std::move(center), r});
    }

    GenericityCertificate cert = genericity_certificate(cfg);
    double scale = scene_scale(cfg);
    bool accept = cert.ok && cert.rank_ratio >= 1e-6 && cert.pp_ratio >= 1e-4 &&
                  cert.pv_ratio >= 1e-4;
    for (const auto& sub : cert.subsets) {
      accept = accept && sub.ok && sub.sigma_ratio >= 1e-6 && sub.disc_ratio >= 1e-6 &&
               sub.center_separation >= 1e-3 * scale;
    }
    if (accept) {
      if (rejections) *rejections = rejected;
      return cfg;
    }
    ++rejected;
  }
  throw GeometryError(ErrorCode::GenerationExhausted,
                      "random_configuration: no generic sample within " + std::to_string(budget) +
                          " attempts (dim=" + std::to_string(dim) +
                          ", seed=" + std::to_string(seed) + ")");
}

// ---- geometry helpers -------------------------------------------------------

double triangle_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  Eigen::Vector2d u = b - a, v = c - a;
  return 0.5 * std::fabs(u.x() * v.y() - u.y() * v.x());
}

Eigen::Vector2d triangle_incenter(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                  const Eigen::Vector2d& c) {
  double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
  return (la * a + lb * b + lc * c) / (la + lb + lc);
}

double triangle_inradius(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const Eigen::Vector2d& c) {
  double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
  return 2.0 * triangle_area(a, b, c) / (la + lb + lc);
}

Eigen::Vector2d triangle_circumcenter(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                      const Eigen::Vector2d& c) {
  Eigen::Matrix2d m;
  m.row(0) = 2.0 * (b - a).transpose();
  m.row(1) = 2.0 * (c - a).transpose();
  Eigen::Vector2d rhs(b.squaredNorm() - a.squaredNorm(), c.squaredNorm() - a.squaredNorm());
  double det = m.determinant();
  if (std::fabs(det) < 1e-12 * (b - a).norm() * (c - a).norm()) {
    throw GeometryError(ErrorCode::InvalidParams, "circumcenter: collinear vertices");
  }
  return m.inverse() * rhs;
}

Hyperplane line_through(const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                        const Eigen::Vector2d& toward) {
  Eigen::Vector2d dir = q - p;
  double len = dir.norm();
  if (len <= 0.0) {
    throw GeometryError(ErrorCode::InvalidParams, "line_through: coincident points");
  }
  Eigen::Vector2d n(-dir.y() / len, dir.x() / len);
  double d = n.dot(p);
  if (n.dot(toward) - d < 0.0) {
    n = -n;
    d = -d;
  }
  Hyperplane h;
  h.unit_normal = embed(n);
  h.offset = d;
  h.orientation = 1;
  return h;
}

std::vector<Sphere> tangent_sphere_family(int dim, const std::vector<double>& radii) {
  const int m = static_cast<int>(radii.size());
  if (dim < 2 || m < 2 || m > dim + 1) {
    throw GeometryError(ErrorCode::InvalidParams,
                        "tangent_sphere_family: need 2..dim+1 radii and dim >= 2");
  }
  for (double r : radii) {
    if (!(r > 0.0)) {
      throw GeometryError(ErrorCode::InvalidParams, "tangent_sphere_family: radii must be positive");
    }
  }
  auto dist = [&](int i, int j) { return radii[i] + radii[j]; };

  // Gram matrix of the points relative to the first center.
  Eigen::MatrixXd g(m - 1, m - 1);
  for (int i = 1; i < m; ++i) {
    for (int j = 1; j < m; ++j) {
      double d0i = dist(0, i), d0j = dist(0, j), dij = i == j ? 0.0 : dist(i, j);
      g(i - 1, j - 1) = 0.5 * (d0i * d0i + d0j * d0j - dij * dij);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  const auto& lambda = eig.eigenvalues();
  double lmax = std::max(lambda[m - 2], 0.0);
  if (lambda[0] < -1e-9 * std::max(lmax, 1.0)) {
    throw GeometryError(ErrorCode::InvalidParams,
                        "tangent_sphere_family: radii are not realizable in this dimension");
  }
  Eigen::MatrixXd x(m - 1, m - 1);
  for (int k = 0; k < m - 1; ++k) {
    x.row(k) = std::sqrt(std::max(lambda[k], 0.0)) * eig.eigenvectors().col(k).transpose();
  }

  std::vector<Sphere> out;
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(dim);
  out.push_back(Sphere{origin, radii[0]});
  for (int i = 1; i < m; ++i) {
    Eigen::VectorXd center = Eigen::VectorXd::Zero(dim);
    center.head(m - 1) = x.col(i - 1);
    out.push_back(Sphere{std::move(center), radii[i]});
  }
  return out;
}

}  // namespace apollo
