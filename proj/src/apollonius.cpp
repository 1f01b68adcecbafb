#include "apollo/apollonius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "apollo/rng.hpp"

namespace apollo {

namespace {

std::vector<LieVec> lifts_without(const std::vector<LieVec>& all, int omit) {
  std::vector<LieVec> out;
  out.reserve(all.size() - 1);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (static_cast<int>(i) != omit) out.push_back(all[i]);
  }
  return out;
}

double sort_key(const std::optional<Cycle>& c) {
  if (!c) return std::numeric_limits<double>::infinity();  // improper point
  return radius_magnitude(*c);
}

std::string assignment_label(std::uint32_t mask, int index) {
  std::ostringstream os;
  os << "assignment=" << mask << ",omit=" << index;
  return os.str();
}

}  // namespace

void validate_configuration(const Configuration& config) {
  if (config.dim < 2) {
    throw GeometryError(ErrorCode::UnsupportedDimension,
                        "configuration dimension must be at least 2");
  }
  if (static_cast<int>(config.cycles.size()) != config.dim + 2) {
    throw GeometryError(ErrorCode::InvalidParams,
                        "configuration must contain exactly dim+2 cycles");
  }
  for (const auto& c : config.cycles) {
    if (cycle_dim(c) != config.dim) {
      throw GeometryError(ErrorCode::DimensionMismatch,
                          "configuration cycle has inconsistent dimension");
    }
  }
}

std::vector<LieVec> config_lifts(const Configuration& config) {
  std::vector<LieVec> out;
  out.reserve(config.cycles.size());
  for (const auto& c : config.cycles) out.push_back(lift(c));
  return out;
}

double scene_scale(const Configuration& config) {
  std::vector<Eigen::VectorXd> centers;
  double max_r = 0.0;
  for (const auto& c : config.cycles) {
    if (has_affine_center(c)) centers.push_back(cycle_center(c));
    if (const auto* s = std::get_if<Sphere>(&c)) {
      max_r = std::max(max_r, std::fabs(s->signed_radius));
    } else if (const auto* h = std::get_if<Hyperplane>(&c)) {
      max_r = std::max(max_r, std::fabs(h->offset));
    }
  }
  double max_d = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      max_d = std::max(max_d, (centers[i] - centers[j]).norm());
    }
  }
  double s = max_d + max_r;
  return s > 0.0 ? s : 1.0;
}

std::vector<LieVec> solve_apollonius_lifts(int dim, std::span<const LieVec> lifts) {
  auto basis = orthogonal_complement(dim, lifts);
  if (basis.size() != 2) {
    if (basis.size() > 2) {
      throw GeometryError(ErrorCode::RankDeficient,
                          "solve: lifted family is rank deficient (complement dimension " +
                              std::to_string(basis.size()) + ")");
    }
    throw GeometryError(ErrorCode::RankDeficient,
                        "solve: over-constrained family, complement dimension " +
                            std::to_string(basis.size()));
  }
  return quadric_pencil_intersect(basis[0], basis[1]);
}

std::vector<Cycle> solve_apollonius(std::span<const Cycle> cycles, int* improper_count) {
  if (cycles.empty()) {
    throw GeometryError(ErrorCode::InvalidParams, "solve: empty input");
  }
  const int n = cycle_dim(cycles[0]);
  if (static_cast<int>(cycles.size()) != n + 1) {
    throw GeometryError(ErrorCode::InvalidParams,
                        "solve: expected exactly dim+1 cycles, got " +
                            std::to_string(cycles.size()));
  }
  std::vector<LieVec> lifted;
  for (const auto& c : cycles) {
    if (cycle_dim(c) != n) {
      throw GeometryError(ErrorCode::DimensionMismatch, "solve: mixed cycle dimensions");
    }
    lifted.push_back(lift(c));
  }
  auto roots = solve_apollonius_lifts(n, lifted);
  std::vector<Cycle> out;
  int improper = 0;
  for (const auto& root : roots) {
    auto c = try_project(root, 1e-9);
    if (c) {
      out.push_back(std::move(*c));
    } else {
      ++improper;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) {
    return radius_magnitude(a) < radius_magnitude(b);
  });
  if (improper_count) *improper_count = improper;
  return out;
}

LieVec compute_P(const Configuration& config) {
  validate_configuration(config);
  auto lifted = config_lifts(config);
  auto basis = orthogonal_complement(config.dim, lifted);
  if (basis.size() != 1) {
    throw GeometryError(ErrorCode::DegenerateConfiguration,
                        "compute_P: lifted family has rank below dim+2 (nullspace dimension " +
                            std::to_string(basis.size()) + ")");
  }
  return basis[0];
}

Eigen::VectorXd p_x_point(const LieVec& p, double tol) {
  const int n = p.dim();
  const double v = p.v();
  if (std::fabs(v) <= tol * p.norm()) {
    throw GeometryError(ErrorCode::AtInfinity, "p_x_point: concurrency point lies at infinity");
  }
  return Eigen::VectorXd(p.center_part() / v);
}

GenericityCertificate genericity_certificate(const Configuration& config) {
  validate_configuration(config);
  GenericityCertificate cert;
  auto lifted = config_lifts(config);
  const int n = config.dim;

  Eigen::MatrixXd g = lie_gram(n);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(lifted.size()), n + 3);
  for (std::size_t i = 0; i < lifted.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) = (g * lifted[i].x).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto& sigma = svd.singularValues();
  cert.rank_ratio = sigma[0] > 0.0 ? sigma[sigma.size() - 1] / sigma[0] : 0.0;
  bool full_rank = cert.rank_ratio > default_tolerances().rank_rel;

  bool subsets_ok = true;
  for (int omit = 0; omit < n + 2; ++omit) {
    SubsetDiagnostic diag;
    diag.omitted_index = omit;
    auto sub = lifts_without(lifted, omit);
    {
      Eigen::MatrixXd sub_rows(static_cast<Eigen::Index>(sub.size()), n + 3);
      for (std::size_t i = 0; i < sub.size(); ++i) {
        sub_rows.row(static_cast<Eigen::Index>(i)) = (g * sub[i].x).transpose();
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> sub_svd(sub_rows);
      const auto& ss = sub_svd.singularValues();
      diag.sigma_ratio = ss[0] > 0.0 ? ss[ss.size() - 1] / ss[0] : 0.0;
    }
    auto basis = orthogonal_complement(n, sub);
    diag.complement_dim = static_cast<int>(basis.size());
    if (basis.size() == 2) {
      LieVec u = basis[0].normalized();
      LieVec v = basis[1].normalized();
      double a = lie_form(u, u), b = lie_form(u, v), c = lie_form(v, v);
      double coeff = std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
      double disc = b * b - a * c;
      diag.disc_ratio = coeff > 0.0 ? disc / (coeff * coeff) : 0.0;
      if (coeff > default_tolerances().pencil_zero &&
          disc > default_tolerances().pencil_double_root * coeff * coeff) {
        auto roots = quadric_pencil_intersect(u, v);
        diag.root_count = static_cast<int>(roots.size());
        if (roots.size() == 2) {
          auto c1 = try_project(roots[0], 1e-9);
          auto c2 = try_project(roots[1], 1e-9);
          if (c1 && c2 && has_affine_center(*c1) && has_affine_center(*c2)) {
            diag.center_separation = (cycle_center(*c1) - cycle_center(*c2)).norm();
          }
          diag.ok = true;
        }
      }
    }
    subsets_ok = subsets_ok && diag.ok;
    cert.subsets.push_back(std::move(diag));
  }

  if (full_rank) {
    auto basis = orthogonal_complement(n, lifted);
    if (basis.size() == 1) {
      const LieVec& p = basis[0];
      cert.pp_ratio = std::fabs(lie_form(p, p)) / p.x.squaredNorm();
      cert.pv_ratio = std::fabs(p.v()) / p.norm();
    }
  }

  cert.ok = full_rank && subsets_ok && cert.pp_ratio > default_tolerances().isotropic_axis &&
            cert.pv_ratio > default_tolerances().at_infinity;
  return cert;
}

std::vector<ApolloniusPair> apollonius_pairs(const Configuration& config) {
  validate_configuration(config);
  auto lifted = config_lifts(config);
  std::vector<ApolloniusPair> pairs;
  for (int omit = 0; omit < static_cast<int>(lifted.size()); ++omit) {
    auto sub = lifts_without(lifted, omit);
    std::vector<LieVec> roots;
    try {
      roots = solve_apollonius_lifts(config.dim, sub);
    } catch (const GeometryError& e) {
      throw GeometryError(ErrorCode::NotGeneric,
                          "subset omitting cycle " + std::to_string(omit) +
                              " is degenerate: " + e.what(),
                          omit);
    }
    if (roots.size() != 2) {
      throw GeometryError(ErrorCode::NotGeneric,
                          "subset omitting cycle " + std::to_string(omit) + " has " +
                              std::to_string(roots.size()) + " solutions, expected 2",
                          omit);
    }
    ApolloniusPair pair;
    pair.omitted_index = omit;
    pair.a_lift = roots[0];
    pair.a_prime_lift = roots[1];
    pair.a = try_project(roots[0], 1e-9);
    pair.a_prime = try_project(roots[1], 1e-9);
    if (sort_key(pair.a) > sort_key(pair.a_prime)) {
      std::swap(pair.a, pair.a_prime);
      std::swap(pair.a_lift, pair.a_prime_lift);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

Line line_through_centers(const Cycle& a, const Cycle& b, double coincident_tol) {
  if (!has_affine_center(a) || !has_affine_center(b)) {
    throw GeometryError(ErrorCode::CenterAtInfinity,
                        "line_through_centers: member has no affine center");
  }
  Eigen::VectorXd pa = cycle_center(a);
  Eigen::VectorXd pb = cycle_center(b);
  double scale = pair_scale(a, b);
  Eigen::VectorXd d = pb - pa;
  if (d.norm() <= coincident_tol * scale) {
    throw GeometryError(ErrorCode::CoincidentCenters,
                        "line_through_centers: centers coincide within tolerance");
  }
  d.normalize();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (std::fabs(d[i]) > 1e-12) {
      if (d[i] < 0) d = -d;
      break;
    }
  }
  return Line{std::move(pa), std::move(d)};
}

double point_line_distance(const Eigen::VectorXd& p, const Line& line) {
  Eigen::VectorXd rel = p - line.base;
  return (rel - rel.dot(line.direction) * line.direction).norm();
}

ConcurrencyReport verify_first_level(const Configuration& config, double tol) {
  LieVec p = compute_P(config);
  ConcurrencyReport report;
  report.point = p_x_point(p);
  report.tol = tol;
  report.scale = scene_scale(config);

  auto pairs = apollonius_pairs(config);
  for (const auto& pair : pairs) {
    std::string label = "omit=" + std::to_string(pair.omitted_index);
    if (!pair.a || !pair.a_prime || !has_affine_center(*pair.a) ||
        !has_affine_center(*pair.a_prime)) {
      report.skipped.push_back(label + ": member center at infinity");
      continue;
    }
    try {
      Line line = line_through_centers(*pair.a, *pair.a_prime);
      double dist = point_line_distance(report.point, line);
      report.per_line.push_back(LineRecord{label, dist});
      report.max_distance = std::max(report.max_distance, dist);
    } catch (const GeometryError& e) {
      if (e.code() == ErrorCode::CoincidentCenters) {
        report.skipped.push_back(label + ": coincident centers");
      } else {
        throw;
      }
    }
  }
  report.line_count = static_cast<int>(report.per_line.size());
  report.pass = report.max_distance <= tol * report.scale;
  return report;
}

std::vector<PrimeAssignment> enumerate_assignments(int count) {
  std::vector<PrimeAssignment> out;
  const std::uint32_t total = 1u << (count - 1);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    PrimeAssignment asg;
    asg.signs.resize(count, false);
    for (int i = 1; i < count; ++i) asg.signs[i] = (mask >> (i - 1)) & 1u;
    out.push_back(std::move(asg));
  }
  return out;
}

std::vector<TwoStepEntry> two_step_pairs(const Configuration& config,
                                         const PrimeAssignment& assignment) {
  validate_configuration(config);
  auto pairs = apollonius_pairs(config);
  const int count = static_cast<int>(pairs.size());
  if (static_cast<int>(assignment.signs.size()) != count) {
    throw GeometryError(ErrorCode::InvalidParams,
                        "two_step_pairs: assignment length must equal dim+2");
  }
  auto lifted = config_lifts(config);

  std::vector<LieVec> a_set, ap_set;
  for (int i = 0; i < count; ++i) {
    bool swap = assignment.signs[i];
    a_set.push_back(swap ? pairs[i].a_prime_lift : pairs[i].a_lift);
    ap_set.push_back(swap ? pairs[i].a_lift : pairs[i].a_prime_lift);
  }

  const double eq_tol = default_tolerances().projective;
  auto second_level = [&](const std::vector<LieVec>& family, int omit, const char* side,
                          TwoStepEntry& entry) -> std::optional<LieVec> {
    auto sub = lifts_without(family, omit);
    std::vector<LieVec> roots;
    try {
      roots = solve_apollonius_lifts(config.dim, sub);
    } catch (const GeometryError& e) {
      entry.reason = std::string(side) + " family: " + e.what();
      return std::nullopt;
    }
    int match = -1;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (projective_equal(roots[j], lifted[omit], eq_tol)) {
        match = static_cast<int>(j);
        break;
      }
    }
    if (match < 0) {
      throw GeometryError(ErrorCode::SecondLevelDegenerate,
                          "two_step_pairs: original cycle " + std::to_string(omit) +
                              " not found among the " + side + " second-level solutions",
                          omit);
    }
    if (roots.size() < 2) {
      entry.reason = std::string(side) + " family: double root, companion solution missing";
      return std::nullopt;
    }
    return roots[1 - match];
  };

  std::vector<TwoStepEntry> entries;
  for (int i = 0; i < count; ++i) {
    TwoStepEntry entry;
    entry.index = i;
    std::optional<LieVec> b = second_level(a_set, i, "unprimed", entry);
    std::optional<LieVec> bp;
    if (b) bp = second_level(ap_set, i, "primed", entry);
    if (b && bp) {
      if (projective_equal(*b, *bp, eq_tol)) {
        entry.reason = "B and B' coincide";
      } else {
        entry.defined = true;
        entry.b_lift = *b;
        entry.b_prime_lift = *bp;
        entry.b = try_project(*b, 1e-9);
        entry.b_prime = try_project(*bp, 1e-9);
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

namespace {

struct CanonicalLine {
  Eigen::VectorXd direction;
  Eigen::VectorXd foot;  // perpendicular foot from the origin
};

CanonicalLine canonicalize(const Line& line) {
  Eigen::VectorXd d = line.direction;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (std::fabs(d[i]) > 1e-12) {
      if (d[i] < 0) d = -d;
      break;
    }
  }
  Eigen::VectorXd foot = line.base - line.base.dot(d) * d;
  return CanonicalLine{std::move(d), std::move(foot)};
}

}  // namespace

SecondLevelReport verify_second_level(const Configuration& config, double tol) {
  LieVec p = compute_P(config);
  SecondLevelReport report;
  report.point = p_x_point(p);
  report.tol = tol;
  report.scale = scene_scale(config);
  report.reference_line_count = config.dim * (1 << config.dim);

  std::vector<CanonicalLine> seen;
  bool all_pass = true;
  auto assignments = enumerate_assignments(config.dim + 2);
  for (std::size_t ai = 0; ai < assignments.size(); ++ai) {
    AssignmentReport areport;
    areport.mask = static_cast<std::uint32_t>(ai);
    areport.lines.point = report.point;
    areport.lines.tol = tol;
    areport.lines.scale = report.scale;

    auto entries = two_step_pairs(config, assignments[ai]);
    for (const auto& entry : entries) {
      std::string label = assignment_label(areport.mask, entry.index);
      if (!entry.defined) {
        areport.lines.skipped.push_back(label + ": " + entry.reason);
        continue;
      }
      if (!entry.b || !entry.b_prime || !has_affine_center(*entry.b) ||
          !has_affine_center(*entry.b_prime)) {
        areport.lines.skipped.push_back(label + ": member center at infinity");
        continue;
      }
      try {
        Line line = line_through_centers(*entry.b, *entry.b_prime);
        double dist = point_line_distance(report.point, line);
        areport.lines.per_line.push_back(LineRecord{label, dist});
        areport.lines.max_distance = std::max(areport.lines.max_distance, dist);

        CanonicalLine canon = canonicalize(line);
        bool duplicate = false;
        for (const auto& other : seen) {
          if ((canon.direction - other.direction).norm() <= 1e-7 &&
              (canon.foot - other.foot).norm() <= 1e-6 * report.scale) {
            duplicate = true;
            break;
          }
        }
        if (!duplicate) seen.push_back(std::move(canon));
      } catch (const GeometryError& e) {
        if (e.code() == ErrorCode::CoincidentCenters) {
          areport.lines.skipped.push_back(label + ": coincident centers");
        } else {
          throw;
        }
      }
    }
    areport.lines.line_count = static_cast<int>(areport.lines.per_line.size());
    areport.lines.pass = areport.lines.max_distance <= tol * report.scale;
    all_pass = all_pass && areport.lines.pass;
    report.defined_lines += areport.lines.line_count;
    report.per_assignment.push_back(std::move(areport));
  }
  report.distinct_lines = static_cast<int>(seen.size());
  report.pass = all_pass;
  return report;
}

LieVec inscribed_sphere_lift(const Configuration& config) {
  LieVec p = compute_P(config);
  const double v = p.v();
  if (std::fabs(v) <= default_tolerances().at_infinity * p.norm()) {
    throw GeometryError(ErrorCode::AtInfinity,
                        "inscribed_sphere: concurrency point lies at infinity");
  }
  LieVec pp = p;
  pp.x[pp.x.size() - 1] -= lie_form(p, p) / (2.0 * v);
  return pp;
}

Cycle inscribed_sphere(const Configuration& config) {
  return project(inscribed_sphere_lift(config), 1e-9);
}

std::vector<Cycle> sample_tangent_hyperplanes(const ApolloniusPair& pair, int k,
                                              std::uint64_t seed) {
  if (k < 1) {
    throw GeometryError(ErrorCode::InvalidParams, "sample_tangent_hyperplanes: k must be >= 1");
  }
  const int n = pair.a_lift.dim();
  const int m = n + 3;
  Eigen::MatrixXd g = lie_gram(n);
  Eigen::MatrixXd rows(3, m);
  rows.row(0) = (g * pair.a_lift.x).transpose();
  rows.row(1) = (g * pair.a_prime_lift.x).transpose();
  rows.row(2) = Eigen::RowVectorXd::Zero(m);
  rows(2, m - 2) = 1.0;  // v-coordinate must vanish: solutions are hyperplanes

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > default_tolerances().rank_rel * sigma[0]) ++rank;
  }
  const int space_dim = m - rank;
  if (space_dim < 2) {
    throw GeometryError(ErrorCode::RankDeficient,
                        "sample_tangent_hyperplanes: constraint system leaves no pencil");
  }
  Eigen::MatrixXd basis = svd.matrixV().rightCols(space_dim);

  Rng rng(seed);
  std::vector<Cycle> out;
  const int budget = 64;
  for (int s = 0; s < k; ++s) {
    bool found = false;
    for (int attempt = 0; attempt < budget && !found; ++attempt) {
      Eigen::VectorXd alpha(space_dim), beta(space_dim);
      for (int i = 0; i < space_dim; ++i) alpha[i] = rng.uniform(-1.0, 1.0);
      for (int i = 0; i < space_dim; ++i) beta[i] = rng.uniform(-1.0, 1.0);
      LieVec u{basis * alpha};
      LieVec v{basis * beta};
      if (u.norm() < 1e-6 || v.norm() < 1e-6) continue;
      std::vector<LieVec> roots;
      try {
        roots = quadric_pencil_intersect(u, v);
      } catch (const GeometryError&) {
        continue;
      }
      std::vector<Cycle> valid;
      for (const auto& root : roots) {
        std::optional<Cycle> c;
        try {
          c = try_project(root, 1e-9);
        } catch (const GeometryError&) {
          continue;
        }
        if (!c || !std::holds_alternative<Hyperplane>(*c)) continue;
        if (pair.a && std::fabs(tangency_residual(*c, *pair.a)) > default_tolerances().tangency) {
          continue;
        }
        valid.push_back(std::move(*c));
      }
      if (!valid.empty()) {
        int pick = valid.size() == 1 ? 0 : rng.index(static_cast<int>(valid.size()));
        out.push_back(std::move(valid[pick]));
        found = true;
      }
    }
    if (!found) {
      throw GeometryError(ErrorCode::EmptyTangentSet,
                          "sample_tangent_hyperplanes: no real tangent hyperplane found in " +
                              std::to_string(budget) + " pencil draws",
                          pair.omitted_index);
    }
  }
  return out;
}

InscribedReport verify_inscribed(const Configuration& config, int k, std::uint64_t seed,
                                 double tol) {
  InscribedReport report;
  report.k = k;
  report.seed = seed;
  report.tol = tol;
  report.center_tol = default_tolerances().inscribed_center;
  report.scale = scene_scale(config);

  report.inscribed = inscribed_sphere(config);
  LieVec p = compute_P(config);
  Eigen::VectorXd px = p_x_point(p);
  report.center = cycle_center(report.inscribed);
  report.center_distance = (report.center - px).norm();

  auto pairs = apollonius_pairs(config);
  for (const auto& pair : pairs) {
    PairTangencyRecord rec;
    rec.omitted_index = pair.omitted_index;
    std::vector<Cycle> planes;
    try {
      planes = sample_tangent_hyperplanes(pair, k, seed + 7919u * (pair.omitted_index + 1));
    } catch (const GeometryError& e) {
      if (e.code() == ErrorCode::EmptyTangentSet || e.code() == ErrorCode::RankDeficient) {
        rec.empty_tangent_set = true;
        report.per_pair.push_back(std::move(rec));
        continue;
      }
      throw;
    }
    for (const auto& plane : planes) {
      double res = std::fabs(tangency_residual(plane, report.inscribed));
      rec.max_residual = std::max(rec.max_residual, res);
      ++rec.samples;
    }
    report.max_residual = std::max(report.max_residual, rec.max_residual);
    report.per_pair.push_back(std::move(rec));
  }

  // Pairs without real common tangent hyperplanes contribute nothing; the
  // tangency claim is vacuous for them and the center check still applies.
  report.pass = report.max_residual <= tol &&
                report.center_distance <= report.center_tol * report.scale;
  return report;
}

}  // namespace apollo
