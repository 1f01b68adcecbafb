#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apollo/cycles.hpp"

namespace apollo {

// n+2 oriented cycles in R^n. Members are geometric cycles; solution vectors at
// intermediate stages may additionally be the improper point, which only exists
// at the LieVec level.
struct Configuration {
  int dim = 0;
  std::vector<Cycle> cycles;
  std::string label;
};

void validate_configuration(const Configuration& config);
std::vector<LieVec> config_lifts(const Configuration& config);

// Max pairwise distance between affine centers plus the largest |radius|
// (hyperplanes contribute |offset|); falls back to 1 for empty scenes.
double scene_scale(const Configuration& config);

struct SubsetDiagnostic {
  int omitted_index = -1;
  int complement_dim = 0;
  int root_count = 0;
  double sigma_ratio = 0.0;        // smallest/largest singular value of the subset rows
  double disc_ratio = 0.0;         // pencil discriminant / coeff_scale^2 (unit generators)
  double center_separation = -1.0; // between the two roots' centers; -1 when undefined
  bool ok = false;
};

struct GenericityCertificate {
  bool ok = false;          // full rank, two distinct roots per subset, (P|P) != 0, P_X finite
  double rank_ratio = 0.0;  // sigma_min / sigma_max of the lifted family
  double pp_ratio = 0.0;    // |(P|P)| / |P|^2
  double pv_ratio = 0.0;    // |p_{n+2}| / |P|
  std::vector<SubsetDiagnostic> subsets;
};

GenericityCertificate genericity_certificate(const Configuration& config);

/// Solutions of the oriented tangency problem for n+1 independent lifts:
/// orthogonal complement (must be 2-dimensional, else RankDeficient) followed
/// by the pencil/quadric intersection.
std::vector<LieVec> solve_apollonius_lifts(int dim, std::span<const LieVec> lifts);

/// Cycle-level wrapper: lifts the inputs, solves and projects the roots.
/// Roots equal to the improper point are counted but not returned.
std::vector<Cycle> solve_apollonius(std::span<const Cycle> cycles, int* improper_count = nullptr);

/// Common perpendicular vector of all n+2 lifts; DegenerateConfiguration when
/// the nullspace is not one-dimensional.
LieVec compute_P(const Configuration& config);

/// Affine concurrency point (p_2/p_{n+2}, ..., p_{n+1}/p_{n+2}).
Eigen::VectorXd p_x_point(const LieVec& p, double tol = default_tolerances().at_infinity);

// Solutions of the subset omitting one cycle. Lifts are always present; the
// projected cycles are nullopt exactly when a root is the improper point.
// Canonical order puts the larger |signed radius| second (points < spheres <
// hyperplanes/improper).
struct ApolloniusPair {
  int omitted_index = -1;
  LieVec a_lift, a_prime_lift;
  std::optional<Cycle> a, a_prime;
};

std::vector<ApolloniusPair> apollonius_pairs(const Configuration& config);

struct Line {
  Eigen::VectorXd base;
  Eigen::VectorXd direction;  // unit, sign-canonicalized
};

Line line_through_centers(const Cycle& a, const Cycle& b,
                          double coincident_tol = default_tolerances().coincident_centers);
double point_line_distance(const Eigen::VectorXd& p, const Line& line);

struct LineRecord {
  std::string label;
  double distance = 0.0;
};

struct ConcurrencyReport {
  Eigen::VectorXd point;
  int line_count = 0;
  double max_distance = 0.0;
  double tol = 0.0;
  double scale = 0.0;
  bool pass = false;
  std::vector<LineRecord> per_line;
  std::vector<std::string> skipped;
};

/// Concurrency of the lines through the centers of every defined pair at the
/// point P_X. Pairs with coincident centers or members without an affine
/// center are skipped and listed.
ConcurrencyReport verify_first_level(const Configuration& config,
                                     double tol = default_tolerances().first_level);

// Which member of each pair plays the unprimed role; signs[i] swaps pair i.
struct PrimeAssignment {
  std::vector<bool> signs;
  static PrimeAssignment canonical(int count) { return PrimeAssignment{std::vector<bool>(count, false)}; }
};

// Enumeration of all assignments modulo the global flip: signs[0] stays false.
std::vector<PrimeAssignment> enumerate_assignments(int count);

struct TwoStepEntry {
  int index = -1;
  bool defined = false;
  std::string reason;  // why the entry is undefined
  std::optional<LieVec> b_lift, b_prime_lift;
  std::optional<Cycle> b, b_prime;
};

/// Second-level solutions: for each i, the subset of the chosen A-set omitting
/// A_i contains the original cycle X_i; removing it leaves B_i (same on the
/// primed side). SecondLevelDegenerate is raised when X_i cannot be identified
/// among the roots; rank-deficient or rootless families yield defined=false.
std::vector<TwoStepEntry> two_step_pairs(const Configuration& config,
                                         const PrimeAssignment& assignment);

struct AssignmentReport {
  std::uint32_t mask = 0;
  ConcurrencyReport lines;
};

struct SecondLevelReport {
  Eigen::VectorXd point;
  std::vector<AssignmentReport> per_assignment;
  int defined_lines = 0;
  int distinct_lines = 0;
  int reference_line_count = 0;  // n * 2^n, reported for comparison only
  double tol = 0.0;
  double scale = 0.0;
  bool pass = false;
};

/// Runs two_step_pairs for every assignment and checks each defined B-line
/// against P_X. Also deduplicates the B-lines by direction+point and reports
/// the distinct count.
SecondLevelReport verify_second_level(const Configuration& config,
                                      double tol = default_tolerances().second_level);

/// The isotropic correction of P:
///   P' = [p_1 : ... : p_{n+2} : p_{n+3} - (P|P)/(2 p_{n+2})],
/// projected to a sphere (or point sphere when (P|P) ~ 0) centered at P_X.
Cycle inscribed_sphere(const Configuration& config);
LieVec inscribed_sphere_lift(const Configuration& config);

/// k oriented hyperplanes tangent to both members of a pair, sampled from
/// random pencils inside the linear system {(T|A)=0, (T|A')=0, t_{n+2}=0}.
/// Throws EmptyTangentSet when the retry budget finds no real solution.
std::vector<Cycle> sample_tangent_hyperplanes(const ApolloniusPair& pair, int k,
                                              std::uint64_t seed);

struct PairTangencyRecord {
  int omitted_index = -1;
  int samples = 0;
  double max_residual = 0.0;
  bool empty_tangent_set = false;
};

struct InscribedReport {
  Cycle inscribed;
  Eigen::VectorXd center;
  double center_distance = 0.0;
  double max_residual = 0.0;
  std::vector<PairTangencyRecord> per_pair;
  double tol = 0.0;
  double center_tol = 0.0;
  double scale = 0.0;
  int k = 0;
  std::uint64_t seed = 0;
  bool pass = false;
};

/// Tangency of the inscribed sphere against sampled common tangent hyperplanes
/// of every pair, plus the center-coincidence check against P_X. Pairs with an
/// empty tangent set contribute no samples (vacuous) and are flagged.
InscribedReport verify_inscribed(const Configuration& config, int k, std::uint64_t seed,
                                 double tol = default_tolerances().inscribed);

}  // namespace apollo
