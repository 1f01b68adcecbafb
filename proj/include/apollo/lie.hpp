#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "apollo/errors.hpp"
#include "apollo/tolerance.hpp"

namespace apollo {

/// Homogeneous coordinate vector in R^{n+3}, laid out as (r, c_1..c_n, v, w).
/// Geometric predicates treat it as a projective class: X and s*X are the same
/// object for s != 0.
struct LieVec {
  Eigen::VectorXd x;

  int dim() const { return static_cast<int>(x.size()) - 3; }
  double r() const { return x[0]; }
  Eigen::VectorXd center_part() const { return x.segment(1, dim()); }
  double v() const { return x[x.size() - 2]; }
  double w() const { return x[x.size() - 1]; }
  double norm() const { return x.norm(); }
  LieVec normalized() const;
};

LieVec make_lie_vec(const std::vector<double>& entries);

/// Bilinear form of signature (n+1, 2):
///   (X|Y) = -x_1 y_1 + sum_{i=2..n+1} x_i y_i + x_{n+2} y_{n+3} + x_{n+3} y_{n+2}.
double lie_form(const LieVec& a, const LieVec& b);

/// Matrix of the form on the standard basis of R^{dim+3}.
Eigen::MatrixXd lie_gram(int dim);

/// |(X|X)| <= tol * |X|^2, Euclidean norm on the right; scale invariant.
bool is_on_quadric(const LieVec& a, double tol = default_tolerances().quadric);

/// True when the largest 2x2 minor of the stacked pair is <= tol * |X| * |Y|.
bool projective_equal(const LieVec& a, const LieVec& b,
                      double tol = default_tolerances().projective);

/// Euclidean-orthonormal basis of { Y : (v_i | Y) = 0 for all i }. Rank of the
/// constraint rows is decided by a relative singular-value cutoff. An empty
/// input yields the full standard basis of R^{dim+3}.
std::vector<LieVec> orthogonal_complement(int dim, std::span<const LieVec> vs,
                                          double rank_rel = default_tolerances().rank_rel);

struct Decomposition {
  LieVec perp;        // component orthogonal to the axis (may be the zero vector)
  double alpha;       // coefficient of the axis
  bool perp_is_zero;  // set when the input was proportional to the axis
};

/// X = perp + alpha * P with (perp | P) = 0, alpha = (X|P)/(P|P).
/// Requires a non-isotropic axis: |(P|P)| > tol * |P|^2.
Decomposition decompose(const LieVec& x, const LieVec& p,
                        double tol = default_tolerances().isotropic_axis);

/// R_P(X) = X - 2 (X|P)/(P|P) P. Involution; preserves the form.
LieVec reflect(const LieVec& x, const LieVec& p,
               double tol = default_tolerances().isotropic_axis);

/// Real intersection of the pencil {sU + tV} with the quadric (X|X) = 0:
/// roots of s^2 (U|U) + 2st (U|V) + t^2 (V|V). Returns two, one (double root)
/// or zero unit vectors. Throws DependentGenerators when U and V are
/// projectively equal, DegeneratePencil when the whole pencil is isotropic.
std::vector<LieVec> quadric_pencil_intersect(const LieVec& u, const LieVec& v,
                                             const ToleranceConfig& tol = default_tolerances());

}  // namespace apollo
