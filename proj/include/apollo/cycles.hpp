#pragma once

#include <optional>
#include <string>
#include <variant>

#include "apollo/lie.hpp"

namespace apollo {

// Oriented sphere: positive signed_radius means outward orientation, negative
// inward. A zero radius is represented as PointSphere, not as a Sphere.
struct Sphere {
  Eigen::VectorXd center;
  double signed_radius;
};

// Points x with unit_normal . x = offset. The orientation flag picks one of the
// two coorientations; a sphere with signed radius rho touches the plane exactly
// when the signed distance of its center equals orientation * rho.
struct Hyperplane {
  Eigen::VectorXd unit_normal;
  double offset;
  int orientation;  // +1 or -1
};

// Zero-radius sphere; tangency to it means incidence, independent of orientation.
struct PointSphere {
  Eigen::VectorXd coords;
};

using Cycle = std::variant<Sphere, Hyperplane, PointSphere>;

int cycle_dim(const Cycle& c);
bool has_affine_center(const Cycle& c);
Eigen::VectorXd cycle_center(const Cycle& c);  // throws CenterAtInfinity for hyperplanes
double radius_magnitude(const Cycle& c);       // 0 (point), |r| (sphere), +inf (hyperplane)
Cycle reversed(const Cycle& c);                // orientation flip; points are fixed
double pair_scale(const Cycle& a, const Cycle& b);  // max(1, |centers|, |radii|, |offsets|)
std::string cycle_brief(const Cycle& c);

/// Lift into Lie coordinates (r, c, v, w):
///   sphere (m, rho)        -> (rho, m, 1, (rho^2 - |m|^2)/2)
///   point p                -> (0, p, 1, -|p|^2/2)
///   hyperplane (u, d, eps) -> (eps, u, 0, -d)
/// Every lift lands on the quadric (X|X) = 0.
LieVec lift(const Cycle& c);

/// Inverse of lift for quadric vectors. |v| > tol*|X| divides through by v and
/// classifies a point sphere when |r/v| <= tol * max(1, |center|); otherwise a
/// hyperplane with c normalized to a unit vector. Throws NotACycle off the
/// quadric and DegenerateVector for the improper vector (c ~ 0 and v ~ 0).
Cycle project(const LieVec& x, double tol = default_tolerances().classify);

/// project() that reports the improper point as nullopt instead of throwing.
std::optional<Cycle> try_project(const LieVec& x, double tol = default_tolerances().classify);

/// Homogeneous center [c_1 : ... : c_n : v]; v = 0 encodes a point at infinity.
struct HomogeneousCenter {
  Eigen::VectorXd coords;  // length n+1
  int dim() const { return static_cast<int>(coords.size()) - 1; }
  bool at_infinity(double tol = default_tolerances().at_infinity) const;
  Eigen::VectorXd affine() const;  // throws AtInfinity when v ~ 0
};

HomogeneousCenter homogeneous_center(const LieVec& x);

/// Normalized pairing (lift(a) | lift(b)) / (|lift(a)| |lift(b)|); zero exactly
/// at oriented tangency.
double tangency_residual(const Cycle& a, const Cycle& b);

/// Purely Euclidean tangency test, independent of the lift machinery:
///   sphere/sphere        | |m1-m2| - |r1-r2| |           <= tol * scale
///   sphere/hyperplane    | (u.m - d) - eps*r |           <= tol * scale
///   hyperplane/hyperplane |eps1*u1 - eps2*u2|            <= tol
/// Points count as radius-zero spheres.
bool euclidean_tangency_oracle(const Cycle& a, const Cycle& b, double tol);

}  // namespace apollo
