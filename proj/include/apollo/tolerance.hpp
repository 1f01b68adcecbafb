#pragma once

namespace apollo {

// Every default tolerance constant lives here. Predicates are scale invariant:
// relative thresholds get multiplied by an operand scale at the call site.
struct ToleranceConfig {
  double rank_rel = 1e-10;            // singular-value cutoff, relative to the largest
  double quadric = 1e-12;             // |(X|X)| <= tol * |X|^2
  double projective = 1e-8;           // projective_equal 2x2-minor test
  double tangency = 1e-9;             // solution-tangency residual bound
  double pencil_zero = 1e-12;         // all three pencil coefficients vanish
  double pencil_double_root = 1e-12;  // |disc| below tol * coeff_scale^2 is a double root
  double isotropic_axis = 1e-12;      // |(P|P)| <= tol * |P|^2 rejects a reflection axis
  double at_infinity = 1e-12;         // |p_{n+2}| <= tol * |P| means point at infinity
  double coincident_centers = 1e-5;   // center separation below tol * scale skips a line
  double classify = 1e-10;            // project(): quadric membership and point classification
  double first_level = 1e-8;          // default verification tolerances (times scene scale)
  double second_level = 1e-7;
  double inscribed = 1e-8;
  double inscribed_center = 1e-10;
  double scenario = 1e-7;
};

inline const ToleranceConfig& default_tolerances() {
  static const ToleranceConfig t{};
  return t;
}

}  // namespace apollo
