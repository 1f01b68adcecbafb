#pragma once

// Shared utilities for the test binaries: deterministic random cycles,
// constructive tangent partners, an independent planar tangency solver used as
// an oracle, and a small well-formedness checker for the SVG output.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "apollo/apollonius.hpp"
#include "apollo/cycles.hpp"
#include "apollo/rng.hpp"

namespace testutil {

using namespace apollo;

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Eigen::VectorXd random_unit(Rng& rng, int dim) {
  while (true) {
    Eigen::VectorXd u(dim);
    for (int i = 0; i < dim; ++i) u[i] = rng.uniform(-1.0, 1.0);
    double n = u.norm();
    if (n > 0.1) return u / n;
  }
}

inline Eigen::VectorXd random_point(Rng& rng, int dim, double half_width = 2.0) {
  Eigen::VectorXd p(dim);
  for (int i = 0; i < dim; ++i) p[i] = rng.uniform(-half_width, half_width);
  return p;
}

// Any of the three cycle kinds, with bounded data.
inline Cycle random_cycle(Rng& rng, int dim) {
  switch (rng.index(4)) {
    case 0:
    case 1:
      return Sphere{random_point(rng, dim), rng.signed_uniform(0.2, 1.5)};
    case 2: {
      Hyperplane h;
      h.unit_normal = random_unit(rng, dim);
      h.offset = rng.uniform(-2.0, 2.0);
      h.orientation = rng.index(2) == 0 ? 1 : -1;
      return h;
    }
    default:
      return PointSphere{random_point(rng, dim)};
  }
}

// A cycle in oriented contact with `a`, built from the Euclidean tangency
// conditions only (never through the lift).
inline Cycle random_tangent_to(Rng& rng, const Cycle& a, int dim) {
  int kind = rng.index(3);  // 0 sphere, 1 hyperplane, 2 point
  Eigen::VectorXd u = random_unit(rng, dim);
  if (const auto* s = std::get_if<Sphere>(&a)) {
    if (kind == 0) {
      double rho = rng.signed_uniform(0.2, 1.5);
      return Sphere{s->center + std::fabs(s->signed_radius - rho) * u, rho};
    }
    if (kind == 1) {
      Hyperplane h;
      h.orientation = rng.index(2) == 0 ? 1 : -1;
      h.unit_normal = u;
      h.offset = u.dot(s->center) - h.orientation * s->signed_radius;
      return h;
    }
    return PointSphere{s->center + std::fabs(s->signed_radius) * u};
  }
  if (const auto* h = std::get_if<Hyperplane>(&a)) {
    Eigen::VectorXd w = random_point(rng, dim);
    w -= w.dot(h->unit_normal) * h->unit_normal;  // shift along the plane
    if (kind == 0) {
      double rho = rng.signed_uniform(0.2, 1.5);
      Eigen::VectorXd c =
          (h->offset + h->orientation * rho) * h->unit_normal + w;
      return Sphere{std::move(c), rho};
    }
    if (kind == 1) {
      Hyperplane t = *h;  // parallel, same coorientation: contact at infinity
      t.offset = rng.uniform(-2.0, 2.0);
      return t;
    }
    return PointSphere{h->offset * h->unit_normal + w};
  }
  const auto& p = std::get<PointSphere>(a);
  if (kind == 0) {
    double rho = rng.signed_uniform(0.2, 1.5);
    return Sphere{p.coords + std::fabs(rho) * u, rho};
  }
  if (kind == 1) {
    Hyperplane h;
    h.unit_normal = u;
    h.offset = u.dot(p.coords);
    h.orientation = rng.index(2) == 0 ? 1 : -1;
    return h;
  }
  return PointSphere{p.coords};  // two point spheres touch only when equal
}

// ---- independent planar solver ---------------------------------------------
//
// Direct elimination for the circle Apollonius problem with signed radii:
// oriented tangency of (c, rho) and (m_i, r_i) means |c - m_i|^2 = (rho-r_i)^2.
// Subtracting the first equation linearizes the system; centers become affine
// in rho, and substituting back gives one quadratic in rho.

struct PlanarSolution {
  Eigen::Vector2d center;
  double rho;
};

inline std::optional<std::vector<PlanarSolution>> brute_force_circle_tangents(
    const Sphere& s1, const Sphere& s2, const Sphere& s3) {
  const Eigen::Vector2d m1(s1.center[0], s1.center[1]);
  const Eigen::Vector2d m2(s2.center[0], s2.center[1]);
  const Eigen::Vector2d m3(s3.center[0], s3.center[1]);
  const double r1 = s1.signed_radius, r2 = s2.signed_radius, r3 = s3.signed_radius;

  Eigen::Matrix2d a;
  a.row(0) = 2.0 * (m2 - m1).transpose();
  a.row(1) = 2.0 * (m3 - m1).transpose();
  Eigen::Vector2d b(m2.squaredNorm() - m1.squaredNorm() - (r2 * r2 - r1 * r1),
                    m3.squaredNorm() - m1.squaredNorm() - (r3 * r3 - r1 * r1));
  Eigen::Vector2d d(2.0 * (r2 - r1), 2.0 * (r3 - r1));
  double det = a.determinant();
  if (std::fabs(det) < 1e-9) return std::nullopt;  // collinear centers
  Eigen::Matrix2d ainv = a.inverse();
  Eigen::Vector2d c0 = ainv * b;   // center at rho = 0
  Eigen::Vector2d c1 = ainv * d;   // center derivative in rho

  // |c0 + rho c1 - m1|^2 = (rho - r1)^2
  Eigen::Vector2d e = c0 - m1;
  double qa = c1.squaredNorm() - 1.0;
  double qb = 2.0 * (c1.dot(e) + r1);
  double qc = e.squaredNorm() - r1 * r1;
  std::vector<PlanarSolution> out;
  if (std::fabs(qa) < 1e-9) {
    if (std::fabs(qb) < 1e-9) return std::nullopt;
    double rho = -qc / qb;
    out.push_back({c0 + rho * c1, rho});
    return out;
  }
  double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return out;  // no real circle solutions
  double sq = std::sqrt(disc);
  // Citardauq on one root for stability.
  double q = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
  double rho_a = q / qa;
  double rho_b = std::fabs(q) > 0.0 ? qc / q : (-qb - sq) / (2.0 * qa);
  for (double rho : {rho_a, rho_b}) out.push_back({c0 + rho * c1, rho});
  return out;
}

// ---- SVG checking ------------------------------------------------------------

// Minimal scanner for the renderer's output: every element must come from the
// whitelist, tags must nest properly, attributes must be double-quoted.
inline bool svg_well_formed(const std::string& text, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  static const std::vector<std::string> whitelist = {"svg", "g", "circle", "line", "text"};
  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '<') {
      bool closing = i + 1 < text.size() && text[i + 1] == '/';
      std::size_t j = i + (closing ? 2 : 1);
      std::size_t name_start = j;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])))) ++j;
      std::string name = text.substr(name_start, j - name_start);
      bool listed = false;
      for (const auto& w : whitelist) listed = listed || w == name;
      if (!listed) return fail("element not in whitelist: " + name);
      // scan to '>' honoring quoted attribute values
      bool in_quote = false;
      bool self_close = false;
      while (j < text.size()) {
        char t = text[j];
        if (t == '"') in_quote = !in_quote;
        if (!in_quote && t == '>') {
          self_close = text[j - 1] == '/';
          break;
        }
        if (!in_quote && t == '<') return fail("unescaped '<' inside tag");
        ++j;
      }
      if (j >= text.size()) return fail("unterminated tag");
      if (in_quote) return fail("unterminated attribute value");
      if (closing) {
        if (stack.empty() || stack.back() != name) return fail("mismatched closing tag: " + name);
        stack.pop_back();
      } else if (!self_close) {
        stack.push_back(name);
      }
      i = j + 1;
    } else {
      if (c == '&') {
        static const char* ents[] = {"&amp;", "&lt;", "&gt;"};
        bool ok = false;
        for (const char* e : ents) ok = ok || text.compare(i, std::string(e).size(), e) == 0;
        if (!ok) return fail("unescaped '&'");
      }
      if (c == '>') return fail("stray '>'");
      ++i;
    }
  }
  if (!stack.empty()) return fail("unclosed element: " + stack.back());
  return true;
}

}  // namespace testutil
