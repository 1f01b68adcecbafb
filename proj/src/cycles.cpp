#include "apollo/cycles.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace apollo {

namespace {

void require_same_dim(const Cycle& a, const Cycle& b, const char* who) {
  if (cycle_dim(a) != cycle_dim(b)) {
    throw GeometryError(ErrorCode::DimensionMismatch,
                        std::string(who) + ": cycles live in different dimensions");
  }
}

}  // namespace

int cycle_dim(const Cycle& c) {
  return std::visit(
      [](const auto& g) -> int {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Sphere>) return static_cast<int>(g.center.size());
        if constexpr (std::is_same_v<T, Hyperplane>) return static_cast<int>(g.unit_normal.size());
        if constexpr (std::is_same_v<T, PointSphere>) return static_cast<int>(g.coords.size());
      },
      c);
}

bool has_affine_center(const Cycle& c) { return !std::holds_alternative<Hyperplane>(c); }

Eigen::VectorXd cycle_center(const Cycle& c) {
  if (const auto* s = std::get_if<Sphere>(&c)) return s->center;
  if (const auto* p = std::get_if<PointSphere>(&c)) return p->coords;
  throw GeometryError(ErrorCode::CenterAtInfinity, "cycle_center: hyperplanes have no affine center");
}

double radius_magnitude(const Cycle& c) {
  if (const auto* s = std::get_if<Sphere>(&c)) return std::fabs(s->signed_radius);
  if (std::holds_alternative<Hyperplane>(c)) return std::numeric_limits<double>::infinity();
  return 0.0;
}

Cycle reversed(const Cycle& c) {
  if (const auto* s = std::get_if<Sphere>(&c)) return Sphere{s->center, -s->signed_radius};
  if (const auto* h = std::get_if<Hyperplane>(&c))
    return Hyperplane{h->unit_normal, h->offset, -h->orientation};
  return c;
}

double pair_scale(const Cycle& a, const Cycle& b) {
  double scale = 1.0;
  auto absorb = [&scale](const Cycle& c) {
    if (const auto* s = std::get_if<Sphere>(&c)) {
      scale = std::max({scale, s->center.norm(), std::fabs(s->signed_radius)});
    } else if (const auto* h = std::get_if<Hyperplane>(&c)) {
      scale = std::max(scale, std::fabs(h->offset));
    } else {
      scale = std::max(scale, std::get<PointSphere>(c).coords.norm());
    }
  };
  absorb(a);
  absorb(b);
  return scale;
}

std::string cycle_brief(const Cycle& c) {
  std::ostringstream os;
  if (const auto* s = std::get_if<Sphere>(&c)) {
    os << "sphere(r=" << s->signed_radius << ")";
  } else if (const auto* h = std::get_if<Hyperplane>(&c)) {
    os << "hyperplane(d=" << h->offset << ", o=" << h->orientation << ")";
  } else {
    os << "point";
  }
  return os.str();
}

LieVec lift(const Cycle& c) {
  const int n = cycle_dim(c);
  Eigen::VectorXd x(n + 3);
  if (const auto* s = std::get_if<Sphere>(&c)) {
    x[0] = s->signed_radius;
    x.segment(1, n) = s->center;
    x[n + 1] = 1.0;
    x[n + 2] = 0.5 * (s->signed_radius * s->signed_radius - s->center.squaredNorm());
  } else if (const auto* p = std::get_if<PointSphere>(&c)) {
    x[0] = 0.0;
    x.segment(1, n) = p->coords;
    x[n + 1] = 1.0;
    x[n + 2] = -0.5 * p->coords.squaredNorm();
  } else {
    const auto& h = std::get<Hyperplane>(c);
    double nn = h.unit_normal.norm();
    if (nn == 0.0) {
      throw GeometryError(ErrorCode::DegenerateVector, "lift: hyperplane normal is zero");
    }
    x[0] = static_cast<double>(h.orientation);
    x.segment(1, n) = h.unit_normal / nn;
    x[n + 1] = 0.0;
    x[n + 2] = -h.offset / nn;
  }
  return LieVec{std::move(x)};
}

Cycle project(const LieVec& x, double tol) {
  auto c = try_project(x, tol);
  if (!c) {
    throw GeometryError(ErrorCode::DegenerateVector,
                        "project: improper vector (center part and v both vanish)");
  }
  return *c;
}

std::optional<Cycle> try_project(const LieVec& x, double tol) {
  if (!is_on_quadric(x, tol)) {
    throw GeometryError(ErrorCode::NotACycle, "project: vector is not on the quadric");
  }
  const int n = x.dim();
  const double nrm = x.norm();
  const double v = x.v();
  if (std::fabs(v) > tol * nrm) {
    Eigen::VectorXd center = x.center_part() / v;
    double r = x.r() / v;
    double scale = std::max(1.0, center.norm());
    if (std::fabs(r) <= tol * scale) return Cycle{PointSphere{std::move(center)}};
    return Cycle{Sphere{std::move(center), r}};
  }
  Eigen::VectorXd c = x.center_part();
  const double cn = c.norm();
  if (cn <= tol * nrm) return std::nullopt;  // improper point
  Eigen::VectorXd unit = c / cn;
  double offset = -x.w() / cn;
  int orientation = x.r() >= 0.0 ? 1 : -1;
  return Cycle{Hyperplane{std::move(unit), offset, orientation}};
}

bool HomogeneousCenter::at_infinity(double tol) const {
  return std::fabs(coords[coords.size() - 1]) <= tol * coords.norm();
}

Eigen::VectorXd HomogeneousCenter::affine() const {
  if (at_infinity()) {
    throw GeometryError(ErrorCode::AtInfinity, "homogeneous center lies at infinity");
  }
  const Eigen::Index n = coords.size() - 1;
  return coords.head(n) / coords[n];
}

HomogeneousCenter homogeneous_center(const LieVec& x) {
  const int n = x.dim();
  Eigen::VectorXd h(n + 1);
  h.head(n) = x.center_part();
  h[n] = x.v();
  if (h.norm() <= 1e-14 * x.norm()) {
    throw GeometryError(ErrorCode::DegenerateVector,
                        "homogeneous_center: all center coordinates vanish");
  }
  return HomogeneousCenter{std::move(h)};
}

double tangency_residual(const Cycle& a, const Cycle& b) {
  require_same_dim(a, b, "tangency_residual");
  LieVec la = lift(a);
  LieVec lb = lift(b);
  return lie_form(la, lb) / (la.norm() * lb.norm());
}

namespace {

struct SphereLike {
  Eigen::VectorXd center;
  double r;
};

std::optional<SphereLike> as_sphere_like(const Cycle& c) {
  if (const auto* s = std::get_if<Sphere>(&c)) return SphereLike{s->center, s->signed_radius};
  if (const auto* p = std::get_if<PointSphere>(&c)) return SphereLike{p->coords, 0.0};
  return std::nullopt;
}

}  // namespace

bool euclidean_tangency_oracle(const Cycle& a, const Cycle& b, double tol) {
  require_same_dim(a, b, "euclidean_tangency_oracle");
  const double scale = pair_scale(a, b);
  auto sa = as_sphere_like(a);
  auto sb = as_sphere_like(b);
  if (sa && sb) {
    double d = (sa->center - sb->center).norm();
    return std::fabs(d - std::fabs(sa->r - sb->r)) <= tol * scale;
  }
  if (sa || sb) {
    const auto& s = sa ? *sa : *sb;
    const auto& h = std::get<Hyperplane>(sa ? b : a);
    double signed_dist = h.unit_normal.dot(s.center) - h.offset;
    return std::fabs(signed_dist - h.orientation * s.r) <= tol * scale;
  }
  const auto& h1 = std::get<Hyperplane>(a);
  const auto& h2 = std::get<Hyperplane>(b);
  Eigen::VectorXd delta = h1.orientation * h1.unit_normal - h2.orientation * h2.unit_normal;
  return delta.norm() <= tol;
}

}  // namespace apollo
