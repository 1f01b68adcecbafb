#include "apollo/lie.hpp"

#include <algorithm>
#include <cmath>

namespace apollo {

namespace {

void require_valid(const LieVec& a, const char* who) {
  if (a.x.size() < 5) {
    throw GeometryError(ErrorCode::DimensionMismatch,
                        std::string(who) + ": vector must live in R^{n+3} with n >= 2");
  }
}

void require_same_dim(const LieVec& a, const LieVec& b, const char* who) {
  require_valid(a, who);
  require_valid(b, who);
  if (a.x.size() != b.x.size()) {
    throw GeometryError(ErrorCode::DimensionMismatch,
                        std::string(who) + ": operands have different dimensions");
  }
}

}  // namespace

LieVec LieVec::normalized() const {
  double n = x.norm();
  return LieVec{n > 0 ? Eigen::VectorXd(x / n) : x};
}

LieVec make_lie_vec(const std::vector<double>& entries) {
  Eigen::VectorXd v(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) v[static_cast<Eigen::Index>(i)] = entries[i];
  LieVec out{std::move(v)};
  require_valid(out, "make_lie_vec");
  return out;
}

double lie_form(const LieVec& a, const LieVec& b) {
  require_same_dim(a, b, "lie_form");
  const int n = a.dim();
  double s = -a.x[0] * b.x[0];
  for (int i = 1; i <= n; ++i) s += a.x[i] * b.x[i];
  s += a.x[n + 1] * b.x[n + 2] + a.x[n + 2] * b.x[n + 1];
  return s;
}

Eigen::MatrixXd lie_gram(int dim) {
  const int m = dim + 3;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  g(0, 0) = -1.0;
  for (int i = 1; i <= dim; ++i) g(i, i) = 1.0;
  g(m - 2, m - 1) = 1.0;
  g(m - 1, m - 2) = 1.0;
  return g;
}

bool is_on_quadric(const LieVec& a, double tol) {
  require_valid(a, "is_on_quadric");
  double n2 = a.x.squaredNorm();
  return std::fabs(lie_form(a, a)) <= tol * n2;
}

bool projective_equal(const LieVec& a, const LieVec& b, double tol) {
  require_same_dim(a, b, "projective_equal");
  const Eigen::Index m = a.x.size();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      worst = std::max(worst, std::fabs(a.x[i] * b.x[j] - a.x[j] * b.x[i]));
    }
  }
  return worst <= tol * a.norm() * b.norm();
}

std::vector<LieVec> orthogonal_complement(int dim, std::span<const LieVec> vs, double rank_rel) {
  const int m = dim + 3;
  if (dim < 2) {
    throw GeometryError(ErrorCode::DimensionMismatch, "orthogonal_complement: dim must be >= 2");
  }
  std::vector<LieVec> basis;
  if (vs.empty()) {
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
      e[i] = 1.0;
      basis.push_back(LieVec{std::move(e)});
    }
    return basis;
  }
  Eigen::MatrixXd g = lie_gram(dim);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(vs.size()), m);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].dim() != dim) {
      throw GeometryError(ErrorCode::DimensionMismatch,
                          "orthogonal_complement: mixed dimensions in input");
    }
    rows.row(static_cast<Eigen::Index>(i)) = (g * vs[i].x).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  int rank = 0;
  if (sigma.size() > 0 && sigma[0] > 0.0) {
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma[i] > rank_rel * sigma[0]) ++rank;
    }
  }
  const Eigen::MatrixXd& v = svd.matrixV();
  for (Eigen::Index c = rank; c < m; ++c) {
    basis.push_back(LieVec{v.col(c)});
  }
  return basis;
}

Decomposition decompose(const LieVec& x, const LieVec& p, double tol) {
  require_same_dim(x, p, "decompose");
  double pp = lie_form(p, p);
  if (std::fabs(pp) <= tol * p.x.squaredNorm()) {
    throw GeometryError(ErrorCode::IsotropicAxis, "decompose: axis is isotropic, (P|P) ~ 0");
  }
  double alpha = lie_form(x, p) / pp;
  LieVec perp{x.x - alpha * p.x};
  bool zero = perp.norm() <= 1e-14 * x.norm();
  return Decomposition{std::move(perp), alpha, zero};
}

LieVec reflect(const LieVec& x, const LieVec& p, double tol) {
  require_same_dim(x, p, "reflect");
  double pp = lie_form(p, p);
  if (std::fabs(pp) <= tol * p.x.squaredNorm()) {
    throw GeometryError(ErrorCode::IsotropicAxis, "reflect: axis is isotropic, (P|P) ~ 0");
  }
  double alpha = lie_form(x, p) / pp;
  return LieVec{x.x - 2.0 * alpha * p.x};
}

namespace {

// Projective root [s:t] can be written two equivalent ways; keep the better
// conditioned representative.
std::pair<double, double> pick_root(double s1, double t1, double s2, double t2) {
  if (std::hypot(s1, t1) >= std::hypot(s2, t2)) return {s1, t1};
  return {s2, t2};
}

}  // namespace

std::vector<LieVec> quadric_pencil_intersect(const LieVec& u0, const LieVec& v0,
                                             const ToleranceConfig& tol) {
  require_same_dim(u0, v0, "quadric_pencil_intersect");
  LieVec u = u0.normalized();
  LieVec v = v0.normalized();
  if (u.norm() == 0.0 || v.norm() == 0.0) {
    throw GeometryError(ErrorCode::DegenerateVector, "quadric_pencil_intersect: zero generator");
  }
  if (projective_equal(u, v, tol.projective)) {
    throw GeometryError(ErrorCode::DependentGenerators,
                        "quadric_pencil_intersect: generators are projectively equal");
  }
  const double a = lie_form(u, u);
  const double b = lie_form(u, v);
  const double c = lie_form(v, v);
  const double coeff = std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
  if (coeff <= tol.pencil_zero) {
    throw GeometryError(ErrorCode::DegeneratePencil,
                        "quadric_pencil_intersect: entire pencil lies on the quadric");
  }
  const double disc = b * b - a * c;
  std::vector<std::pair<double, double>> roots;
  if (std::fabs(disc) <= tol.pencil_double_root * coeff * coeff) {
    roots.push_back(pick_root(-b, a, c, -b));
  } else if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    roots.push_back(pick_root(-b + sq, a, c, -b - sq));
    roots.push_back(pick_root(-b - sq, a, c, -b + sq));
  }
  std::vector<LieVec> out;
  for (auto [s, t] : roots) {
    LieVec root{s * u.x + t * v.x};
    out.push_back(root.normalized());
  }
  return out;
}

}  // namespace apollo
