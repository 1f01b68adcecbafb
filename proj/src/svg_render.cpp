#include "apollo/svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

namespace apollo {

namespace {

struct Box {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  bool valid() const { return xmin <= xmax && ymin <= ymax; }
};

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // flush -0
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape_text(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

void grow_for_cycle(Box& box, const Cycle& c) {
  if (const auto* s = std::get_if<Sphere>(&c)) {
    double r = std::fabs(s->signed_radius);
    box.add(s->center[0] - r, s->center[1] - r);
    box.add(s->center[0] + r, s->center[1] + r);
  } else if (const auto* p = std::get_if<PointSphere>(&c)) {
    box.add(p->coords[0], p->coords[1]);
  }
  // Hyperplanes are unbounded; they get clipped to whatever box the rest spans.
}

// Clips the infinite line {base + t*dir} to the box; returns segment endpoints.
std::optional<std::array<double, 4>> clip_line(const Box& box, const Eigen::VectorXd& base,
                                               const Eigen::VectorXd& dir) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  const double p[4] = {-dir[0], dir[0], -dir[1], dir[1]};
  const double q[4] = {base[0] - box.xmin, box.xmax - base[0], base[1] - box.ymin,
                       box.ymax - base[1]};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;  // parallel and outside
      continue;
    }
    double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
  }
  if (t0 > t1 || !std::isfinite(t0) || !std::isfinite(t1)) return std::nullopt;
  return std::array<double, 4>{base[0] + t0 * dir[0], base[1] + t0 * dir[1],
                               base[0] + t1 * dir[0], base[1] + t1 * dir[1]};
}

class SvgWriter {
 public:
  SvgWriter(const Box& box, double stroke) : box_(box), stroke_(stroke) {}

  // World coordinates go in, SVG coordinates (y flipped) come out.
  double sx(double x) const { return x; }
  double sy(double y) const { return -y; }

  void circle(double cx, double cy, double r, const std::string& color, bool filled,
              double width_factor = 1.0) {
    out_ << "    <circle cx=\"" << fmt(sx(cx)) << "\" cy=\"" << fmt(sy(cy)) << "\" r=\"" << fmt(r)
         << "\"";
    if (filled) {
      out_ << " fill=\"" << color << "\"";
    } else {
      out_ << " fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
           << fmt(stroke_ * width_factor) << "\"";
    }
    out_ << "/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& color, bool dashed) {
    out_ << "    <line x1=\"" << fmt(sx(x1)) << "\" y1=\"" << fmt(sy(y1)) << "\" x2=\""
         << fmt(sx(x2)) << "\" y2=\"" << fmt(sy(y2)) << "\" stroke=\"" << color
         << "\" stroke-width=\"" << fmt(stroke_) << "\"";
    if (dashed) out_ << " stroke-dasharray=\"" << fmt(4.0 * stroke_) << " " << fmt(3.0 * stroke_) << "\"";
    out_ << "/>\n";
  }

  void text(double x, double y, const std::string& label, double size) {
    out_ << "    <text x=\"" << fmt(sx(x)) << "\" y=\"" << fmt(sy(y)) << "\" font-size=\""
         << fmt(size) << "\" font-family=\"sans-serif\" fill=\"#222222\">" << escape_text(label)
         << "</text>\n";
  }

  void open_group(const std::string& name) { out_ << "  <g id=\"" << name << "\">\n"; }
  void close_group() { out_ << "  </g>\n"; }

  std::string finish(int width) {
    double dx = box_.xmax - box_.xmin;
    double dy = box_.ymax - box_.ymin;
    int height = std::max(1, static_cast<int>(std::lround(width * dy / dx)));
    std::ostringstream doc;
    doc << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"" << fmt(box_.xmin) << " " << fmt(-box_.ymax) << " " << fmt(dx)
        << " " << fmt(dy) << "\">\n";
    doc << out_.str();
    doc << "</svg>\n";
    return doc.str();
  }

 private:
  Box box_;
  double stroke_;
  std::ostringstream out_;
};

void draw_cycle(SvgWriter& w, const Box& box, const Cycle& c, const std::string& pos_color,
                const std::string& neg_color, double dot_radius) {
  if (const auto* s = std::get_if<Sphere>(&c)) {
    const std::string& color = s->signed_radius >= 0.0 ? pos_color : neg_color;
    w.circle(s->center[0], s->center[1], std::fabs(s->signed_radius), color, false);
  } else if (const auto* p = std::get_if<PointSphere>(&c)) {
    w.circle(p->coords[0], p->coords[1], dot_radius, pos_color, true);
  } else {
    const auto& h = std::get<Hyperplane>(c);
    // Line {x : n.x = offset}; base point offset*n, direction perpendicular.
    Eigen::VectorXd base = h.offset * h.unit_normal;
    Eigen::VectorXd dir(2);
    dir << -h.unit_normal[1], h.unit_normal[0];
    auto seg = clip_line(box, base, dir);
    if (seg) {
      const std::string& color = h.orientation >= 0 ? pos_color : neg_color;
      w.line((*seg)[0], (*seg)[1], (*seg)[2], (*seg)[3], color, false);
    }
  }
}

}  // namespace

std::string render_svg(const Configuration& cfg, const Overlay& overlay,
                       const RenderOptions& opts) {
  if (cfg.dim != 2) {
    throw GeometryError(ErrorCode::UnsupportedDimension,
                        "render_svg: only 2-dimensional scenes can be drawn, got dim=" +
                            std::to_string(cfg.dim));
  }
  for (const auto& c : cfg.cycles) {
    if (cycle_dim(c) != 2) {
      throw GeometryError(ErrorCode::DimensionMismatch, "render_svg: cycle dimension mismatch");
    }
  }

  Box box;
  for (const auto& c : cfg.cycles) grow_for_cycle(box, c);
  for (const auto& c : overlay.cycles) grow_for_cycle(box, c);
  for (const auto& lp : overlay.points) box.add(lp.point[0], lp.point[1]);
  if (!box.valid()) {
    box.add(-1.0, -1.0);
    box.add(1.0, 1.0);
  }
  double extent = std::max({box.xmax - box.xmin, box.ymax - box.ymin, 1e-9});
  // 10% margin on every side; degenerate (single-point) scenes get a unit pad.
  double margin = 0.1 * extent;
  if (box.xmax - box.xmin < 1e-9) margin = std::max(margin, 0.5);
  box.xmin -= margin;
  box.xmax += margin;
  box.ymin -= margin;
  box.ymax += margin;

  double stroke = 0.004 * std::max(box.xmax - box.xmin, box.ymax - box.ymin);
  double dot = 2.0 * stroke;
  SvgWriter w(box, stroke);

  w.open_group("cycles");
  for (const auto& c : cfg.cycles) draw_cycle(w, box, c, "#1f77b4", "#d62728", dot);
  w.close_group();

  if (!overlay.cycles.empty()) {
    w.open_group("overlay-cycles");
    for (const auto& c : overlay.cycles) draw_cycle(w, box, c, "#2ca02c", "#9467bd", dot);
    w.close_group();
  }
  if (!overlay.lines.empty()) {
    w.open_group("overlay-lines");
    for (const auto& l : overlay.lines) {
      auto seg = clip_line(box, l.base, l.direction);
      if (seg) w.line((*seg)[0], (*seg)[1], (*seg)[2], (*seg)[3], "#555555", true);
    }
    w.close_group();
  }
  if (!overlay.points.empty()) {
    w.open_group("overlay-points");
    for (const auto& lp : overlay.points) {
      w.circle(lp.point[0], lp.point[1], 1.4 * dot, "#000000", true);
      if (!lp.label.empty()) {
        w.text(lp.point[0] + 2.5 * dot, lp.point[1] + 2.5 * dot, lp.label, 10.0 * stroke);
      }
    }
    w.close_group();
  }
  return w.finish(opts.width > 0 ? opts.width : 800);
}

}  // namespace apollo
