#pragma once

// Static SVG rendering of planar cycle configurations with an optional
// overlay of solution cycles, theorem lines and labeled points.

#include <string>
#include <vector>

#include "apollo/apollonius.hpp"

namespace apollo {

struct LabeledPoint {
  Eigen::VectorXd point;
  std::string label;
};

struct Overlay {
  std::vector<Cycle> cycles;       // solution cycles, drawn in the accent color
  std::vector<Line> lines;         // theorem lines, drawn dashed
  std::vector<LabeledPoint> points;
};

struct RenderOptions {
  int width = 800;
};

// Deterministic standalone SVG of a 2-dimensional scene. The viewBox is the
// bounding box of all finite elements plus a 10% margin; hyperplanes are
// clipped to it. Throws UnsupportedDimension unless cfg.dim == 2.
std::string render_svg(const Configuration& cfg, const Overlay& overlay = {},
                       const RenderOptions& opts = {});

}  // namespace apollo
