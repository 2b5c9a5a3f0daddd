#include "evshare/svg_map.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace evshare {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_map(const Instance& inst, const SolutionFile* sol) {
  const auto& nodes = inst.net.nodes;
  double x0 = nodes[0].pos.x, x1 = x0, y0 = nodes[0].pos.y, y1 = y0;
  for (const auto& n : nodes) {
    x0 = std::min(x0, n.pos.x);
    x1 = std::max(x1, n.pos.x);
    y0 = std::min(y0, n.pos.y);
    y1 = std::max(y1, n.pos.y);
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-6});
  const double margin = 0.06 * span;
  x0 -= margin;
  y0 -= margin;
  const double scale = 760.0 / (span + 2 * margin);
  const double height = (y1 + margin - y0) * scale + 40.0;
  const auto px = [&](double x) { return 20.0 + (x - x0) * scale; };
  const auto py = [&](double y) { return height - 20.0 - (y - y0) * scale; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\""
      << fmt(height + 20.0) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Node centroid P.
  double cx = 0.0, cy = 0.0;
  for (const auto& n : nodes) {
    cx += n.pos.x;
    cy += n.pos.y;
  }
  cx /= static_cast<double>(nodes.size());
  cy /= static_cast<double>(nodes.size());

  for (const auto& n : nodes)
    svg << "<circle class=\"node\" cx=\"" << fmt(px(n.pos.x)) << "\" cy=\"" << fmt(py(n.pos.y))
        << "\" r=\"4\" fill=\"#c4c4c4\"/>\n";

  if (sol) {
    for (std::size_t s = 0; s < sol->stations.size(); ++s) {
      if (sol->z[s] < 0.5) continue;  // only built stations are drawn
      const auto cov = sol->stations[s].covered();
      double sx = 0.0, sy = 0.0;
      for (int n : cov) {
        sx += inst.net.nodes[n].pos.x;
        sy += inst.net.nodes[n].pos.y;
      }
      sx /= static_cast<double>(cov.size());
      sy /= static_cast<double>(cov.size());
      svg << "<circle class=\"station\" cx=\"" << fmt(px(sx)) << "\" cy=\"" << fmt(py(sy))
          << "\" r=\"5\" fill=\"#1a1a1a\"/>\n";
    }
  }

  svg << "<circle class=\"centroid\" cx=\"" << fmt(px(cx)) << "\" cy=\"" << fmt(py(cy))
      << "\" r=\"8\" fill=\"none\" stroke=\"#7a7a7a\" stroke-width=\"3\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace evshare
