#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "splitfix/run.hpp"

namespace splitfix {

namespace {

constexpr double kViewSize = 800.0;
constexpr double kHalfView = kViewSize / 2.0;
// A series longer than this is subsampled (first and last point always kept)
// so plots of long runs stay a few hundred kilobytes.
constexpr std::size_t kMaxPlottedPoints = 2000;

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.8g", value);
  return buffer;
}

struct WorldFrame {
  double cx = 0.0;
  double cy = 0.0;
  double half = 1.0;  // padded half-extent, same on both axes
  double scale = 1.0;

  double sx(double wx) const { return kHalfView + (wx - cx) * scale; }
  double sy(double wy) const { return kHalfView - (wy - cy) * scale; }
};

WorldFrame frame_from_trace(const IterationTrace<double>& trace) {
  double lox = trace.x.front()[0];
  double hix = lox;
  double loy = trace.x.front()[1];
  double hiy = loy;
  auto absorb = [&](const std::vector<Vector<double>>& series) {
    for (const auto& p : series) {
      lox = std::min(lox, p[0]);
      hix = std::max(hix, p[0]);
      loy = std::min(loy, p[1]);
      hiy = std::max(hiy, p[1]);
    }
  };
  absorb(trace.x);
  absorb(trace.shadow);

  WorldFrame frame;
  frame.cx = (lox + hix) / 2.0;
  frame.cy = (loy + hiy) / 2.0;
  double half = std::max(hix - lox, hiy - loy) / 2.0;
  if (half <= 0.0) half = 1.0;  // a constant trace still gets a sensible window
  frame.half = 1.1 * half;
  frame.scale = kHalfView / frame.half;
  return frame;
}

void draw_point_series(std::ostream& os, const std::vector<Vector<double>>& series,
                       const WorldFrame& frame, const char* cssClass, const char* color,
                       double radius) {
  const std::size_t count = series.size();
  const std::size_t stride = std::max<std::size_t>(1, (count + kMaxPlottedPoints - 1) / kMaxPlottedPoints);
  os << "  <g class=\"" << cssClass << "\" fill=\"" << color << "\">\n";
  for (std::size_t n = 0; n < count; ++n) {
    if (n % stride != 0 && n != count - 1) continue;
    os << "    <circle cx=\"" << fmt(frame.sx(series[n][0])) << "\" cy=\""
       << fmt(frame.sy(series[n][1])) << "\" r=\"" << fmt(radius) << "\"/>\n";
  }
  os << "  </g>\n";
}

void draw_infinite_line(std::ostream& os, const WorldFrame& frame, double px, double py,
                        double dx, double dy) {
  // Segment through (px, py) along (dx, dy), long enough to cross the view.
  const double reach = 2.0 * (std::abs(frame.cx) + std::abs(frame.cy) + 2.0 * frame.half) + 1.0;
  os << "    <line x1=\"" << fmt(frame.sx(px - reach * dx)) << "\" y1=\""
     << fmt(frame.sy(py - reach * dy)) << "\" x2=\"" << fmt(frame.sx(px + reach * dx))
     << "\" y2=\"" << fmt(frame.sy(py + reach * dy)) << "\"/>\n";
}

void draw_set_outline(std::ostream& os, const PrimitiveSet<double>& set, const WorldFrame& frame) {
  if (const auto* ball = std::get_if<Ball<double>>(&set)) {
    os << "    <circle cx=\"" << fmt(frame.sx(ball->center[0])) << "\" cy=\""
       << fmt(frame.sy(ball->center[1])) << "\" r=\"" << fmt(ball->radius * frame.scale)
       << "\"/>\n";
    return;
  }
  if (const auto* box = std::get_if<Box<double>>(&set)) {
    // Clip unbounded sides to the visible window so the rectangle stays finite.
    const double wlo = frame.cx - frame.half;
    const double whi = frame.cx + frame.half;
    const double wloY = frame.cy - frame.half;
    const double whiY = frame.cy + frame.half;
    const double lox = std::max(box->lo[0], wlo);
    const double hix = std::min(box->hi[0], whi);
    const double loy = std::max(box->lo[1], wloY);
    const double hiy = std::min(box->hi[1], whiY);
    if (lox > hix || loy > hiy) return;
    os << "    <rect x=\"" << fmt(frame.sx(lox)) << "\" y=\"" << fmt(frame.sy(hiy))
       << "\" width=\"" << fmt((hix - lox) * frame.scale) << "\" height=\""
       << fmt((hiy - loy) * frame.scale) << "\"/>\n";
    return;
  }
  if (const auto* line = std::get_if<LineThroughOrigin<double>>(&set)) {
    draw_infinite_line(os, frame, 0.0, 0.0, line->unitDirection[0], line->unitDirection[1]);
    return;
  }
  if (const auto* half = std::get_if<Halfspace<double>>(&set)) {
    // Outline the boundary hyperplane through the origin.
    draw_infinite_line(os, frame, 0.0, 0.0, -half->unitNormal[1], half->unitNormal[0]);
    return;
  }
}

}  // namespace

void emit_plot(const IterationTrace<double>& trace, const PlotReference& reference,
               const std::string& path) {
  if (trace.x.empty()) {
    throw std::invalid_argument("emit_plot: empty trace");
  }
  if (trace.x.front().size() != 2) {
    throw std::invalid_argument("emit_plot: only two-dimensional traces can be plotted");
  }
  if (reference.xbar && reference.xbar->size() != 2) {
    throw std::invalid_argument("emit_plot: reference point must be two-dimensional");
  }

  const WorldFrame frame = frame_from_trace(trace);

  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("emit_plot: cannot open " + path + " for writing");
  }

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
        "viewBox=\"0 0 800 800\">\n";
  os << "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"800\" height=\"800\" "
        "fill=\"white\"/>\n";

  os << "  <g class=\"set-outlines\" fill=\"none\" stroke=\"#777777\" stroke-width=\"1.5\">\n";
  for (const auto& set : reference.sets) {
    draw_set_outline(os, set, frame);
  }
  os << "  </g>\n";

  draw_point_series(os, trace.x, frame, "governing-series", "#1f77b4", 2.5);
  draw_point_series(os, trace.shadow, frame, "shadow-series", "#d62728", 2.0);

  if (reference.xbar) {
    const double mx = frame.sx((*reference.xbar)[0]);
    const double my = frame.sy((*reference.xbar)[1]);
    os << "  <g class=\"xbar-marker\" stroke=\"#2ca02c\" stroke-width=\"2\">\n";
    os << "    <line x1=\"" << fmt(mx - 6.0) << "\" y1=\"" << fmt(my - 6.0) << "\" x2=\""
       << fmt(mx + 6.0) << "\" y2=\"" << fmt(my + 6.0) << "\"/>\n";
    os << "    <line x1=\"" << fmt(mx - 6.0) << "\" y1=\"" << fmt(my + 6.0) << "\" x2=\""
       << fmt(mx + 6.0) << "\" y2=\"" << fmt(my - 6.0) << "\"/>\n";
    os << "  </g>\n";
  }

  os << "</svg>\n";
  if (!os) {
    throw std::runtime_error("emit_plot: write to " + path + " failed");
  }
}

}  // namespace splitfix
