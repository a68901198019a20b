#include "sdcbf/svg.hpp"

#include "sdcbf/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sdcbf {

namespace {

constexpr double kPanelW = 440.0;
constexpr double kPanelH = 360.0;
constexpr double kMargin = 60.0;
constexpr std::size_t kMaxPoints = 4000;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double p = 0.05 * (hi - lo);
    lo -= p;
    hi += p;
  }
};

struct Panel {
  double x0;  // pixel origin of the plotting area
  double y0;
  Range xr;
  Range yr;
  double px(double v) const { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * kPanelW; }
  double py(double v) const { return y0 + kPanelH - (v - yr.lo) / (yr.hi - yr.lo) * kPanelH; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void axes(std::ostringstream& s, const Panel& p, const std::string& xlabel,
          const std::string& ylabel, const std::string& title) {
  s << "<rect x='" << num(p.x0) << "' y='" << num(p.y0) << "' width='" << num(kPanelW)
    << "' height='" << num(kPanelH) << "' fill='none' stroke='#333'/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = p.xr.lo + (p.xr.hi - p.xr.lo) * i / 4.0;
    const double fy = p.yr.lo + (p.yr.hi - p.yr.lo) * i / 4.0;
    s << "<line x1='" << num(p.px(fx)) << "' y1='" << num(p.y0 + kPanelH) << "' x2='"
      << num(p.px(fx)) << "' y2='" << num(p.y0 + kPanelH + 5) << "' stroke='#333'/>\n";
    s << "<text x='" << num(p.px(fx)) << "' y='" << num(p.y0 + kPanelH + 18)
      << "' font-size='11' text-anchor='middle'>" << tick(fx) << "</text>\n";
    s << "<line x1='" << num(p.x0 - 5) << "' y1='" << num(p.py(fy)) << "' x2='" << num(p.x0)
      << "' y2='" << num(p.py(fy)) << "' stroke='#333'/>\n";
    s << "<text x='" << num(p.x0 - 8) << "' y='" << num(p.py(fy) + 4)
      << "' font-size='11' text-anchor='end'>" << tick(fy) << "</text>\n";
  }
  s << "<text x='" << num(p.x0 + kPanelW / 2) << "' y='" << num(p.y0 + kPanelH + 38)
    << "' font-size='13' text-anchor='middle'>" << xlabel << "</text>\n";
  s << "<text x='" << num(p.x0 - 45) << "' y='" << num(p.y0 + kPanelH / 2)
    << "' font-size='13' text-anchor='middle' transform='rotate(-90 " << num(p.x0 - 45) << ' '
    << num(p.y0 + kPanelH / 2) << ")'>" << ylabel << "</text>\n";
  s << "<text x='" << num(p.x0 + kPanelW / 2) << "' y='" << num(p.y0 - 10)
    << "' font-size='14' text-anchor='middle'>" << title << "</text>\n";
}

template <class GetX, class GetY>
void polyline(std::ostringstream& s, const Panel& p, std::size_t count, GetX gx, GetY gy,
              const SvgSeries& series) {
  const std::size_t stride = std::max<std::size_t>(1, count / kMaxPoints);
  s << "<polyline fill='none' stroke='" << series.color << "' stroke-width='1.6'";
  if (!series.dash.empty()) s << " stroke-dasharray='" << series.dash << "'";
  s << " points='";
  for (std::size_t i = 0; i < count; i += stride) {
    s << num(p.px(gx(i))) << ',' << num(p.py(gy(i))) << ' ';
  }
  if (count > 0 && (count - 1) % stride != 0) {
    s << num(p.px(gx(count - 1))) << ',' << num(p.py(gy(count - 1)));
  }
  s << "'/>\n";
}

void dashed_line(std::ostringstream& s, double x1, double y1, double x2, double y2) {
  s << "<line x1='" << num(x1) << "' y1='" << num(y1) << "' x2='" << num(x2) << "' y2='"
    << num(y2) << "' stroke='#2a2' stroke-width='1.2' stroke-dasharray='6,4'/>\n";
}

}  // namespace

std::string render_comparison_svg(const SvgSeries& a, const SvgSeries& b,
                                  std::size_t boundary_component, double boundary_radius) {
  const bool planar = a.table->state_dim >= 2;
  auto xval = [&](const TrajectoryTable& t, std::size_t i) { return planar ? t.x[i][0] : t.t[i]; };
  auto yval = [&](const TrajectoryTable& t, std::size_t i) { return planar ? t.x[i][1] : t.x[i][0]; };

  Panel state{kMargin, 50.0, {}, {}};
  Panel margin{2 * kMargin + kPanelW + 20.0, 50.0, {}, {}};
  for (const SvgSeries* s : {&a, &b}) {
    for (std::size_t i = 0; i < s->table->t.size(); ++i) {
      state.xr.add(xval(*s->table, i));
      state.yr.add(yval(*s->table, i));
      margin.xr.add(s->table->t[i]);
      margin.yr.add(s->table->h[i]);
    }
  }
  const bool boundary_on_x = planar ? boundary_component == 0 : boundary_component == 0;
  const bool boundary_on_y = planar && boundary_component == 1;
  if (boundary_on_x && planar) {
    state.xr.add(-boundary_radius);
    state.xr.add(boundary_radius);
  } else if (boundary_on_y || !planar) {
    state.yr.add(-boundary_radius);
    state.yr.add(boundary_radius);
  }
  margin.yr.add(0.0);
  state.xr.pad();
  state.yr.pad();
  margin.xr.pad();
  margin.yr.pad();

  std::ostringstream s;
  const double width = 3 * kMargin + 2 * kPanelW + 40.0;
  const double height = kPanelH + 150.0;
  s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(width) << "' height='"
    << num(height) << "' viewBox='0 0 " << num(width) << ' ' << num(height) << "'>\n";
  s << "<rect width='100%' height='100%' fill='white'/>\n";

  axes(s, state, planar ? "x_0" : "t [s]", planar ? "x_1" : "x_0", "state trajectory");
  if (planar && boundary_on_x) {
    for (double v : {-boundary_radius, boundary_radius}) {
      dashed_line(s, state.px(v), state.y0, state.px(v), state.y0 + kPanelH);
    }
  } else {
    for (double v : {-boundary_radius, boundary_radius}) {
      dashed_line(s, state.x0, state.py(v), state.x0 + kPanelW, state.py(v));
    }
  }
  for (const SvgSeries* ser : {&a, &b}) {
    const auto& t = *ser->table;
    polyline(
        s, state, t.t.size(), [&](std::size_t i) { return xval(t, i); },
        [&](std::size_t i) { return yval(t, i); }, *ser);
  }

  axes(s, margin, "t [s]", "h(x)", "barrier value");
  dashed_line(s, margin.x0, margin.py(0.0), margin.x0 + kPanelW, margin.py(0.0));
  for (const SvgSeries* ser : {&a, &b}) {
    const auto& t = *ser->table;
    polyline(
        s, margin, t.t.size(), [&](std::size_t i) { return t.t[i]; },
        [&](std::size_t i) { return t.h[i]; }, *ser);
  }

  // Legend.
  const double ly = state.y0 + kPanelH + 60.0;
  double lx = kMargin;
  for (const SvgSeries* ser : {&a, &b}) {
    s << "<line x1='" << num(lx) << "' y1='" << num(ly) << "' x2='" << num(lx + 30) << "' y2='"
      << num(ly) << "' stroke='" << ser->color << "' stroke-width='2'";
    if (!ser->dash.empty()) s << " stroke-dasharray='" << ser->dash << "'";
    s << "/>\n<text x='" << num(lx + 36) << "' y='" << num(ly + 4) << "' font-size='12'>"
      << ser->label << "</text>\n";
    lx += 200.0;
  }
  dashed_line(s, lx, ly, lx + 30, ly);
  s << "<text x='" << num(lx + 36) << "' y='" << num(ly + 4)
    << "' font-size='12'>safe-set boundary</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace sdcbf
