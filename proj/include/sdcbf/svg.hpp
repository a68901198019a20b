#pragma once

#include "sdcbf/sim.hpp"

#include <string>

namespace sdcbf {

struct SvgSeries {
  const TrajectoryTable* table = nullptr;
  std::string label;
  std::string color;
  std::string dash;  // stroke-dasharray, empty for solid
};

/// Two panels: the x_0/x_1 state plane with the safe-set boundary lines
/// x_{component} = +/- radius, and h(t) with the h = 0 line.
std::string render_comparison_svg(const SvgSeries& a, const SvgSeries& b,
                                  std::size_t boundary_component, double boundary_radius);

}  // namespace sdcbf
