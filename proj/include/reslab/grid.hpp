#pragma once

#include "reslab/types.hpp"

namespace reslab {

// Uniform 1D mesh shared by both channels. Cell-centered and symmetric
// about 0, so no node sits exactly at the origin and parity is exact.
struct Grid {
  double half_width = 0.0;  // L
  int points = 0;           // N
  double spacing = 0.0;     // h = 2L/N
  Vec nodes;                // x_i = -L + (i + 1/2) h

  double reflection_time(double group_speed, double support_radius) const {
    return (2.0 * half_width - support_radius) / group_speed;
  }
};

Grid build_grid(double half_width, int points);

}  // namespace reslab
