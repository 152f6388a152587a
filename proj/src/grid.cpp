#include "reslab/grid.hpp"

namespace reslab {

Grid build_grid(double half_width, int points) {
  require(half_width > 0.0, "invalid-config", "grid half-width must be positive");
  require(points >= 8 && points % 2 == 0, "invalid-config",
          "grid needs an even number of points, at least 8");
  Grid g;
  g.half_width = half_width;
  g.points = points;
  g.spacing = 2.0 * half_width / points;
  g.nodes.resize(points);
  for (int i = 0; i < points; ++i)
    g.nodes[i] = -half_width + (i + 0.5) * g.spacing;
  return g;
}

}  // namespace reslab
