#pragma once

#include <functional>

namespace funstack {

// Axis-aligned grid over a 2-D bounding box.
struct GridSpec {
  double x0 = -5.0, x1 = 5.0;
  double y0 = -5.0, y1 = 5.0;
  int nx = 1000, ny = 1000;
};

// Supported observation shapes: first coordinate, or first coordinate minus
// a constant (observed at zero, both slice at x = c).
enum class GridProj { X, XMinusC };

struct GridResult {
  double slice_mass = 0.0;  // integral of the density over the x = c slice
  bool undefined = false;   // one-sided limits disagree at c
};

// Discretized conditional-density slice: integrate the joint density over
// the second coordinate in the cell column containing c, per unit width.
// Flags `undefined` when the left and right column limits disagree (density
// discontinuous across the slice).
GridResult cond_density_oracle(
    const std::function<double(double, double)>& density, const GridSpec& g,
    GridProj p, double c);

}  // namespace funstack
