#include "funstack/grid.hpp"

#include <algorithm>
#include <cmath>

#include "funstack/errors.hpp"

namespace funstack {

namespace {

// Midpoint-rule integral of density(x_center(j), y) over the y range.
double column_integral(const std::function<double(double, double)>& density,
                       const GridSpec& g, int j) {
  double dx = (g.x1 - g.x0) / g.nx;
  double dy = (g.y1 - g.y0) / g.ny;
  double x = g.x0 + (j + 0.5) * dx;
  double sum = 0.0;
  for (int i = 0; i < g.ny; ++i) {
    double y = g.y0 + (i + 0.5) * dy;
    sum += density(x, y) * dy;
  }
  return sum;
}

}  // namespace

GridResult cond_density_oracle(
    const std::function<double(double, double)>& density, const GridSpec& g,
    GridProj p, double c) {
  if (p != GridProj::X && p != GridProj::XMinusC)
    throw GridError("unsupported projection shape");
  if (g.nx < 3 || g.ny < 1 || !(g.x1 > g.x0) || !(g.y1 > g.y0))
    throw GridError("degenerate grid");

  double dx = (g.x1 - g.x0) / g.nx;
  GridResult res;
  if (c < g.x0 || c > g.x1) return res;  // zero slice outside the box

  int j = std::clamp(static_cast<int>((c - g.x0) / dx), 0, g.nx - 1);
  double at = column_integral(density, g, j);
  double left = column_integral(density, g, std::max(0, j - 1));
  double right = column_integral(density, g, std::min(g.nx - 1, j + 1));
  res.slice_mass = at;
  // F_c's one-sided limits must agree for the conditional density to be
  // defined at c; a jump across the slice marks the boundary pathology.
  double scale = std::max({1.0, std::abs(left), std::abs(right)});
  res.undefined = std::abs(left - right) > 0.05 * scale;
  return res;
}

}  // namespace funstack
