#include "doctest.h"

#include <cmath>

#include "funstack/dists.hpp"
#include "funstack/errors.hpp"
#include "funstack/grid.hpp"

using namespace funstack;

namespace {

double std_normal(double v) {
  return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::acos(-1.0));
}

}  // namespace

TEST_CASE("gaussian slice approximates the marginal density") {
  auto joint = [](double x, double y) { return std_normal(x) * std_normal(y); };
  GridSpec g;
  g.nx = g.ny = 2000;
  GridResult r = cond_density_oracle(joint, g, GridProj::XMinusC, 1.0);
  CHECK(!r.undefined);
  CHECK(r.slice_mass ==
        doctest::Approx(dist_density("Gaussian",
                                     {Value::real(0.0), Value::real(1.0)},
                                     1.0))
            .epsilon(1e-3));
}

TEST_CASE("uniform square boundary is flagged undefined") {
  // Joint density uniform on [0,1]^2; slicing at the edge x = 1 has
  // disagreeing one-sided limits.
  auto unif = [](double x, double y) {
    return (x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0) ? 1.0 : 0.0;
  };
  GridSpec g;
  g.nx = g.ny = 2000;
  GridResult r = cond_density_oracle(unif, g, GridProj::X, 1.0);
  CHECK(r.undefined);
  // An interior slice is fine.
  GridResult mid = cond_density_oracle(unif, g, GridProj::X, 0.5);
  CHECK(!mid.undefined);
  CHECK(mid.slice_mass == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("slices outside the box carry zero mass") {
  auto joint = [](double x, double y) { return std_normal(x) * std_normal(y); };
  GridSpec g;
  GridResult r = cond_density_oracle(joint, g, GridProj::X, 7.5);
  CHECK(r.slice_mass == 0.0);
  CHECK(!r.undefined);
}

TEST_CASE("degenerate grids are rejected") {
  auto one = [](double, double) { return 1.0; };
  GridSpec g;
  g.nx = 1;
  CHECK_THROWS_AS(cond_density_oracle(one, g, GridProj::X, 0.0), GridError);
  GridSpec h;
  h.x1 = h.x0;
  CHECK_THROWS_AS(cond_density_oracle(one, h, GridProj::X, 0.0), GridError);
}
