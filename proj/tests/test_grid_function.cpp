#include <doctest.h>

#include <cmath>
#include <random>

#include "sglab/grid_function.hpp"
#include "sglab/sampling.hpp"

using namespace sglab;

TEST_CASE("boundary conditions are rejected, never corrected") {
  CHECK_THROWS_AS(GridFunction(SpaceTag::ShiftSpace, std::vector<double>{1.0, 0.5, 1e-6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(SpaceTag::PeriodicSpace, std::vector<double>{0.0, 0.5, 1e-12}),
                  std::invalid_argument);
  CHECK_NOTHROW(GridFunction(SpaceTag::ShiftSpace, std::vector<double>{1.0, 0.5, 0.0}));
  CHECK_NOTHROW(GridFunction(SpaceTag::PeriodicSpace, std::vector<double>{0.25, 0.5, 0.25}));
  CHECK_THROWS_AS(GridFunction(SpaceTag::ShiftSpace, std::vector<double>{1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(SpaceTag::ShiftSpace,
                               std::vector<double>{std::nan(""), 0.0}),
                  std::invalid_argument);
}

TEST_CASE("zero factory and basic accessors") {
  const GridFunction z = GridFunction::zero(SpaceTag::ShiftSpace, 10);
  CHECK(z.n_cells() == 10);
  CHECK(z.dx() == doctest::Approx(0.1));
  CHECK(sup_norm(z) == 0.0);
  CHECK(integrate(z) == 0.0);
}

TEST_CASE("interpolation is exact on nodes and linear between them") {
  std::vector<double> v{0.0, 1.0, 4.0};
  CHECK(grid::interp(v, 0.0) == 0.0);
  CHECK(grid::interp(v, 0.5) == 1.0);
  CHECK(grid::interp(v, 0.25) == doctest::Approx(0.5));
  CHECK(grid::interp(v, 0.75) == doctest::Approx(2.5));
  CHECK(grid::interp(v, 1.0) == 4.0);
  CHECK_THROWS_AS(grid::interp(v, -0.01), std::domain_error);
  CHECK_THROWS_AS(grid::interp(v, 1.01), std::domain_error);
}

TEST_CASE("trapezoid integrates the interpolant exactly, also over subintervals") {
  const std::size_t n = 10;
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) v[i] = 2.0 * static_cast<double>(i) / n;  // 2x
  CHECK(grid::trapezoid(v) == doctest::Approx(1.0).epsilon(1e-14));
  // int_a^b 2x = b^2 - a^2, including non-node endpoints
  CHECK(grid::trapezoid(v, 0.25, 0.75) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(grid::trapezoid(v, 0.13, 0.87) ==
        doctest::Approx(0.87 * 0.87 - 0.13 * 0.13).epsilon(1e-13));
  CHECK(grid::trapezoid(v, 0.4, 0.4) == doctest::Approx(0.0));
}

TEST_CASE("lattice operations act node-wise and satisfy the AM-property") {
  const GridFunction f(SpaceTag::ShiftSpace, {1.0, -2.0, 0.5, 0.0});
  const GridFunction g(SpaceTag::ShiftSpace, {0.5, 3.0, -1.0, 0.0});
  const GridFunction s = lattice_sup(f, g);
  CHECK(s[0] == 1.0);
  CHECK(s[1] == 3.0);
  CHECK(s[2] == 0.5);
  const GridFunction a = abs(f);
  CHECK(a[1] == 2.0);
  const GridFunction p = positive_part(f);
  CHECK(p[1] == 0.0);
  CHECK(p[0] == 1.0);

  // ||sup(f,g)|| = max(||f||, ||g||) on positive elements
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> fv(21), gv(21);
    for (auto& x : fv) x = unif(rng);
    for (auto& x : gv) x = unif(rng);
    fv.back() = 0.0;
    gv.back() = 0.0;
    const GridFunction fp(SpaceTag::ShiftSpace, fv), gp(SpaceTag::ShiftSpace, gv);
    CHECK(sup_norm(lattice_sup(fp, gp)) ==
          doctest::Approx(std::max(sup_norm(fp), sup_norm(gp))));
  }
}

TEST_CASE("incompatible operands are rejected") {
  const GridFunction f(SpaceTag::ShiftSpace, {1.0, 0.0});
  const GridFunction g(SpaceTag::PeriodicSpace, {1.0, 1.0});
  const GridFunction h(SpaceTag::ShiftSpace, {1.0, 0.5, 0.0});
  CHECK_THROWS_AS(require_compatible(f, g), std::invalid_argument);
  CHECK_THROWS_AS(require_compatible(f, h), std::invalid_argument);
  CHECK_THROWS_AS(add(f, g), std::invalid_argument);
  CHECK_THROWS_AS(lattice_sup(f, h), std::invalid_argument);
}

TEST_CASE("positivity tolerance scales with the sup norm") {
  const GridFunction f(SpaceTag::ShiftSpace, {100.0, 50.0, 0.0});
  CHECK(positivity_tolerance(f) == doctest::Approx(1e-9 * 101.0));
  const GridFunction tiny(SpaceTag::ShiftSpace, {0.0, -5e-10, 0.0});
  CHECK(is_nonnegative(tiny, positivity_tolerance(tiny)));
  const GridFunction neg(SpaceTag::ShiftSpace, {0.0, -1e-6, 0.0});
  CHECK(!is_nonnegative(neg, positivity_tolerance(neg)));
}

TEST_CASE("arithmetic helpers") {
  const GridFunction f(SpaceTag::ShiftSpace, {1.0, 2.0, 0.0});
  const GridFunction g(SpaceTag::ShiftSpace, {0.5, -1.0, 0.0});
  CHECK(add(f, g)[1] == 1.0);
  CHECK(subtract(f, g)[0] == 0.5);
  CHECK(scaled(f, -2.0)[1] == -4.0);
  CHECK(sup_distance(f, g) == 3.0);
}

TEST_CASE("shift sampling enforces the boundary condition") {
  CHECK_THROWS_AS(sample_shift(8, [](double) { return 1.0; }), std::invalid_argument);
  const GridFunction r = ramp_down(8);
  CHECK(r[0] == 1.0);
  CHECK(r[8] == 0.0);
  CHECK(r[4] == doctest::Approx(0.5));
}

TEST_CASE("periodic sampling defines the last node as the first") {
  // x mod 1 is discontinuous at 1; the convention closes the loop.
  const GridFunction f = sample_periodic(8, [](double x) { return x; });
  CHECK(f[8] == f[0]);
  CHECK(f[4] == doctest::Approx(0.5));
}

TEST_CASE("indicator sampling takes half-height values at node-aligned jumps") {
  const std::size_t n = 16;
  const std::vector<double> v = sample_indicator(n, 0.25, 0.5, 8.0);
  CHECK(v[3] == 0.0);
  CHECK(v[4] == 4.0);  // jump node
  CHECK(v[6] == 8.0);
  CHECK(v[8] == 4.0);  // jump node
  CHECK(v[9] == 0.0);
  // trapezoid of the samples reproduces the exact mass
  CHECK(grid::trapezoid(v) == doctest::Approx(8.0 * 0.25).epsilon(1e-14));
}

TEST_CASE("up-down step and its tent antiderivative") {
  const std::size_t n = 8;
  const std::vector<double> s = sample_step_updown(n);
  CHECK(s[0] == -1.0);
  CHECK(s[4] == 0.0);  // jump node
  CHECK(s[8] == 1.0);
  const GridFunction g = sample_tent_negative(n);
  CHECK(g[0] == 0.0);
  CHECK(g[4] == doctest::Approx(-0.5));
  CHECK(g[8] == 0.0);
  CHECK(g[2] == doctest::Approx(-0.25));
  CHECK(g[6] == doctest::Approx(-0.25));
}
