#include <doctest.h>

#include <cmath>
#include <vector>

#include "sglab/sampling.hpp"
#include "sglab/volterra_oracle.hpp"

using namespace sglab;

namespace {

// For u0 = 1-x and h = 1 the mass equation m = a + k*m with a = (1-t)^2/2 and
// k = 1-r differentiates (for t <= 1) into m'' - m' + m = 1 with m(0) = 1/2,
// m'(0) = -1/2, solved by
//   m(t) = 1 + e^{t/2} (-cos(sqrt3 t/2)/2 - sin(sqrt3 t/2)/(2 sqrt3)).
double flat_mass_exact(double t) {
  const double s3 = std::sqrt(3.0);
  const double th = 0.5 * s3 * t;
  return 1.0 + std::exp(0.5 * t) * (-0.5 * std::cos(th) - std::sin(th) / (2.0 * s3));
}

}  // namespace

TEST_CASE("mass equation data: forcing and kernel are integrated exactly") {
  const std::size_t n = 200;
  const GridFunction u0 = ramp_down(n);
  const std::vector<double> h(n + 1, 1.0);
  const VolterraSolution sol = volterra_mass(u0, h, 1.0, 1e-3);
  REQUIRE(sol.times.size() == 1001);
  CHECK(sol.dt == 1e-3);
  for (std::size_t j = 0; j < sol.times.size(); j += 37) {
    const double t = sol.times[j];
    CHECK(sol.a_values[j] == doctest::Approx(0.5 * (1.0 - t) * (1.0 - t)).epsilon(1e-13));
    CHECK(sol.kernel_values[j] == doctest::Approx(1.0 - t).epsilon(1e-13));
  }
  CHECK(sol.mass[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("mass history: closed-form anchor and second-order convergence") {
  const std::size_t n = 200;
  const GridFunction u0 = ramp_down(n);
  const std::vector<double> h(n + 1, 1.0);

  const VolterraSolution coarse = volterra_mass(u0, h, 0.5, 1e-4);
  const VolterraSolution fine = volterra_mass(u0, h, 0.5, 5e-5);
  const double exact = flat_mass_exact(0.5);
  const double e_coarse = std::abs(coarse.mass.back() - exact);
  const double e_fine = std::abs(fine.mass.back() - exact);
  CHECK(e_coarse <= 1e-7);
  CHECK(e_fine <= 0.5 * e_coarse + 1e-12);

  // a few interior anchors on the coarse run
  for (double t : {0.1, 0.25, 0.4}) {
    const std::size_t j = static_cast<std::size_t>(std::lround(t / 1e-4));
    CHECK(coarse.mass[j] == doctest::Approx(flat_mass_exact(t)).epsilon(1e-6));
  }
}

TEST_CASE("characteristics rebuild closes the mass balance") {
  const std::size_t n = 200;
  const GridFunction u0 = ramp_down(n);
  const std::vector<double> h(n + 1, 1.0);
  const VolterraSolution sol = volterra_mass(u0, h, 0.5, 1e-4);

  const GridFunction at0 = characteristics_solution(u0, h, sol, 0.0);
  CHECK(sup_distance(at0, u0) <= 1e-14);

  const GridFunction state = characteristics_solution(u0, h, sol, 0.5);
  const std::size_t j = sol.mass.size() - 1;
  CHECK(integrate(state) == doctest::Approx(sol.mass[j]).epsilon(5e-6));
  CHECK(is_nonnegative(state, 1e-12));
  CHECK(state[n] == 0.0);
}

TEST_CASE("mass solver validates its inputs") {
  const std::size_t n = 100;
  const GridFunction u0 = ramp_down(n);
  const std::vector<double> h(n + 1, 1.0);
  CHECK_THROWS_AS(volterra_mass(sample_periodic(n, [](double) { return 1.0; }), h, 1.0, 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(volterra_mass(u0, std::vector<double>(n, 1.0), 1.0, 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(volterra_mass(u0, h, 0.5, 0.3), std::invalid_argument);
}

TEST_CASE("upwind resolvent oracle: first-order convergence on the shift space") {
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  std::vector<double> errors;
  for (std::size_t n : {250u, 500u, 1000u}) {
    const GridFunction f =
        sample_shift(n, [](double x) { return (1.0 - x) * (1.0 - x); });
    const GridFunction fd = discrete_resolvent_oracle(gen, 1.0, f);
    const GridFunction exact = resolvent(gen, 1.0, f);
    errors.push_back(sup_distance(fd, exact));
    CHECK(is_nonnegative(fd, 0.0));  // positive scheme, exactly nonnegative
  }
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
  const double order = std::log2(errors[0] / errors[1]);
  CHECK(order >= 0.9);
  CHECK(order <= 1.15);
}

TEST_CASE("upwind resolvent oracle: periodic space") {
  const GeneratorSpec gen = GeneratorSpec::periodic_rotation();
  const double w = 6.283185307179586;  // 2 pi
  const auto f_fun = [w](double x) { return 1.0 + 0.5 * std::cos(w * x); };
  const auto exact_fun = [&](double x) {
    return 1.0 + (std::cos(w * x) - w * std::sin(w * x)) / (2.0 * (1.0 + w * w));
  };

  std::vector<double> errors;
  for (std::size_t n : {250u, 500u, 1000u}) {
    const GridFunction fd = discrete_resolvent_oracle(gen, 1.0, sample_periodic(n, f_fun));
    double worst = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(n);
      worst = std::max(worst, std::abs(fd[i] - exact_fun(x)));
    }
    errors.push_back(worst);
    CHECK(fd[0] == fd[n]);
  }
  CHECK(errors[2] < errors[1]);
  const double order = std::log2(errors[0] / errors[1]);
  CHECK(order >= 0.9);
  CHECK(order <= 1.15);

  // cyclic solve reproduces constants exactly: u = c / lambda
  const std::size_t n = 128;
  const GridFunction c2 = sample_periodic(n, [](double) { return 2.0; });
  const GridFunction u = discrete_resolvent_oracle(gen, 4.0, c2);
  for (std::size_t i = 0; i <= n; ++i) CHECK(u[i] == doctest::Approx(0.5).epsilon(1e-13));

  CHECK_THROWS_AS(discrete_resolvent_oracle(gen, 0.0, c2), std::domain_error);
  CHECK_THROWS_AS(discrete_resolvent_oracle(gen, -1.0, c2), std::domain_error);
}
