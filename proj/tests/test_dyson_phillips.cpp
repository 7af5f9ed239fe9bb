#include <doctest.h>

#include <cmath>
#include <vector>

#include "sglab/dyson_phillips.hpp"
#include "sglab/sampling.hpp"

using namespace sglab;

namespace {

RankOnePerturbation flat_rank_one(std::size_t n, bool with_density = true) {
  std::vector<double> w(n + 1, 1.0);
  if (with_density) {
    return make_rank_one(w, ExtrapolatedElement::from_density(
                                SpaceTag::ShiftSpace, std::vector<double>(n + 1, 1.0)));
  }
  // same element through its antiderivative x - 1 only
  return make_rank_one(
      w, ExtrapolatedElement::from_antiderivative(
             sample_shift(n, [](double x) { return x - 1.0; })));
}

}  // namespace

TEST_CASE("time_index snaps to the grid and rejects off-grid times") {
  CHECK(time_index(0.25, 1e-3) == 250);
  CHECK(time_index(0.0, 1e-3) == 0);
  CHECK(time_index(1.0, 2.5e-4) == 4000);
  CHECK_THROWS_AS(time_index(0.25, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(time_index(0.2504, 1e-3), std::invalid_argument);
}

TEST_CASE("trapezoid_convolution: constants and a direct reference loop") {
  CHECK_THROWS_AS(trapezoid_convolution({1.0, 2.0}, {1.0}, 0.1), std::invalid_argument);

  const double dt = 1e-2;
  const std::size_t m = 64;
  std::vector<double> a(m, 2.0), b(m, 3.0);
  const std::vector<double> c = trapezoid_convolution(a, b, dt);
  CHECK(c[0] == 0.0);
  for (std::size_t k = 1; k < m; ++k) {
    CHECK(c[k] == doctest::Approx(6.0 * static_cast<double>(k) * dt).epsilon(1e-14));
  }

  // reference loop on non-constant data
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = std::sin(0.1 * static_cast<double>(i)) + 0.3;
    b[i] = std::cos(0.07 * static_cast<double>(i));
  }
  const std::vector<double> conv = trapezoid_convolution(a, b, dt);
  for (std::size_t k = 1; k < m; k += 7) {
    double s = 0.5 * (a[k] * b[0] + a[0] * b[k]);
    for (std::size_t j = 1; j < k; ++j) s += a[k - j] * b[j];
    CHECK(conv[k] == doctest::Approx(dt * s).epsilon(1e-14));
  }
}

TEST_CASE("kernel q matches its closed form on both integration paths") {
  // w = 1, h = 1 on the shift space: <w, T_{-1}(r)h> = 1 - r, so the rescaled
  // kernel is q(r) = e^{-lambda r}(1 - r).
  const std::size_t n = 200;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  for (bool with_density : {true, false}) {
    const RankOnePerturbation B = flat_rank_one(n, with_density);
    for (double lam : {0.0, 1.0}) {
      DpConfig cfg;
      cfg.lambda_shift = lam;
      cfg.tau = 1.0;
      cfg.dt = 1e-3;
      const DysonPhillipsEngine engine(gen, B, cfg);
      const std::vector<double>& q = engine.q_kernel();
      REQUIRE(q.size() == 1001);
      double worst = 0.0;
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double r = static_cast<double>(j) * cfg.dt;
        worst = std::max(worst, std::abs(q[j] - std::exp(-lam * r) * (1.0 - r)));
      }
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("engine norms: kappa and the rescaled K") {
  const std::size_t n = 400;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  DpConfig cfg;
  cfg.lambda_shift = 1.0;
  const DysonPhillipsEngine engine(gen, flat_rank_one(n), cfg);
  CHECK(engine.kappa() == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-6));
  CHECK(engine.rescaled_K() == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-6));
  CHECK(engine.n_steps() == 1000);
}

TEST_CASE("series term 0 is the rescaled free orbit") {
  const std::size_t n = 200;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  DpConfig cfg;
  cfg.lambda_shift = 1.0;
  cfg.tau = 0.5;
  cfg.dt = 1e-3;
  const GridFunction u0 = ramp_down(n);
  const GridFunction t0 = dp_term(gen, flat_rank_one(n), cfg, 0, 0.25, u0);
  const double e = std::exp(-0.25);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    const double expect = (x + 0.25 <= 1.0) ? e * (0.75 - x) : 0.0;
    CHECK(t0[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("series term 1 matches the hand-integrated closed form") {
  // u0 = 1-x, w = 1, h = 1, lambda = 1:
  //   m_0(s) = e^{-s} (1-s)^2 / 2
  //   S_1(t)(x) = e^{-t}/6 * ((1-a)^3 - (1-t)^3),  a = max(0, x+t-1)
  const std::size_t n = 200;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  DpConfig cfg;
  cfg.lambda_shift = 1.0;
  cfg.tau = 0.5;
  cfg.dt = 1e-3;
  const double t = 0.25;
  const GridFunction s1 = dp_term(gen, flat_rank_one(n), cfg, 1, t, ramp_down(n));
  double worst = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    const double a = std::max(0.0, x + t - 1.0);
    const double expect =
        std::exp(-t) / 6.0 * (std::pow(1.0 - a, 3) - std::pow(1.0 - t, 3));
    worst = std::max(worst, std::abs(s1[i] - expect));
  }
  CHECK(worst <= 5e-6);
}

TEST_CASE("orbit integral of the direction: closed form, monotonicity, nilpotent limit") {
  const std::size_t n = 200;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  const ExtrapolatedElement h_dens = ExtrapolatedElement::from_density(
      SpaceTag::ShiftSpace, std::vector<double>(n + 1, 1.0));
  const ExtrapolatedElement h_anti = ExtrapolatedElement::from_antiderivative(
      sample_shift(n, [](double x) { return x - 1.0; }));

  // int_0^b e^{-r} T_{-1}(r) 1 dr evaluates to 1 - e^{-min(b, 1-x)}
  for (const ExtrapolatedElement& h : {h_dens, h_anti}) {
    const GridFunction half = dp_orbit_integral(gen, h, 1.0, 0.5, 1e-3);
    double worst = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(n);
      worst = std::max(worst,
                       std::abs(half[i] - (1.0 - std::exp(-std::min(0.5, 1.0 - x)))));
    }
    CHECK(worst <= 5e-6);
    CHECK(is_nonnegative(half, 1e-12));

    // below the full resolvent, and equal to it once the horizon passes the
    // nilpotency time
    const GridFunction full = extrapolated_resolvent(gen, 1.0, h);
    for (std::size_t i = 0; i <= n; ++i) CHECK(half[i] <= full[i] + 2e-6);
    CHECK(full[0] - half[0] > 0.2);  // e^{-1/2} - e^{-1}
    const GridFunction whole = dp_orbit_integral(gen, h, 1.0, 1.0, 1e-3);
    CHECK(sup_distance(whole, full) <= 1e-5);
  }
}

TEST_CASE("evolution: t = 0 state, tail bookkeeping, cross-checked paths") {
  const std::size_t n = 200;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  DpConfig cfg;
  cfg.lambda_shift = 1.0;
  cfg.tau = 0.5;
  cfg.dt = 1e-3;
  cfg.tol_tail = 1e-8;
  cfg.cross_check = true;
  const GridFunction u0 = ramp_down(n);
  const EvolutionResult res =
      dp_evolve(gen, flat_rank_one(n), cfg, u0, {0.0, 0.25, 0.5});

  REQUIRE(res.states.size() == 3);
  CHECK(res.times[0] == 0.0);
  CHECK(sup_distance(res.states[0], u0) == 0.0);
  CHECK(res.positivity_ok);
  CHECK(res.terms_used >= 3);
  CHECK(res.rescaled_K == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-4));
  CHECK(res.tail_bound ==
        dp_tail_bound(res.rescaled_K, res.term_norms));
  CHECK(res.tail_bound < 1e-7);
  // density and antiderivative integration paths agreed (would have thrown)
  CHECK(res.cross_check_max_diff <= 2.5e-6);

  // term norms beyond the orbit decay geometrically under the envelope
  for (std::size_t k = 1; k + 1 < res.term_norms.size(); ++k) {
    CHECK(res.term_norms[k + 1] <= res.term_norms[k] * res.rescaled_K * 1.1 + 1e-12);
  }
}

TEST_CASE("evolution is invariant under the rescaling shift") {
  const std::size_t n = 200;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  const RankOnePerturbation B = flat_rank_one(n);
  const GridFunction u0 = ramp_down(n);
  DpConfig c1;
  c1.lambda_shift = 1.0;
  c1.tau = 0.5;
  c1.dt = 5e-4;
  DpConfig c2 = c1;
  c2.lambda_shift = 2.0;
  const EvolutionResult r1 = dp_evolve(gen, B, c1, u0, {0.25, 0.5});
  const EvolutionResult r2 = dp_evolve(gen, B, c2, u0, {0.25, 0.5});
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(sup_distance(r1.states[i], r2.states[i]) <= 1e-5);
  }
}

TEST_CASE("evolve rejects K >= 1 and out-of-range output times") {
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  const std::size_t n = 400;
  DpConfig cfg;
  cfg.tau = 0.5;
  cfg.dt = 1e-3;

  // tall narrow direction at lambda_shift = 0: K = 2 - 2/n >= 1
  const RankOnePerturbation tall = make_rank_one(
      std::vector<double>(n + 1, 1.0),
      ExtrapolatedElement::from_density(SpaceTag::ShiftSpace,
                                        sample_indicator(n, 0.0, 0.25, 8.0)));
  DpConfig zero_shift = cfg;
  zero_shift.lambda_shift = 0.0;
  CHECK_THROWS_AS((void)dp_evolve(gen, tall, zero_shift, ramp_down(n), {0.25}),
                  std::invalid_argument);

  DpConfig ok = cfg;
  ok.lambda_shift = 1.0;
  CHECK_THROWS_AS((void)dp_evolve(gen, flat_rank_one(n), ok, ramp_down(n), {0.75}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)dp_evolve(gen, flat_rank_one(n), ok, ramp_down(n), {0.2504}),
                  std::invalid_argument);
  DpConfig bad = cfg;
  bad.dt = -1.0;
  CHECK_THROWS_AS((void)dp_evolve(gen, flat_rank_one(n), bad, ramp_down(n), {0.25}),
                  std::invalid_argument);
}

TEST_CASE("tail bound formula and preconditions") {
  CHECK(dp_tail_bound(0.0, {1.0, 0.5}) == 0.0);
  CHECK(dp_tail_bound(0.5, {2.0, 0.1}) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS(dp_tail_bound(0.5, {}), std::invalid_argument);
  CHECK_THROWS_AS(dp_tail_bound(1.0, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(dp_tail_bound(-0.1, {1.0}), std::invalid_argument);
}

TEST_CASE("rescaling ladder picks the smallest admissible shift") {
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  CHECK(choose_rescaling(gen, flat_rank_one(400)) == 1.0);
  const std::size_t n = 400;
  const RankOnePerturbation tall = make_rank_one(
      std::vector<double>(n + 1, 1.0),
      ExtrapolatedElement::from_density(SpaceTag::ShiftSpace,
                                        sample_indicator(n, 0.0, 0.25, 8.0)));
  CHECK(choose_rescaling(gen, tall) == 16.0);
}

TEST_CASE("parallel materialization is bitwise identical to serial") {
  const std::size_t n = 200;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  const RankOnePerturbation B = flat_rank_one(n);
  const GridFunction u0 = ramp_down(n);
  DpConfig serial;
  serial.lambda_shift = 1.0;
  serial.tau = 0.4;
  serial.dt = 1e-3;
  DpConfig parallel = serial;
  parallel.parallel = true;
  const std::vector<double> times{0.1, 0.2, 0.3, 0.4};
  const EvolutionResult rs = dp_evolve(gen, B, serial, u0, times);
  const EvolutionResult rp = dp_evolve(gen, B, parallel, u0, times);
  REQUIRE(rs.states.size() == rp.states.size());
  for (std::size_t i = 0; i < rs.states.size(); ++i) {
    CHECK(sup_distance(rs.states[i], rp.states[i]) == 0.0);
  }
}

TEST_CASE("initial slope of the perturbed orbit is A u0 + B u0 after smoothing") {
  // u0 = (1-x)^2 lies in the generator domain; Bu0 = (1/3) h leaves the space,
  // so the difference quotients are smoothed by R(1,A) before comparing:
  //   R (d/dt S(t) u0)|_0 = R u0' + (1/3) R(1, A_{-1}) h.
  const std::size_t n = 1000;
  const GeneratorSpec gen = GeneratorSpec::nilpotent_left_shift();
  const RankOnePerturbation B = flat_rank_one(n);
  const GridFunction u0 = sample_shift(n, [](double x) { return (1.0 - x) * (1.0 - x); });
  const double delta = 1e-2;

  DpConfig cfg;
  cfg.lambda_shift = 1.0;
  cfg.tau = 2.0 * delta;
  cfg.dt = 1e-3;
  const EvolutionResult res = dp_evolve(gen, B, cfg, u0, {delta, 2.0 * delta});

  const GridFunction r1 = resolvent(gen, 1.0, res.states[0]);
  const GridFunction r2 = resolvent(gen, 1.0, res.states[1]);
  const GridFunction r0 = resolvent(gen, 1.0, u0);
  // Richardson quotient (4 f(d) - f(2d) - 3 f(0)) / (2d)
  const GridFunction quotient = scaled(
      add(scaled(r1, 4.0), add(scaled(r2, -1.0), scaled(r0, -3.0))), 1.0 / (2.0 * delta));

  const GridFunction target = add(
      resolvent(gen, 1.0, sample_shift(n, [](double x) { return -2.0 * (1.0 - x); })),
      sample_shift(n, [](double x) { return (1.0 - std::exp(x - 1.0)) / 3.0; }));
  CHECK(sup_distance(quotient, target) <= 5e-3);
}
