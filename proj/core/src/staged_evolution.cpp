#include "sglab/staged_evolution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace sglab {

namespace {

void axpy(std::vector<double>& x, const std::vector<double>& y, double c) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += c * y[i];
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Sum of the Dyson-Phillips cascade sum_m p_m with p_0 = seed and
// p_m = (1/n) q * p_{m-1}.  Scalar contraction: (1/n) int_0^tau |q| is
// bounded by the stage constant of the schedule, hence < 1.
std::vector<double> cascade_sum(const std::vector<double>& q, const std::vector<double>& seed,
                                double inv_n, double dt, double tol, int max_terms,
                                double kappa, int stage, int& terms, double& dropped) {
  std::vector<double> p = seed;
  std::vector<double> sum = seed;
  int used = 1;
  for (;;) {
    p = trapezoid_convolution(q, p, dt);
    for (double& v : p) v *= inv_n;
    ++used;
    axpy(sum, p, 1.0);
    const double s = sup_abs(p);
    if (s <= tol) {
      dropped = std::max(dropped, kappa * s);
      break;
    }
    if (used >= max_terms)
      throw std::runtime_error("staged_evolve: cascade at stage " + std::to_string(stage) +
                               " did not reach the scalar tolerance within max_terms");
  }
  terms = std::max(terms, used);
  return sum;
}

}  // namespace

StagedResult staged_evolve(const GeneratorSpec& gen, const RankOnePerturbation& B,
                           const DpConfig& cfg, const GridFunction& u0,
                           const std::vector<double>& output_times) {
  StagedResult res;
  res.schedule = split_schedule(gen, cfg.lambda_shift, B);
  const int n = res.schedule.n_stages;
  const double inv_n = 1.0 / static_cast<double>(n);

  // The engine of the full perturbation supplies the level-0 primitives; its
  // contraction constant may be >= 1, which only blocks evolve(), not these.
  DysonPhillipsEngine base(gen, B, cfg);
  const double dt = cfg.dt;
  const double kappa = base.kappa();
  for (double t : output_times) {
    const int k = time_index(t, dt);
    if (k < 0 || k > base.n_steps())
      throw std::invalid_argument("staged_evolve: output time outside [0, tau]");
  }

  res.terms_per_stage.assign(n, 1);
  const double tol_scalar = cfg.tol_tail / ((1.0 + kappa) * static_cast<double>(n));

  // Direction kernels level by level: q_lvl[j](r) = <w, e^{-lr} T^(j)_{-1}(r) h>
  // where level j carries the generator A + (j/n)B.  Only levels < n are ever
  // convolved against, so q_lvl[n] is not formed.
  std::vector<std::vector<double>> q_lvl(n);
  q_lvl[0] = base.q_kernel();
  for (int j = 1; j < n; ++j)
    q_lvl[j] = cascade_sum(q_lvl[j - 1], q_lvl[j - 1], inv_n, dt, tol_scalar, cfg.max_terms,
                           kappa, j, res.terms_per_stage[j - 1], res.scalar_tail);

  // Orbit masses m_lvl[j](s) = <w, T~^(j)(s) u0> along the same ladder.
  std::vector<double> mass = base.scan_orbit(u0).mass;
  std::vector<std::vector<double>> m_lvl(n + 1);
  m_lvl[0] = mass;
  for (int j = 1; j <= n; ++j)
    m_lvl[j] = cascade_sum(q_lvl[j - 1], m_lvl[j - 1], inv_n, dt, tol_scalar, cfg.max_terms,
                           kappa, j, res.terms_per_stage[j - 1], res.scalar_tail);

  // Duhamel telescoping: T~^(n)(t)u0 = T~(t)u0
  //   + sum_j (1/n) int m_lvl[j](s) T~^(j-1)_{-1}(t-s) h ds,
  // and each level-(j-1) orbit of h is pushed down with
  //   a <- a + (1/n) a * q_lvl[l],  l = j-1, ..., 1,
  // so that one base-level quadrature materializes everything.
  std::vector<double> total(static_cast<std::size_t>(base.n_steps()) + 1, 0.0);
  for (int j = 1; j <= n; ++j) {
    std::vector<double> a = m_lvl[j];
    for (double& v : a) v *= inv_n;
    for (int l = j - 1; l >= 1; --l) {
      const std::vector<double> conv = trapezoid_convolution(a, q_lvl[l], dt);
      axpy(a, conv, inv_n);
    }
    axpy(total, a, 1.0);
  }

  for (double t : output_times) {
    const int k = time_index(t, dt);
    GridFunction st = base.rescaled_orbit(t, u0);
    if (k > 0) st = add(st, base.convolve_direction(total, t));
    st = scaled(st, std::exp(cfg.lambda_shift * t));
    if (!is_nonnegative(st, positivity_tolerance(st))) res.positivity_ok = false;
    res.times.push_back(static_cast<double>(k) * dt);
    res.states.push_back(std::move(st));
  }
  return res;
}

}  // namespace sglab
