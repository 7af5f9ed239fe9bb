#include "sglab/dyson_phillips.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace sglab {

int time_index(double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time grid: dt must be positive");
  const double u = t / dt;
  const double k = std::round(u);
  if (std::abs(u - k) > 1e-9 * (1.0 + std::abs(u))) {
    throw std::invalid_argument("time " + std::to_string(t) +
                                " does not lie on the dt = " + std::to_string(dt) + " grid");
  }
  return static_cast<int>(k);
}

std::vector<double> trapezoid_convolution(const std::vector<double>& a,
                                          const std::vector<double>& b, double dt) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("trapezoid_convolution: length mismatch");
  }
  const std::size_t m = a.size();
  std::vector<double> c(m, 0.0);
  for (std::size_t k = 1; k < m; ++k) {
    double s = 0.5 * (a[k] * b[0] + a[0] * b[k]);
    for (std::size_t j = 1; j < k; ++j) s += a[k - j] * b[j];
    c[k] = dt * s;
  }
  return c;
}

namespace {

double pairing(const std::vector<double>& w, const std::vector<double>& f) {
  const std::size_t n = w.size() - 1;
  double s = 0.5 * (w[0] * f[0] + w[n] * f[n]);
  for (std::size_t i = 1; i < n; ++i) s += w[i] * f[i];
  return s / static_cast<double>(n);
}

double weight_l1(const std::vector<double>& w) {
  std::vector<double> a(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) a[i] = std::abs(w[i]);
  return grid::trapezoid(a);
}

double frac01(double y) {
  double r = y - std::floor(y);
  if (r >= 1.0) r -= 1.0;  // guard against y just below an integer
  if (r < 0.0) r = 0.0;
  return r;
}

/// int_0^{1-r} w(x) rho(x+r) dx with the partial end cell integrated exactly.
double cutoff_product(const std::vector<double>& w, const std::vector<double>& rho,
                      double r) {
  const std::size_t n = w.size() - 1;
  const double dn = static_cast<double>(n);
  double b = 1.0 - r;
  if (b <= 1e-12) return 0.0;
  if (b > 1.0) b = 1.0;
  double ub = b * dn;
  const double nearest = std::round(ub);
  if (std::abs(ub - nearest) < 1e-9) ub = nearest;
  const std::size_t c = std::min(n, static_cast<std::size_t>(std::floor(ub)));
  auto g = [&](std::size_t i) {
    const double y = static_cast<double>(i) / dn + r;
    return w[i] * grid::interp(rho, std::min(y, 1.0));
  };
  double acc = 0.0;
  for (std::size_t i = 0; i < c; ++i) acc += 0.5 * (g(i) + g(i + 1)) / dn;
  const double xc = static_cast<double>(c) / dn;
  if (b > xc + 1e-15) {
    const double wb = grid::interp(w, b);
    const double gb = wb * grid::interp(rho, 1.0);
    acc += 0.5 * (b - xc) * (g(c) + gb);
  }
  return acc;
}

/// int_0^1 w(x) rho((x+r) mod 1) dx, both factors interpolated with wrap.
double wrap_product(const std::vector<double>& w, const std::vector<double>& rho,
                    double r) {
  const std::size_t n = w.size() - 1;
  const double dn = static_cast<double>(n);
  auto g = [&](std::size_t i) {
    return w[i] * grid::interp(rho, frac01(static_cast<double>(i) / dn + r));
  };
  double acc = 0.5 * (g(0) + g(n));
  for (std::size_t i = 1; i < n; ++i) acc += g(i);
  return acc / dn;
}

/// int_0^1 w dG for the measure with continuous antiderivative G:
/// w(1)G(1) - w(0)G(0) - int w' G with piecewise-constant w'.
double pair_dF(const std::vector<double>& w, const GridFunction& G) {
  const std::size_t n = G.n_cells();
  double acc = w[n] * G[n] - w[0] * G[0];
  for (std::size_t i = 0; i < n; ++i) {
    acc -= (w[i + 1] - w[i]) * 0.5 * (G[i] + G[i + 1]);
  }
  return acc;
}

std::vector<double> central_differences(const std::vector<double>& m, int k, double dt) {
  std::vector<double> mp(static_cast<std::size_t>(k) + 1, 0.0);
  if (k == 0) return mp;
  if (k == 1) {
    mp[0] = mp[1] = (m[1] - m[0]) / dt;
    return mp;
  }
  mp[0] = (-3.0 * m[0] + 4.0 * m[1] - m[2]) / (2.0 * dt);
  for (int j = 1; j < k; ++j) mp[j] = (m[j + 1] - m[j - 1]) / (2.0 * dt);
  mp[k] = (3.0 * m[k] - 4.0 * m[k - 1] + m[k - 2]) / (2.0 * dt);
  return mp;
}

}  // namespace

DysonPhillipsEngine::DysonPhillipsEngine(const GeneratorSpec& gen,
                                         const RankOnePerturbation& B, DpConfig cfg)
    : gen_(gen), B_(B), cfg_(cfg) {
  if (!(cfg_.dt > 0.0) || !(cfg_.tau > 0.0) || !(cfg_.tol_tail > 0.0) ||
      cfg_.max_terms < 1) {
    throw std::invalid_argument("DpConfig: dt, tau, tol_tail must be positive and max_terms >= 1");
  }
  if (B_.space_tag() != gen_.space()) {
    throw std::invalid_argument("perturbation lives over a different space than the generator");
  }
  n_steps_ = time_index(cfg_.tau, cfg_.dt);
  if (n_steps_ < 1) throw std::invalid_argument("DpConfig: tau must be at least dt");
  density_path_ = B_.direction.has_density();
  kappa_ = sup_norm(extrapolated_resolvent(gen_, cfg_.lambda_shift, B_.direction));
  weight_l1_ = weight_l1(B_.weight);
  K_ = kappa_ * weight_l1_;
  q_ = density_path_ ? q_from_density() : q_from_antiderivative();
}

std::vector<double> DysonPhillipsEngine::q_from_density() const {
  const std::vector<double>& rho = B_.direction.density();
  std::vector<double> q(static_cast<std::size_t>(n_steps_) + 1);
  for (int j = 0; j <= n_steps_; ++j) {
    const double r = static_cast<double>(j) * cfg_.dt;
    const double e = std::exp(-cfg_.lambda_shift * r);
    q[static_cast<std::size_t>(j)] =
        e * (gen_.space() == SpaceTag::ShiftSpace ? cutoff_product(B_.weight, rho, r)
                                                  : wrap_product(B_.weight, rho, r));
  }
  return q;
}

std::vector<double> DysonPhillipsEngine::q_from_antiderivative() const {
  const GridFunction& F = B_.direction.antiderivative();
  std::vector<double> q(static_cast<std::size_t>(n_steps_) + 1);
  for (int j = 0; j <= n_steps_; ++j) {
    const double r = static_cast<double>(j) * cfg_.dt;
    const double e = std::exp(-cfg_.lambda_shift * r);
    const GridFunction G = apply_semigroup(gen_, r, F);
    double v = pair_dF(B_.weight, G);
    if (gen_.space() == SpaceTag::PeriodicSpace) {
      // element is F - dF: zeroth-order part minus the measure part
      v = pairing(B_.weight, G.values()) - v;
    }
    q[static_cast<std::size_t>(j)] = e * v;
  }
  return q;
}

DysonPhillipsEngine::OrbitScan DysonPhillipsEngine::scan_orbit(const GridFunction& u0) const {
  if (u0.space_tag() != gen_.space() || u0.n_cells() + 1 != B_.weight.size()) {
    throw std::invalid_argument("scan_orbit: initial state does not match the engine grid");
  }
  OrbitScan scan;
  scan.mass.resize(static_cast<std::size_t>(n_steps_) + 1);
  for (int k = 0; k <= n_steps_; ++k) {
    const double s = static_cast<double>(k) * cfg_.dt;
    const double e = std::exp(-cfg_.lambda_shift * s);
    const GridFunction v = apply_semigroup(gen_, s, u0);
    scan.mass[static_cast<std::size_t>(k)] = e * pairing(B_.weight, v.values());
    scan.sup_norm = std::max(scan.sup_norm, e * sup_norm(v));
  }
  return scan;
}

GridFunction DysonPhillipsEngine::rescaled_orbit(double t, const GridFunction& u0) const {
  return scaled(apply_semigroup(gen_, t, u0),
                std::exp(-cfg_.lambda_shift * t));
}

GridFunction DysonPhillipsEngine::convolve_direction(const std::vector<double>& mass,
                                                     double t) const {
  const int k = time_index(t, cfg_.dt);
  if (k < 0 || k > n_steps_) {
    throw std::invalid_argument("convolve_direction: time outside the horizon");
  }
  if (mass.size() < static_cast<std::size_t>(k) + 1) {
    throw std::invalid_argument("convolve_direction: mass vector too short");
  }
  if (k == 0) return GridFunction::zero(gen_.space(), B_.direction.n_cells());
  return density_path_ ? convolve_density(mass, k) : convolve_antiderivative(mass, k);
}

GridFunction DysonPhillipsEngine::convolve_density(const std::vector<double>& mass,
                                                   int k) const {
  const std::vector<double>& rho = B_.direction.density();
  const std::size_t n = B_.direction.n_cells();
  const double dn = static_cast<double>(n);
  const double dt = cfg_.dt;
  const double lam = cfg_.lambda_shift;
  const double t = static_cast<double>(k) * dt;
  const bool shift = gen_.space() == SpaceTag::ShiftSpace;
  std::vector<double> acc(n + 1, 0.0);

  for (int j = 0; j <= k; ++j) {
    const double r = static_cast<double>(k - j) * dt;
    const double c = dt * (j == 0 || j == k ? 0.5 : 1.0) * mass[static_cast<std::size_t>(j)] *
                     std::exp(-lam * r);
    if (c == 0.0) continue;
    if (shift) {
      const double imaxf = std::floor((1.0 - r) * dn + 1e-9);
      if (imaxf < 0.0) continue;
      const std::size_t imax = std::min(n, static_cast<std::size_t>(imaxf));
      for (std::size_t i = 0; i <= imax; ++i) {
        const double y = static_cast<double>(i) / dn + r;
        acc[i] += c * grid::interp(rho, std::min(y, 1.0));
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        acc[i] += c * grid::interp(rho, frac01(static_cast<double>(i) / dn + r));
      }
    }
  }

  if (shift) {
    // Fix up the quadrature cell crossed by the support cutoff s_i^* = t-(1-x_i):
    // the plain trapezoid treats the integrand as jumping at a node, while the
    // true jump sits inside the cell. Replace that cell's contribution by the
    // exact split [s_c, s^*] (zero) plus [s^*, s_{c+1}] (trapezoid).
    const double rho1 = rho[n];
    auto g = [&](std::size_t i, int j) {
      const double r = static_cast<double>(k - j) * dt;
      const double y = static_cast<double>(i) / dn + r;
      if (y > 1.0 + 1e-12) return 0.0;
      return mass[static_cast<std::size_t>(j)] * std::exp(-lam * r) *
             grid::interp(rho, std::min(y, 1.0));
    };
    for (std::size_t i = 0; i <= n; ++i) {
      const double sstar = t - (1.0 - static_cast<double>(i) / dn);
      if (sstar <= 0.0) continue;
      double u = sstar / dt;
      const double nearest = std::round(u);
      int c;
      double s_split;
      if (std::abs(u - nearest) < 1e-9) {
        c = static_cast<int>(nearest) - 1;
        s_split = (static_cast<double>(c) + 1.0) * dt;
      } else {
        c = static_cast<int>(std::floor(u));
        s_split = sstar;
      }
      if (c < 0 || c >= k) continue;
      const double removed = 0.5 * dt * (g(i, c) + g(i, c + 1));
      double added = 0.0;
      const double s_next = (static_cast<double>(c) + 1.0) * dt;
      if (s_split < s_next - 1e-15 * t) {
        const double theta = (s_split - static_cast<double>(c) * dt) / dt;
        const double mstar = mass[static_cast<std::size_t>(c)] * (1.0 - theta) +
                             mass[static_cast<std::size_t>(c) + 1] * theta;
        const double gstar = mstar * std::exp(-lam * (t - s_split)) * rho1;
        added = 0.5 * (s_next - s_split) * (gstar + g(i, c + 1));
      }
      acc[i] += added - removed;
    }
    acc[n] = 0.0;  // exact by construction; pin against roundoff
  } else {
    acc[n] = acc[0];
  }
  return GridFunction(gen_.space(), std::move(acc));
}

GridFunction DysonPhillipsEngine::convolve_antiderivative(const std::vector<double>& mass,
                                                          int k) const {
  const GridFunction& F = B_.direction.antiderivative();
  const std::size_t n = F.n_cells();
  const double dt = cfg_.dt;
  const double lam = cfg_.lambda_shift;
  const double t = static_cast<double>(k) * dt;
  const bool shift = gen_.space() == SpaceTag::ShiftSpace;
  const std::vector<double> mp = central_differences(mass, k, dt);
  std::vector<double> acc(n + 1, 0.0);

  for (int j = 0; j <= k; ++j) {
    const double r = static_cast<double>(k - j) * dt;
    const double m = mass[static_cast<std::size_t>(j)];
    const double d = mp[static_cast<std::size_t>(j)];
    const double coeff = dt * (j == 0 || j == k ? 0.5 : 1.0) * std::exp(-lam * r) *
                         (shift ? d + lam * m : (1.0 - lam) * m - d);
    if (coeff == 0.0) continue;
    const GridFunction G = apply_semigroup(gen_, r, F);
    for (std::size_t i = 0; i <= n; ++i) acc[i] += coeff * G[i];
  }

  const GridFunction Gt = apply_semigroup(gen_, t, F);
  const double et = std::exp(-lam * t);
  const double m0 = mass[0];
  const double mt = mass[static_cast<std::size_t>(k)];
  const double sgn = shift ? 1.0 : -1.0;
  for (std::size_t i = 0; i <= n; ++i) {
    acc[i] += sgn * (m0 * et * Gt[i] - mt * F[i]);
  }
  if (shift) {
    acc[n] = 0.0;
  } else {
    acc[n] = acc[0];
  }
  return GridFunction(gen_.space(), std::move(acc));
}

GridFunction DysonPhillipsEngine::orbit_integral(double b) const {
  const std::vector<double> ones(static_cast<std::size_t>(n_steps_) + 1, 1.0);
  return convolve_direction(ones, b);
}

GridFunction DysonPhillipsEngine::term(int n, double t, const GridFunction& u0) const {
  if (n < 0) throw std::invalid_argument("dp_term: n must be nonnegative");
  const int k = time_index(t, cfg_.dt);
  if (k < 0 || k > n_steps_) {
    throw std::invalid_argument("dp_term: time outside [0, tau]");
  }
  if (n == 0) return rescaled_orbit(t, u0);
  std::vector<double> cur = scan_orbit(u0).mass;
  for (int level = 1; level < n; ++level) {
    cur = trapezoid_convolution(q_, cur, cfg_.dt);
  }
  return convolve_direction(cur, t);
}

EvolutionResult DysonPhillipsEngine::evolve(const GridFunction& u0,
                                            const std::vector<double>& output_times) const {
  if (!(K_ < 1.0)) {
    throw std::invalid_argument(
        "dp_evolve: rescaled K = " + std::to_string(K_) +
        " >= 1 at lambda_shift = " + std::to_string(cfg_.lambda_shift) +
        "; use split_schedule and evolve stage by stage");
  }
  std::vector<int> indices;
  indices.reserve(output_times.size());
  for (double t : output_times) {
    const int k = time_index(t, cfg_.dt);
    if (k < 0 || k > n_steps_) {
      throw std::invalid_argument("dp_evolve: output time outside [0, tau]");
    }
    indices.push_back(k);
  }

  EvolutionResult res;
  res.rescaled_K = K_;
  const OrbitScan scan = scan_orbit(u0);
  res.term_norms.push_back(scan.sup_norm);
  res.terms_used = 1;

  std::vector<double> mass_sum(static_cast<std::size_t>(n_steps_) + 1, 0.0);
  std::vector<double> cur = scan.mass;
  bool have_tail_mass = false;
  for (int n = 1;; ++n) {
    const double bound = kappa_ * grid::sup_abs(cur);
    res.term_norms.push_back(bound);
    for (std::size_t j = 0; j < mass_sum.size(); ++j) mass_sum[j] += cur[j];
    have_tail_mass = true;
    res.terms_used = n + 1;
    if (B_.positive) {
      const double envelope = std::pow(K_, n) * res.term_norms[0];
      if (bound > 1.1 * envelope + 1e-12 * (1.0 + res.term_norms[0])) {
        throw std::runtime_error(
            "dp_evolve: term norm " + std::to_string(bound) + " at n = " +
            std::to_string(n) + " violates the geometric envelope " +
            std::to_string(envelope));
      }
    }
    if (bound <= cfg_.tol_tail) break;
    if (n >= cfg_.max_terms) {
      throw std::runtime_error("dp_evolve: series did not reach tol_tail within " +
                               std::to_string(cfg_.max_terms) +
                               " terms (last term bound " + std::to_string(bound) + ")");
    }
    cur = trapezoid_convolution(q_, cur, cfg_.dt);
  }
  res.tail_bound = dp_tail_bound(K_, res.term_norms);

  auto materialize = [&](int k) {
    const double t = static_cast<double>(k) * cfg_.dt;
    GridFunction st = rescaled_orbit(t, u0);
    if (have_tail_mass && k > 0) {
      st = add(st, convolve_direction(mass_sum, t));
    }
    return scaled(st, std::exp(cfg_.lambda_shift * t));
  };

  std::vector<std::optional<GridFunction>> slots(indices.size());
  if (cfg_.parallel && indices.size() > 1) {
    std::vector<std::future<void>> jobs;
    jobs.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
      jobs.push_back(std::async(std::launch::async,
                                [&, i] { slots[i].emplace(materialize(indices[i])); }));
    }
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t i = 0; i < indices.size(); ++i) {
      slots[i].emplace(materialize(indices[i]));
    }
  }

  res.positivity_ok = true;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    GridFunction st = std::move(*slots[i]);
    if (!is_nonnegative(st, positivity_tolerance(st))) res.positivity_ok = false;
    res.times.push_back(static_cast<double>(indices[i]) * cfg_.dt);
    res.states.push_back(std::move(st));
  }
  return res;
}

GridFunction dp_term(const GeneratorSpec& gen, const RankOnePerturbation& B,
                     const DpConfig& cfg, int n, double t, const GridFunction& u0) {
  return DysonPhillipsEngine(gen, B, cfg).term(n, t, u0);
}

EvolutionResult dp_evolve(const GeneratorSpec& gen, const RankOnePerturbation& B,
                          const DpConfig& cfg, const GridFunction& u0,
                          const std::vector<double>& output_times) {
  DysonPhillipsEngine engine(gen, B, cfg);
  EvolutionResult res = engine.evolve(u0, output_times);
  if (cfg.cross_check && B.direction.has_density()) {
    DpConfig alt = cfg;
    alt.cross_check = false;
    const RankOnePerturbation stripped = make_rank_one(
        B.weight, ExtrapolatedElement::from_antiderivative(B.direction.antiderivative()));
    const EvolutionResult other =
        DysonPhillipsEngine(gen, stripped, alt).evolve(u0, output_times);
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < res.states.size(); ++i) {
      scale = std::max(scale, sup_norm(res.states[i]));
      diff = std::max(diff, sup_distance(res.states[i], other.states[i]));
    }
    res.cross_check_max_diff = diff;
    if (diff > 1e-6 * (1.0 + scale)) {
      throw std::runtime_error(
          "dp_evolve: density and antiderivative integration paths disagree by " +
          std::to_string(diff));
    }
  }
  return res;
}

double dp_tail_bound(double rescaled_K, const std::vector<double>& term_norms) {
  if (term_norms.empty()) {
    throw std::invalid_argument("dp_tail_bound: no computed terms");
  }
  if (!(rescaled_K >= 0.0) || !(rescaled_K < 1.0)) {
    throw std::invalid_argument("dp_tail_bound: K must lie in [0, 1)");
  }
  if (rescaled_K == 0.0) return 0.0;
  return term_norms.back() * rescaled_K / (1.0 - rescaled_K);
}

double choose_rescaling(const GeneratorSpec& gen, const RankOnePerturbation& B,
                        double target) {
  const double w1 = weight_l1(B.weight);
  for (int i = 0; i < 42; ++i) {
    const double lambda = 0.5 * std::pow(2.0, i);
    const double K = w1 * sup_norm(extrapolated_resolvent(gen, lambda, B.direction));
    if (K <= target) return lambda;
  }
  throw std::runtime_error("choose_rescaling: no admissible rescaling found");
}

GridFunction dp_orbit_integral(const GeneratorSpec& gen, const ExtrapolatedElement& h,
                               double lambda_shift, double tau, double dt) {
  std::vector<double> w(h.n_cells() + 1, 0.0);  // weight unused by the orbit integral
  DpConfig cfg;
  cfg.lambda_shift = lambda_shift;
  cfg.tau = tau;
  cfg.dt = dt;
  const DysonPhillipsEngine engine(gen, make_rank_one(std::move(w), h), cfg);
  return engine.orbit_integral(tau);
}

}  // namespace sglab
