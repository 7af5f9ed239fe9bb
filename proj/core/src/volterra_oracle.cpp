#include "sglab/volterra_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace sglab {

namespace {

int aligned_steps(double span, double dt, const char* what) {
  const double raw = span / dt;
  const double rounded = std::floor(raw + 0.5);
  if (std::abs(raw - rounded) > 1e-9 * (1.0 + std::abs(raw)) || rounded < 1.0)
    throw std::invalid_argument(std::string(what) + " must be a positive multiple of dt");
  return static_cast<int>(rounded);
}

// Piecewise-linear read of a time series sampled at j*dt.
double interp_time(const std::vector<double>& v, double dt, double s) {
  if (s <= 0.0) return v.front();
  const double pos = s / dt;
  const auto j = static_cast<std::size_t>(pos);
  if (j + 1 >= v.size()) return v.back();
  const double theta = pos - static_cast<double>(j);
  return (1.0 - theta) * v[j] + theta * v[j + 1];
}

}  // namespace

VolterraSolution volterra_mass(const GridFunction& u0, const std::vector<double>& h_density,
                               double horizon, double dt) {
  if (u0.space_tag() != SpaceTag::ShiftSpace)
    throw std::invalid_argument("volterra_mass: shift-space problem only");
  if (h_density.size() != u0.values().size())
    throw std::invalid_argument("volterra_mass: density resolution mismatch");
  if (!(dt > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("volterra_mass: horizon and dt must be positive");
  const int nt = aligned_steps(horizon, dt, "volterra_mass: horizon");

  VolterraSolution sol;
  sol.dt = dt;
  sol.times.resize(nt + 1);
  sol.a_values.resize(nt + 1);
  sol.kernel_values.resize(nt + 1);
  sol.mass.resize(nt + 1);
  for (int k = 0; k <= nt; ++k) {
    const double t = k * dt;
    sol.times[k] = t;
    sol.a_values[k] = t >= 1.0 ? 0.0 : grid::trapezoid(u0.values(), t, 1.0);
    sol.kernel_values[k] = t >= 1.0 ? 0.0 : grid::trapezoid(h_density, t, 1.0);
  }

  const double denom = 1.0 - 0.5 * dt * sol.kernel_values[0];
  if (!(denom > 0.0))
    throw std::invalid_argument("volterra_mass: dt too large for the kernel");
  sol.mass[0] = sol.a_values[0];
  for (int k = 1; k <= nt; ++k) {
    double s = 0.5 * sol.kernel_values[k] * sol.mass[0];
    for (int j = 1; j < k; ++j) s += sol.kernel_values[k - j] * sol.mass[j];
    sol.mass[k] = (sol.a_values[k] + dt * s) / denom;
  }
  return sol;
}

GridFunction characteristics_solution(const GridFunction& u0, const std::vector<double>& h_density,
                                      const VolterraSolution& sol, double t) {
  if (u0.space_tag() != SpaceTag::ShiftSpace)
    throw std::invalid_argument("characteristics_solution: shift-space problem only");
  if (h_density.size() != u0.values().size())
    throw std::invalid_argument("characteristics_solution: density resolution mismatch");
  if (t < 0.0 || t > sol.times.back() + 1e-9)
    throw std::invalid_argument("characteristics_solution: t outside the mass history");

  const std::size_t n = u0.n_cells();
  const double dt = sol.dt;
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    double u = x + t <= 1.0 ? grid::interp(u0.values(), x + t) : 0.0;

    // int_0^{min(t, 1-x)} m(t-y) h(x+y) dy, trapezoid on the mass grid plus
    // an exact partial cell at the cutoff end.
    const double y_max = std::min(t, 1.0 - x);
    if (y_max > 0.0) {
      const int full = static_cast<int>(std::floor(y_max / dt + 1e-9));
      auto g = [&](double y) {
        return interp_time(sol.mass, dt, t - y) * grid::interp(h_density, std::min(x + y, 1.0));
      };
      double acc = 0.0;
      for (int j = 0; j <= full; ++j) {
        const double wt = (j == 0 || j == full) ? 0.5 : 1.0;
        acc += wt * g(j * dt);
      }
      acc *= full > 0 ? dt : 0.0;
      const double rest = y_max - full * dt;
      if (rest > 1e-12) acc += 0.5 * rest * (g(full * dt) + g(y_max));
      u += acc;
    }
    out[i] = u;
  }
  out[n] = 0.0;
  return GridFunction(SpaceTag::ShiftSpace, std::move(out));
}

GridFunction discrete_resolvent_oracle(const GeneratorSpec& gen, double lambda,
                                       const GridFunction& f) {
  if (f.space_tag() != gen.space())
    throw std::invalid_argument("discrete_resolvent_oracle: space mismatch");
  const std::size_t n = f.n_cells();
  const double inv_dx = static_cast<double>(n);

  if (gen.kind == GeneratorKind::NilpotentLeftShift) {
    if (!(lambda + inv_dx > 0.0))
      throw std::domain_error("discrete_resolvent_oracle: lambda too negative for this grid");
    std::vector<double> u(n + 1, 0.0);
    for (std::size_t ip = n; ip-- > 0;)
      u[ip] = (f[ip] + inv_dx * u[ip + 1]) / (lambda + inv_dx);
    return GridFunction(SpaceTag::ShiftSpace, std::move(u));
  }

  if (!(lambda > 0.0))
    throw std::domain_error("discrete_resolvent_oracle: cyclic upwind system is singular "
                            "for lambda <= 0");
  // alpha u_i - beta u_{i+1 mod n} = f_i with alpha = lambda + 1/dx, beta = 1/dx:
  // u_i = sum_{j<n} r^j f_{(i+j) mod n} / (alpha (1 - r^n)), r = beta/alpha < 1.
  const double alpha = lambda + inv_dx;
  const double r = inv_dx / alpha;
  std::vector<double> rpow(n);
  rpow[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) rpow[j] = rpow[j - 1] * r;
  const double scale = 1.0 / (alpha * (1.0 - rpow[n - 1] * r));
  std::vector<double> u(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += rpow[j] * f[(i + j) % n];
    u[i] = scale * s;
  }
  u[n] = u[0];
  return GridFunction(SpaceTag::PeriodicSpace, std::move(u));
}

}  // namespace sglab
