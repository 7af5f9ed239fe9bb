#include "sglab/semigroup.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sglab {

GeneratorSpec GeneratorSpec::nilpotent_left_shift() {
  return {GeneratorKind::NilpotentLeftShift, -std::numeric_limits<double>::infinity()};
}

GeneratorSpec GeneratorSpec::periodic_rotation() {
  return {GeneratorKind::PeriodicRotation, 0.0};
}

namespace grid {

ShiftSplit split_shift(double t, std::size_t n_cells) {
  const double u = t * static_cast<double>(n_cells);
  const double r = std::round(u);
  if (std::abs(u - r) < 1e-9) {
    return {static_cast<long>(r), 0.0};
  }
  const double fl = std::floor(u);
  return {static_cast<long>(fl), u - fl};
}

std::vector<double> shift_cutoff(const std::vector<double>& v, double t) {
  const std::size_t n = v.size() - 1;
  const auto [k, theta] = split_shift(t, n);
  std::vector<double> out(n + 1, 0.0);
  const long ln = static_cast<long>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    const long idx = static_cast<long>(i) + k;
    if (idx < 0 || idx > ln || (idx == ln && theta > 0.0)) continue;
    if (idx == ln) {
      out[i] = v[n];
    } else {
      out[i] = (1.0 - theta) * v[idx] + theta * v[idx + 1];
    }
  }
  return out;
}

std::vector<double> shift_wrap(const std::vector<double>& v, double t) {
  const std::size_t n = v.size() - 1;
  auto [k, theta] = split_shift(t, n);
  const long ln = static_cast<long>(n);
  k = ((k % ln) + ln) % ln;
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = (i + static_cast<std::size_t>(k)) % n;
    const std::size_t b = (a + 1) % n;
    out[i] = (theta == 0.0) ? v[a] : (1.0 - theta) * v[a] + theta * v[b];
  }
  out[n] = out[0];
  return out;
}

std::vector<double> resolvent_samples(GeneratorKind kind, double lambda,
                                      const std::vector<double>& f) {
  const std::size_t n = f.size() - 1;
  const double dx = 1.0 / static_cast<double>(n);
  if (kind == GeneratorKind::NilpotentLeftShift) {
    // backward recurrence; expands to the composite trapezoid of
    // e^{lambda(x_i - s)} f(s) over [x_i, 1] without forming large exponentials
    const double d = std::exp(-lambda * dx);
    std::vector<double> u(n + 1);
    u[n] = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      u[i] = d * u[i + 1] + 0.5 * dx * (f[i] + d * f[i + 1]);
    }
    return u;
  }
  if (!(lambda > 0.0)) {
    throw std::domain_error("resolvent: PeriodicRotation requires lambda > 0, got " +
                            std::to_string(lambda));
  }
  std::vector<double> wgt(n + 1);
  double wsum = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double c = (j == 0 || j == n) ? 0.5 : 1.0;
    wgt[j] = c * std::exp(-lambda * static_cast<double>(j) * dx);
    wsum += wgt[j];
  }
  // normalized so a constant c maps to c/lambda exactly
  const double scale = 1.0 / (lambda * wsum);
  std::vector<double> u(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      s += wgt[j] * f[(i + j) % n];
    }
    u[i] = scale * s;
  }
  u[n] = u[0];
  return u;
}

}  // namespace grid

GridFunction apply_semigroup(const GeneratorSpec& gen, double t, const GridFunction& f) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("apply_semigroup: t must be >= 0");
  }
  if (f.space_tag() != gen.space()) {
    throw std::invalid_argument("apply_semigroup: function lives in the wrong space");
  }
  if (gen.kind == GeneratorKind::NilpotentLeftShift) {
    return GridFunction(f.space_tag(), grid::shift_cutoff(f.values(), t));
  }
  return GridFunction(f.space_tag(), grid::shift_wrap(f.values(), t));
}

GridFunction resolvent(const GeneratorSpec& gen, double lambda, const GridFunction& f) {
  if (f.space_tag() != gen.space()) {
    throw std::invalid_argument("resolvent: function lives in the wrong space");
  }
  return GridFunction(f.space_tag(), grid::resolvent_samples(gen.kind, lambda, f.values()));
}

GridFunction laplace_resolvent_oracle(const GeneratorSpec& gen, double lambda,
                                      const GridFunction& f, double t_max, double dt) {
  if (gen.kind == GeneratorKind::PeriodicRotation && !(lambda > 0.0)) {
    throw std::domain_error("laplace_resolvent_oracle: PeriodicRotation requires lambda > 0");
  }
  if (gen.kind == GeneratorKind::NilpotentLeftShift && t_max < 1.0) {
    throw std::invalid_argument("laplace_resolvent_oracle: shift case needs t_max >= 1");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("laplace_resolvent_oracle: dt must be positive");
  }
  const std::size_t m = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-12));
  std::vector<double> acc(f.values().size(), 0.0);
  for (std::size_t j = 0; j <= m; ++j) {
    const double t = std::min(static_cast<double>(j) * dt, t_max);
    const double w = (j == 0 || j == m) ? 0.5 : 1.0;
    const double e = w * std::exp(-lambda * t);
    const GridFunction Tf = apply_semigroup(gen, t, f);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += e * Tf[i];
  }
  for (double& x : acc) x *= dt;
  if (gen.space() == SpaceTag::ShiftSpace) acc.back() = 0.0;
  return GridFunction(gen.space(), std::move(acc));
}

}  // namespace sglab
