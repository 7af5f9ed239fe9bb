#include "sglab/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sglab {

namespace grid {

double interp(const std::vector<double>& v, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("interp: x = " + std::to_string(x) + " outside [0,1]");
  }
  const std::size_t n = v.size() - 1;
  const double u = x * static_cast<double>(n);
  std::size_t i = static_cast<std::size_t>(u);
  if (i >= n) return v[n];
  const double theta = u - static_cast<double>(i);
  return (1.0 - theta) * v[i] + theta * v[i + 1];
}

double trapezoid(const std::vector<double>& v) {
  const std::size_t n = v.size() - 1;
  double s = 0.5 * (v[0] + v[n]);
  for (std::size_t i = 1; i < n; ++i) s += v[i];
  return s / static_cast<double>(n);
}

double trapezoid(const std::vector<double>& v, double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a <= b)) {
    throw std::domain_error("trapezoid: bad subinterval");
  }
  const std::size_t n = v.size() - 1;
  const double dn = static_cast<double>(n);
  // work in grid units; the interpolant is linear on each cell, so the
  // integral over a partial cell is the trapezoid of its endpoint values
  const double ua = a * dn;
  const double ub = b * dn;
  const std::size_t ia = static_cast<std::size_t>(ua);
  const std::size_t ib = static_cast<std::size_t>(ub);
  auto value_at = [&](double u) {
    std::size_t i = static_cast<std::size_t>(u);
    if (i >= n) return v[n];
    const double t = u - static_cast<double>(i);
    return (1.0 - t) * v[i] + t * v[i + 1];
  };
  if (ia >= ib || ia + 1 > n) {
    // inside one cell (or degenerate)
    return 0.5 * (value_at(ua) + value_at(ub)) * (ub - ua) / dn;
  }
  double s = 0.5 * (value_at(ua) + v[ia + 1]) * (static_cast<double>(ia + 1) - ua);
  for (std::size_t i = ia + 1; i < ib; ++i) s += 0.5 * (v[i] + v[i + 1]);
  s += 0.5 * (v[ib] + value_at(ub)) * (ub - static_cast<double>(ib));
  return s / dn;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double min_value(const std::vector<double>& v) {
  return *std::min_element(v.begin(), v.end());
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace grid

GridFunction::GridFunction(SpaceTag tag, std::vector<double> values)
    : tag_(tag), values_(std::move(values)) {
  if (values_.size() < 2) {
    throw std::invalid_argument("GridFunction: need at least one cell");
  }
  if (!grid::all_finite(values_)) {
    throw std::invalid_argument("GridFunction: non-finite value");
  }
  if (tag_ == SpaceTag::ShiftSpace) {
    if (values_.back() != 0.0) {
      throw std::invalid_argument("GridFunction: shift space requires f(1) = 0, got " +
                                  std::to_string(values_.back()));
    }
  } else {
    if (values_.front() != values_.back()) {
      throw std::invalid_argument("GridFunction: periodic space requires f(0) = f(1)");
    }
  }
}

GridFunction GridFunction::zero(SpaceTag tag, std::size_t n_cells) {
  return GridFunction(tag, std::vector<double>(n_cells + 1, 0.0));
}

double sup_norm(const GridFunction& f) { return grid::sup_abs(f.values()); }

void require_compatible(const GridFunction& f, const GridFunction& g) {
  if (f.space_tag() != g.space_tag()) {
    throw std::invalid_argument("grid functions live in different spaces");
  }
  if (f.n_cells() != g.n_cells()) {
    throw std::invalid_argument("grid functions have different resolutions");
  }
}

GridFunction lattice_sup(const GridFunction& f, const GridFunction& g) {
  require_compatible(f, g);
  std::vector<double> v(f.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(f[i], g[i]);
  return GridFunction(f.space_tag(), std::move(v));
}

GridFunction abs(const GridFunction& f) { return lattice_sup(f, scaled(f, -1.0)); }

GridFunction positive_part(const GridFunction& f) {
  return lattice_sup(f, GridFunction::zero(f.space_tag(), f.n_cells()));
}

double integrate(const GridFunction& f) { return grid::trapezoid(f.values()); }

double integrate(const GridFunction& f, double a, double b) {
  return grid::trapezoid(f.values(), a, b);
}

double interp_eval(const GridFunction& f, double x) { return grid::interp(f.values(), x); }

double positivity_tolerance(const GridFunction& f) { return 1e-9 * (1.0 + sup_norm(f)); }

bool is_nonnegative(const GridFunction& f, double tol) {
  return grid::min_value(f.values()) >= -tol;
}

GridFunction add(const GridFunction& f, const GridFunction& g) {
  require_compatible(f, g);
  std::vector<double> v(f.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] + g[i];
  return GridFunction(f.space_tag(), std::move(v));
}

GridFunction subtract(const GridFunction& f, const GridFunction& g) {
  require_compatible(f, g);
  std::vector<double> v(f.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] - g[i];
  return GridFunction(f.space_tag(), std::move(v));
}

GridFunction scaled(const GridFunction& f, double c) {
  std::vector<double> v(f.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * f[i];
  // -0.0 breaks the exact boundary comparison; normalize
  if (f.space_tag() == SpaceTag::ShiftSpace) v.back() = v.back() + 0.0;
  return GridFunction(f.space_tag(), std::move(v));
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
  require_compatible(f, g);
  double m = 0.0;
  for (std::size_t i = 0; i < f.values().size(); ++i) {
    m = std::max(m, std::abs(f[i] - g[i]));
  }
  return m;
}

}  // namespace sglab
