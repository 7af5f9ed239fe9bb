#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sglab {

/// Which sup-norm space a grid function lives in.
///  - ShiftSpace:    continuous f on [0,1] with f(1) = 0
///  - PeriodicSpace: continuous f on [0,1] with f(0) = f(1)
enum class SpaceTag { ShiftSpace, PeriodicSpace };

namespace grid {

// Low-level helpers on raw nodal samples over the uniform grid x_i = i/n,
// usable for data that does not satisfy a boundary condition (densities).

/// Piecewise-linear interpolation at x in [0,1]. Throws std::domain_error
/// outside the interval.
double interp(const std::vector<double>& v, double x);

/// Composite trapezoid over [0,1].
double trapezoid(const std::vector<double>& v);

/// Exact integral of the piecewise-linear interpolant over [a,b] in [0,1].
double trapezoid(const std::vector<double>& v, double a, double b);

/// max_i |v_i|
double sup_abs(const std::vector<double>& v);

/// min_i v_i
double min_value(const std::vector<double>& v);

bool all_finite(const std::vector<double>& v);

}  // namespace grid

/// Continuous function on [0,1], stored by its values at the n_cells+1 uniform
/// nodes and interpreted piecewise-linearly between them. The space boundary
/// condition is checked at construction and violations are rejected, never
/// silently corrected.
class GridFunction {
 public:
  GridFunction(SpaceTag tag, std::vector<double> values);

  static GridFunction zero(SpaceTag tag, std::size_t n_cells);

  SpaceTag space_tag() const { return tag_; }
  std::size_t n_cells() const { return values_.size() - 1; }
  double dx() const { return 1.0 / static_cast<double>(n_cells()); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  SpaceTag tag_;
  std::vector<double> values_;
};

/// sup norm: max over nodes of |f|. Exact for the interpolant.
double sup_norm(const GridFunction& f);

/// Pointwise maximum; the lattice operation of the AM-space realized node-wise.
/// Requires matching space tag and resolution.
GridFunction lattice_sup(const GridFunction& f, const GridFunction& g);

/// |f| = sup(f, -f)
GridFunction abs(const GridFunction& f);

/// f+ = sup(f, 0)
GridFunction positive_part(const GridFunction& f);

/// Composite trapezoid over [0,1].
double integrate(const GridFunction& f);

/// Exact integral of the interpolant over [a,b].
double integrate(const GridFunction& f, double a, double b);

/// Evaluate the interpolant at x in [0,1]; throws std::domain_error outside.
double interp_eval(const GridFunction& f, double x);

/// Tolerance for positivity checks on computed data: 1e-9 * (1 + sup_norm).
double positivity_tolerance(const GridFunction& f);

/// f >= -tol at every node.
bool is_nonnegative(const GridFunction& f, double tol);

GridFunction add(const GridFunction& f, const GridFunction& g);
GridFunction subtract(const GridFunction& f, const GridFunction& g);
GridFunction scaled(const GridFunction& f, double c);

/// max over nodes of |f - g|; the arguments must be compatible.
double sup_distance(const GridFunction& f, const GridFunction& g);

void require_compatible(const GridFunction& f, const GridFunction& g);

}  // namespace sglab
