#pragma once

#include "sglab/grid_function.hpp"

namespace sglab {

enum class GeneratorKind { NilpotentLeftShift, PeriodicRotation };

/// First-derivative generator d/dx on one of the two concrete sup-norm spaces.
///  - NilpotentLeftShift: (T(t)f)(x) = f(x+t) for x+t <= 1, else 0.
///    Nilpotent at t >= 1; spectral bound -inf.
///  - PeriodicRotation: (T(t)f)(x) = f((x+t) mod 1); spectral bound 0.
struct GeneratorSpec {
  GeneratorKind kind;
  double spectral_bound;

  SpaceTag space() const {
    return kind == GeneratorKind::NilpotentLeftShift ? SpaceTag::ShiftSpace
                                                     : SpaceTag::PeriodicSpace;
  }

  static GeneratorSpec nilpotent_left_shift();
  static GeneratorSpec periodic_rotation();
};

namespace grid {

/// Split a shift amount into whole grid steps and a fractional remainder,
/// snapping to a node when t*n is within 1e-9 of an integer (absorbs the
/// rounding of t*n; a genuinely off-grid t stays off-grid).
struct ShiftSplit {
  long steps;
  double theta;  // in [0,1)
};
ShiftSplit split_shift(double t, std::size_t n_cells);

/// Left shift with cutoff at 1 on raw samples (no boundary condition assumed).
std::vector<double> shift_cutoff(const std::vector<double>& v, double t);

/// Rotation shift on raw samples; the last node is defined as the first.
std::vector<double> shift_wrap(const std::vector<double>& v, double t);

/// Resolvent kernels on raw samples. NilpotentLeftShift accepts any real
/// lambda; PeriodicRotation requires lambda > 0.
std::vector<double> resolvent_samples(GeneratorKind kind, double lambda,
                                      const std::vector<double>& v);

}  // namespace grid

/// T(t)f. Requires t >= 0 and a matching space tag.
GridFunction apply_semigroup(const GeneratorSpec& gen, double t, const GridFunction& f);

/// R(lambda, A)f by the closed-form kernel:
///   shift:    u(x) = int_x^1 e^{lambda (x-s)} f(s) ds          (any real lambda)
///   periodic: u(x) = [sum'' e^{-lambda s_j} f(x+s_j mod 1)] / (lambda sum'' e^{-lambda s_j}),
///             lambda > 0; the normalization reproduces constants exactly.
/// Composite trapezoid of the kernel-weighted integrand on the grid.
GridFunction resolvent(const GeneratorSpec& gen, double lambda, const GridFunction& f);

/// Time-quadrature oracle int_0^t_max e^{-lambda t} T(t) f dt, trapezoid with
/// step dt. Independent check of the closed-form resolvent.
GridFunction laplace_resolvent_oracle(const GeneratorSpec& gen, double lambda,
                                      const GridFunction& f, double t_max, double dt);

}  // namespace sglab
