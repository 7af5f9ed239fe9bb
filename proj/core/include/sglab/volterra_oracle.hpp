#pragma once

#include "sglab/semigroup.hpp"

namespace sglab {

/// Scalar mass history of the transport-with-feedback problem on the shift
/// space: u_t = u_x + (int_0^1 u) h on [0,1], u(t,1) = 0, u(0,.) = u0.
/// Integrating along characteristics, m(t) = int_0^1 u(t,.) solves the
/// Volterra equation
///   m(t) = a(t) + int_0^t k(t-s) m(s) ds,
///   a(t) = int_t^1 u0,  k(r) = int_r^1 h.
/// Solved by the product trapezoid rule; second order in dt.
struct VolterraSolution {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> a_values;
  std::vector<double> kernel_values;
};

VolterraSolution volterra_mass(const GridFunction& u0, const std::vector<double>& h_density,
                               double horizon, double dt);

/// Mild solution rebuilt from the mass history along characteristics:
///   u(t,x) = u0(x+t) 1[x+t<=1] + int_0^t m(s) h(x+t-s) 1[x+t-s<=1] ds.
/// The s-quadrature honors the cutoff point exactly (partial end cell).
GridFunction characteristics_solution(const GridFunction& u0, const std::vector<double>& h_density,
                                      const VolterraSolution& sol, double t);

/// First-order upwind finite-difference resolvent (lambda I - D)^{-1} f where
/// D is the one-sided difference matrix realizing d/dx under the boundary
/// condition of the space.  Shift: back-substitution from u(1) = 0, safe for
/// all lambda >= 0.  Periodic: cyclic bidiagonal solve, singular at lambda = 0
/// (throws std::domain_error).  Independent of the closed-form resolvent.
GridFunction discrete_resolvent_oracle(const GeneratorSpec& gen, double lambda,
                                       const GridFunction& f);

}  // namespace sglab
