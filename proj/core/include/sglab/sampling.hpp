#pragma once

#include <functional>

#include "sglab/grid_function.hpp"

namespace sglab {

/// Sample a formula on the shift-space grid. The formula must satisfy
/// f(1) = 0 exactly or construction throws.
GridFunction sample_shift(std::size_t n_cells, const std::function<double(double)>& f);

/// Sample a formula on the periodic grid. The formula is read on [0,1) and the
/// last node is defined as the first (the sampling convention for formulas;
/// explicit sample files are never adjusted).
GridFunction sample_periodic(std::size_t n_cells, const std::function<double(double)>& f);

/// Raw nodal samples without any boundary condition (densities).
std::vector<double> sample_density(std::size_t n_cells, const std::function<double(double)>& f);

/// u0(x) = 1 - x on the shift grid.
GridFunction ramp_down(std::size_t n_cells);

/// Indicator height * chi_[a,b] sampled with half-height values at jump nodes,
/// so its trapezoid antiderivative matches the exact one at every node.
std::vector<double> sample_indicator(std::size_t n_cells, double a, double b, double height);

/// The up-down step: -1 on [0,1/2), +1 on (1/2,1], 0 at the jump.
std::vector<double> sample_step_updown(std::size_t n_cells);

/// Antiderivative of the up-down step: g(x) = -x on [0,1/2], x-1 on [1/2,1].
GridFunction sample_tent_negative(std::size_t n_cells);

}  // namespace sglab
