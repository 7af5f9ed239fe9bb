#include "sglab/sampling.hpp"

#include <cmath>

namespace sglab {

namespace {

double node_x(std::size_t i, std::size_t n) {
  return static_cast<double>(i) / static_cast<double>(n);
}

}  // namespace

GridFunction sample_shift(std::size_t n_cells, const std::function<double(double)>& f) {
  std::vector<double> v(n_cells + 1);
  for (std::size_t i = 0; i <= n_cells; ++i) v[i] = f(node_x(i, n_cells));
  return GridFunction(SpaceTag::ShiftSpace, std::move(v));
}

GridFunction sample_periodic(std::size_t n_cells, const std::function<double(double)>& f) {
  std::vector<double> v(n_cells + 1);
  for (std::size_t i = 0; i < n_cells; ++i) v[i] = f(node_x(i, n_cells));
  v[n_cells] = v[0];
  return GridFunction(SpaceTag::PeriodicSpace, std::move(v));
}

std::vector<double> sample_density(std::size_t n_cells, const std::function<double(double)>& f) {
  std::vector<double> v(n_cells + 1);
  for (std::size_t i = 0; i <= n_cells; ++i) v[i] = f(node_x(i, n_cells));
  return v;
}

GridFunction ramp_down(std::size_t n_cells) {
  return sample_shift(n_cells, [](double x) { return 1.0 - x; });
}

std::vector<double> sample_indicator(std::size_t n_cells, double a, double b, double height) {
  if (!(0.0 <= a && a <= b && b <= 1.0)) {
    throw std::invalid_argument("sample_indicator: need 0 <= a <= b <= 1");
  }
  const double node_tol = 1e-12;
  std::vector<double> v(n_cells + 1, 0.0);
  for (std::size_t i = 0; i <= n_cells; ++i) {
    const double x = node_x(i, n_cells);
    if (std::abs(x - a) < node_tol || std::abs(x - b) < node_tol) {
      v[i] = 0.5 * height;
    } else if (x > a && x < b) {
      v[i] = height;
    }
  }
  return v;
}

std::vector<double> sample_step_updown(std::size_t n_cells) {
  const double node_tol = 1e-12;
  std::vector<double> v(n_cells + 1);
  for (std::size_t i = 0; i <= n_cells; ++i) {
    const double x = node_x(i, n_cells);
    if (std::abs(x - 0.5) < node_tol) {
      v[i] = 0.0;
    } else {
      v[i] = (x < 0.5) ? -1.0 : 1.0;
    }
  }
  return v;
}

GridFunction sample_tent_negative(std::size_t n_cells) {
  return sample_shift(n_cells,
                      [](double x) { return (x < 0.5) ? -x : x - 1.0; });
}

}  // namespace sglab
