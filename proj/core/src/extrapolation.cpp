#include "sglab/extrapolation.hpp"

#include <cmath>
#include <string>

namespace sglab {

namespace {

Representation representation_for(SpaceTag tag) {
  return tag == SpaceTag::ShiftSpace ? Representation::DerivativeOfF
                                     : Representation::FMinusDerivativeOfF;
}

GeneratorKind kind_for(SpaceTag tag) {
  return tag == SpaceTag::ShiftSpace ? GeneratorKind::NilpotentLeftShift
                                     : GeneratorKind::PeriodicRotation;
}

}  // namespace

ExtrapolatedElement::ExtrapolatedElement(GridFunction F,
                                         std::optional<std::vector<double>> density)
    : F_(std::move(F)), rep_(representation_for(F_.space_tag())), density_(std::move(density)) {
  if (density_ && density_->size() != F_.values().size()) {
    throw std::invalid_argument("ExtrapolatedElement: density resolution mismatch");
  }
  if (density_ && !grid::all_finite(*density_)) {
    throw std::invalid_argument("ExtrapolatedElement: non-finite density value");
  }
}

const std::vector<double>& ExtrapolatedElement::density() const {
  if (!density_) {
    throw std::logic_error("ExtrapolatedElement: no density stored");
  }
  return *density_;
}

GridFunction antiderivative_of_density(SpaceTag tag, const std::vector<double>& density) {
  const std::size_t n = density.size() - 1;
  if (tag == SpaceTag::ShiftSpace) {
    const double dx = 1.0 / static_cast<double>(n);
    std::vector<double> F(n + 1);
    F[n] = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      F[i] = F[i + 1] - 0.5 * dx * (density[i] + density[i + 1]);
    }
    return GridFunction(tag, std::move(F));
  }
  return GridFunction(
      tag, grid::resolvent_samples(GeneratorKind::PeriodicRotation, 1.0, density));
}

ExtrapolatedElement ExtrapolatedElement::from_antiderivative(GridFunction F) {
  return ExtrapolatedElement(std::move(F), std::nullopt);
}

ExtrapolatedElement ExtrapolatedElement::from_density(SpaceTag tag,
                                                      std::vector<double> density) {
  GridFunction F = antiderivative_of_density(tag, density);
  return ExtrapolatedElement(std::move(F), std::move(density));
}

ExtrapolatedElement ExtrapolatedElement::with_density(GridFunction F,
                                                      std::vector<double> density) {
  const GridFunction rebuilt = antiderivative_of_density(F.space_tag(), density);
  const double dx = F.dx();
  const double tol = 1e-10 + 10.0 * (1.0 + grid::sup_abs(density)) * dx * dx;
  if (sup_distance(F, rebuilt) > tol) {
    throw std::invalid_argument(
        "ExtrapolatedElement: antiderivative and density disagree by " +
        std::to_string(sup_distance(F, rebuilt)));
  }
  return ExtrapolatedElement(std::move(F), std::move(density));
}

ExtrapolatedElement embed(const GeneratorSpec& gen, const GridFunction& f) {
  if (f.space_tag() != gen.space()) {
    throw std::invalid_argument("embed: function lives in the wrong space");
  }
  GridFunction F = antiderivative_of_density(f.space_tag(), f.values());
  return ExtrapolatedElement(std::move(F), f.values());
}

bool is_positive(const ExtrapolatedElement& g) {
  const GridFunction& F = g.antiderivative();
  const std::size_t n = F.n_cells();
  if (g.has_density()) {
    // Nodal resolution: the antiderivative only sees cell averages, so for a
    // function element the density itself is the sharper (and for embedded
    // functions the exact) criterion.
    const std::vector<double>& rho = g.density();
    const double eps = 1e-9 * (1.0 + grid::sup_abs(rho));
    return grid::min_value(rho) >= -eps;
  }
  if (g.space_tag() == SpaceTag::ShiftSpace) {
    const double eps = positivity_tolerance(F);
    for (std::size_t i = 0; i < n; ++i) {
      if (F[i + 1] < F[i] - eps) return false;
    }
    return true;
  }
  // periodic: monotonicity of e^{-x} F(x), direction fixed by the sign oracle
  std::vector<double> G(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    G[i] = std::exp(-x) * F[i];
  }
  const double eps = 1e-9 * (1.0 + grid::sup_abs(G));
  static_assert(periodic_positive_direction == Monotonicity::NonIncreasing);
  for (std::size_t i = 0; i < n; ++i) {
    if (G[i + 1] > G[i] + eps) return false;
  }
  return true;
}

ExtrapolatedElement extrapolated_semigroup(const GeneratorSpec& gen, double t,
                                           const ExtrapolatedElement& g) {
  if (g.space_tag() != gen.space()) {
    throw std::invalid_argument("extrapolated_semigroup: element in the wrong space");
  }
  GridFunction F = apply_semigroup(gen, t, g.antiderivative());
  std::optional<std::vector<double>> density;
  if (g.has_density()) {
    if (gen.kind == GeneratorKind::NilpotentLeftShift) {
      std::vector<double> rho = grid::shift_cutoff(g.density(), t);
      // The cutoff truncates the density; when it lands exactly on a node the
      // sample there is halved (cleared once nothing is left of it), the jump
      // convention that keeps the trapezoid antiderivative of the truncated
      // density exact away from the jump. The element stays density-primary:
      // its antiderivative is rebuilt so that moving from_density(rho) gives
      // from_density(truncated rho) on the nose.
      const long n = static_cast<long>(g.n_cells());
      const auto [k, theta] = grid::split_shift(t, g.n_cells());
      const long cut = n - k;
      if (theta == 0.0 && cut >= 0 && cut <= n) rho[cut] = cut > 0 ? 0.5 * rho[cut] : 0.0;
      F = antiderivative_of_density(SpaceTag::ShiftSpace, rho);
      density = std::move(rho);
    } else {
      // rotation: node shifts commute with the resolvent kernel, so moving the
      // pair in parallel is the same as rebuilding from the moved density
      density = grid::shift_wrap(g.density(), t);
    }
  }
  return ExtrapolatedElement(std::move(F), std::move(density));
}

GridFunction extrapolated_resolvent(const GeneratorSpec& gen, double lambda,
                                    const ExtrapolatedElement& g) {
  if (g.space_tag() != gen.space()) {
    throw std::invalid_argument("extrapolated_resolvent: element in the wrong space");
  }
  const GridFunction& F = g.antiderivative();
  if (gen.kind == GeneratorKind::NilpotentLeftShift) {
    // R(lambda, A_{-1}) F' = lambda R(lambda, A) F - F
    return subtract(scaled(resolvent(gen, lambda, F), lambda), F);
  }
  // R(lambda, A_{-1})(F - F') = F - (lambda - 1) R(lambda, A) F
  return subtract(F, scaled(resolvent(gen, lambda, F), lambda - 1.0));
}

GridFunction extrapolated_resolvent_direct(const GeneratorSpec& gen, double lambda,
                                           const ExtrapolatedElement& g) {
  if (!g.has_density()) {
    throw std::logic_error("extrapolated_resolvent_direct: element has no density");
  }
  return GridFunction(gen.space(), grid::resolvent_samples(gen.kind, lambda, g.density()));
}

double norm_minus_one(const GeneratorSpec& gen, double lambda, const ExtrapolatedElement& g) {
  return sup_norm(extrapolated_resolvent(gen, lambda, g));
}

ExtrapolatedElement add(const ExtrapolatedElement& g1, const ExtrapolatedElement& g2) {
  GridFunction F = sglab::add(g1.antiderivative(), g2.antiderivative());
  std::optional<std::vector<double>> density;
  if (g1.has_density() && g2.has_density()) {
    std::vector<double> d(g1.density().size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = g1.density()[i] + g2.density()[i];
    density = std::move(d);
  }
  return ExtrapolatedElement(std::move(F), std::move(density));
}

ExtrapolatedElement scaled(const ExtrapolatedElement& g, double c) {
  GridFunction F = sglab::scaled(g.antiderivative(), c);
  std::optional<std::vector<double>> density;
  if (g.has_density()) {
    std::vector<double> d(g.density().size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = c * g.density()[i];
    density = std::move(d);
  }
  return ExtrapolatedElement(std::move(F), std::move(density));
}

}  // namespace sglab
