#include "sglab/perturbation.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sglab {

namespace {

/// Trapezoid of the node-wise product w*f.
double pairing(const std::vector<double>& w, const std::vector<double>& f) {
  const std::size_t n = w.size() - 1;
  double s = 0.5 * (w[0] * f[0] + w[n] * f[n]);
  for (std::size_t i = 1; i < n; ++i) s += w[i] * f[i];
  return s / static_cast<double>(n);
}

double pairing(const std::vector<double>& w, const GridFunction& f) {
  if (w.size() != f.values().size()) {
    throw std::invalid_argument("weight pairing: grid size mismatch");
  }
  return pairing(w, f.values());
}

double weight_l1(const std::vector<double>& w) {
  std::vector<double> a(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) a[i] = std::abs(w[i]);
  return grid::trapezoid(a);
}

/// Power iteration for the spectral radius of f -> (int w f) u on the grid.
double power_iteration_spr(const std::vector<double>& w, const GridFunction& u) {
  const std::size_t n = u.n_cells();
  std::vector<double> z(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    z[i] = 1.0 - static_cast<double>(i) / static_cast<double>(n);
  }
  double estimate = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double zn = grid::sup_abs(z);
    if (zn == 0.0) return 0.0;
    for (double& x : z) x /= zn;
    const double c = pairing(w, z);
    for (std::size_t i = 0; i <= n; ++i) z[i] = c * u[i];
    const double next = grid::sup_abs(z);
    if (std::abs(next - estimate) <= 1e-12 * (1.0 + std::abs(next))) {
      return next;
    }
    estimate = next;
  }
  return estimate;
}

}  // namespace

RankOnePerturbation make_rank_one(std::vector<double> weight, ExtrapolatedElement direction) {
  if (weight.size() != direction.n_cells() + 1) {
    throw std::invalid_argument("make_rank_one: weight and direction grids do not match");
  }
  if (!grid::all_finite(weight)) {
    throw std::invalid_argument("make_rank_one: weight has non-finite samples");
  }
  const bool positive = grid::min_value(weight) >= 0.0 && is_positive(direction);
  return RankOnePerturbation{std::move(weight), std::move(direction), positive};
}

RankOnePerturbation scaled(const RankOnePerturbation& B, double c) {
  return make_rank_one(B.weight, scaled(B.direction, c));
}

ExtrapolatedElement apply_perturbation(const RankOnePerturbation& B, const GridFunction& f) {
  return scaled(B.direction, pairing(B.weight, f));
}

GridFunction resolvent_RB(const GeneratorSpec& gen, double lambda,
                          const RankOnePerturbation& B, const GridFunction& f) {
  const double c = pairing(B.weight, f);
  return scaled(extrapolated_resolvent(gen, lambda, B.direction), c);
}

DeschReport desch_condition(const GeneratorSpec& gen, double lambda,
                            const RankOnePerturbation& B) {
  if (!B.positive) {
    throw std::invalid_argument("desch_condition: perturbation must be positive");
  }
  const GridFunction u = extrapolated_resolvent(gen, lambda, B.direction);
  const double K = sup_norm(u) * weight_l1(B.weight);
  const double spr = pairing(B.weight, u);
  const double spr_pi = power_iteration_spr(B.weight, u);
  if (std::abs(spr - spr_pi) > 1e-9 * (1.0 + std::abs(spr))) {
    throw std::runtime_error("desch_condition: power iteration disagrees with closed form: " +
                             std::to_string(spr) + " vs " + std::to_string(spr_pi));
  }
  if (spr > K * (1.0 + 1e-12) + 1e-15) {
    throw std::logic_error("desch_condition: spr exceeds K");
  }
  return DeschReport{lambda, K, spr, K < 1.0, spr < 1.0};
}

namespace {

struct SeriesState {
  std::vector<double> sum;
  std::vector<double> term_norms;
  int terms_used = 1;
  bool converged = false;
  bool diverged = false;
};

/// Terms t_{k+1} = scale * <w, t_k> * u_dir starting from t_0 = u0.
SeriesState run_neumann(const std::vector<double>& w, const GridFunction& u_dir,
                        const std::vector<double>& u0, double scale, double tol,
                        int max_terms) {
  const std::size_t n = u_dir.n_cells();
  SeriesState st;
  st.sum = u0;
  std::vector<double> term = u0;
  const double initial = grid::sup_abs(u0);
  st.term_norms.push_back(initial);
  if (initial == 0.0) {
    st.converged = true;
    return st;
  }
  for (int k = 1; k <= max_terms; ++k) {
    const double c = scale * pairing(w, term);
    for (std::size_t i = 0; i <= n; ++i) term[i] = c * u_dir[i];
    const double tn = grid::sup_abs(term);
    st.term_norms.push_back(tn);
    st.terms_used = k + 1;
    for (std::size_t i = 0; i <= n; ++i) st.sum[i] += term[i];
    if (tn <= tol) {
      st.converged = true;
      return st;
    }
    if (tn > 1e6 * initial) {
      st.diverged = true;
      return st;
    }
  }
  return st;
}

}  // namespace

NeumannResult perturbed_resolvent_series(const GeneratorSpec& gen, double lambda,
                                         const RankOnePerturbation& B, const GridFunction& f,
                                         double tol, int max_terms) {
  const GridFunction u0 = resolvent(gen, lambda, f);
  const GridFunction u_dir = extrapolated_resolvent(gen, lambda, B.direction);
  const double spr = pairing(B.weight, u_dir);
  SeriesState st = run_neumann(B.weight, u_dir, u0.values(), 1.0, tol, max_terms);

  GridFunction sum(gen.space(), std::move(st.sum));
  GridFunction closed = sum;
  if (spr < 1.0) {
    // rank-one geometric closed form R f + <w, R f>/(1 - spr) * R_{-1} h
    closed = sglab::add(u0, scaled(u_dir, pairing(B.weight, u0) / (1.0 - spr)));
  }
  double tail = std::numeric_limits<double>::infinity();
  if (spr < 1.0 && !st.term_norms.empty()) {
    tail = st.term_norms.back() * spr / (1.0 - spr);
  }
  return NeumannResult{std::move(sum),   std::move(closed), std::move(st.term_norms),
                       st.terms_used,    st.converged,      st.diverged,
                       tail};
}

GridFunction perturbed_resolvent(const GeneratorSpec& gen, double lambda,
                                 const RankOnePerturbation& B, const GridFunction& f,
                                 double tol, int max_terms) {
  NeumannResult r = perturbed_resolvent_series(gen, lambda, B, f, tol, max_terms);
  if (r.diverged) {
    throw SeriesDivergence(
        "perturbed resolvent series diverges at lambda = " + std::to_string(lambda) +
        " (spectral radius condition fails)");
  }
  if (!r.converged) {
    throw std::runtime_error("perturbed resolvent series did not converge within max_terms");
  }
  return std::move(r.sum);
}

GridFunction perturbed_resolvent_of_direction(const GeneratorSpec& gen, double lambda,
                                              const RankOnePerturbation& B,
                                              double background_scale, double tol,
                                              int max_terms) {
  const GridFunction u_dir = extrapolated_resolvent(gen, lambda, B.direction);
  SeriesState st =
      run_neumann(B.weight, u_dir, u_dir.values(), background_scale, tol, max_terms);
  if (st.diverged) {
    throw SeriesDivergence("resolvent series for the direction diverges at lambda = " +
                           std::to_string(lambda));
  }
  if (!st.converged) {
    throw std::runtime_error("resolvent series for the direction did not converge");
  }
  return GridFunction(gen.space(), std::move(st.sum));
}

SplitSchedule split_schedule(const GeneratorSpec& gen, double lambda,
                             const RankOnePerturbation& B) {
  const DeschReport d = desch_condition(gen, lambda, B);
  if (!(d.spr < 1.0)) {
    throw SeriesDivergence("split_schedule: spectral radius " + std::to_string(d.spr) +
                           " >= 1 at lambda = " + std::to_string(lambda) +
                           "; no finite schedule exists");
  }
  const double w1 = weight_l1(B.weight);
  if (d.K == 0.0) {
    return SplitSchedule{1, 0.0, {SplitStage{0, B, 0.0}}};
  }
  const double whole_norm =
      w1 * sup_norm(perturbed_resolvent_of_direction(gen, lambda, B, 1.0));
  if (d.K < 1.0) {
    // norm condition already holds; a single stage suffices
    return SplitSchedule{1, whole_norm, {SplitStage{0, B, d.K}}};
  }
  int n = 1 + static_cast<int>(std::floor(whole_norm));
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<SplitStage> stages;
    stages.reserve(static_cast<std::size_t>(n));
    bool ok = true;
    const RankOnePerturbation piece = scaled(B, 1.0 / static_cast<double>(n));
    for (int j = 0; j < n; ++j) {
      const double s = static_cast<double>(j) / static_cast<double>(n);
      const double stage_K =
          (w1 / static_cast<double>(n)) *
          sup_norm(perturbed_resolvent_of_direction(gen, lambda, B, s));
      if (!(stage_K < 1.0)) {
        ok = false;
        break;
      }
      stages.push_back(SplitStage{j, piece, stage_K});
    }
    if (ok) {
      return SplitSchedule{n, whole_norm, std::move(stages)};
    }
    ++n;  // numerical slack; the theory guarantees stage norms < whole_norm / n
  }
  throw std::runtime_error("split_schedule: could not verify stage norms < 1");
}

}  // namespace sglab
