#pragma once

#include "sglab/perturbation.hpp"

namespace sglab {

/// Configuration of one perturbed-semigroup construction run. The series is
/// run for the rescaled generator A - lambda_shift (so that the rescaled
/// resolvent norm K is < 1) and the states are multiplied back by
/// e^{lambda_shift * t}.
struct DpConfig {
  double lambda_shift = 1.0;
  double tau = 1.0;       // time horizon; must be a multiple of dt
  double dt = 1e-3;       // quadrature step of the time integrals
  double tol_tail = 1e-8; // stop once the current term norm drops below this
  int max_terms = 200;
  bool cross_check = false; // density vs antiderivative path, see dp_evolve
  bool parallel = false;    // materialize output states concurrently
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<GridFunction> states; // e^{lambda_shift t} * truncated series
  // Sup norms over the time grid of the rescaled series terms. Entry 0 is the
  // measured norm of the free orbit; entries n >= 1 are the rank-one bounds
  // sup|R(lambda_shift, A_{-1})h| * sup_s |m_{n-1}(s)| used by the stopping
  // rule, where m_n(s) pairs the weight with the n-th term.
  std::vector<double> term_norms;
  double tail_bound = 0.0; // last term norm * K/(1-K), rescaled frame
  bool positivity_ok = true;
  int terms_used = 0;
  double rescaled_K = 0.0;
  double cross_check_max_diff = 0.0;
};

/// Snap t to the uniform time grid; throws std::invalid_argument when t is
/// not a grid point (all time arguments of the engine must be).
int time_index(double t, double dt);

/// c[k] = int_0^{t_k} a(t_k - s) b(s) ds by trapezoid on the shared grid.
std::vector<double> trapezoid_convolution(const std::vector<double>& a,
                                          const std::vector<double>& b, double dt);

/// Perturbed-semigroup engine for one (generator, rank-one B, config) triple.
///
/// Everything scalar is reduced through the rank-one structure: the terms
/// S_n(t)u0 = int_0^t m_{n-1}(s) T_{-1}(t-s)h ds are driven by the scalar
/// masses m_n(s) = <w, S_n(s)u0>, which satisfy m_n = m_{n-1} * q with the
/// kernel q(r) = <w, T_{-1}(r)h> (all in the rescaled frame). Spatial states
/// are only materialized at requested times, against the summed mass.
///
/// Directions carrying a density are integrated as shifted densities with a
/// cutoff-exact split of the straddling quadrature cell; antiderivative-only
/// directions go through the integration-by-parts identity
///   int_0^t m(s) d(T(t-s)F) ds
///     = m(0) T(t)F - m(t) F + int_0^t (m'(s) + lambda m(s)) T(t-s)F ds
/// (rescaled, shift representation; the periodic representation adds the
/// zeroth-order part), with m' by central differences.
///
/// Construction never requires K < 1; only evolve() does. The primitives are
/// reused by the staged construction where the un-split K is >= 1.
class DysonPhillipsEngine {
 public:
  DysonPhillipsEngine(const GeneratorSpec& gen, const RankOnePerturbation& B, DpConfig cfg);

  const DpConfig& config() const { return cfg_; }
  int n_steps() const { return n_steps_; }
  double rescaled_K() const { return K_; }
  /// sup |R(lambda_shift, A_{-1}) h|; term-norm factor of the rank-one bound.
  double kappa() const { return kappa_; }
  const std::vector<double>& q_kernel() const { return q_; }

  struct OrbitScan {
    std::vector<double> mass; // m_0[k] = <w, e^{-lambda s_k} T(s_k) u0>
    double sup_norm = 0.0;    // max over the grid of the rescaled orbit norm
  };
  OrbitScan scan_orbit(const GridFunction& u0) const;

  /// e^{-lambda_shift t} T(t) u0, the zeroth term.
  GridFunction rescaled_orbit(double t, const GridFunction& u0) const;

  /// int_0^t M(s) T_{-1}(t-s) h ds (rescaled frame); M sampled on the grid.
  GridFunction convolve_direction(const std::vector<double>& mass, double t) const;

  /// int_0^b e^{-lambda_shift r} T_{-1}(r) h dr.
  GridFunction orbit_integral(double b) const;

  /// n-th series term at time t (rescaled frame); prior masses are recomputed
  /// internally, so the call is self-contained.
  GridFunction term(int n, double t, const GridFunction& u0) const;

  EvolutionResult evolve(const GridFunction& u0,
                         const std::vector<double>& output_times) const;

 private:
  std::vector<double> q_from_density() const;
  std::vector<double> q_from_antiderivative() const;
  GridFunction convolve_density(const std::vector<double>& mass, int k) const;
  GridFunction convolve_antiderivative(const std::vector<double>& mass, int k) const;

  GeneratorSpec gen_;
  RankOnePerturbation B_;
  DpConfig cfg_;
  int n_steps_;
  bool density_path_;
  double weight_l1_;
  double kappa_;
  double K_;
  std::vector<double> q_;
};

GridFunction dp_term(const GeneratorSpec& gen, const RankOnePerturbation& B,
                     const DpConfig& cfg, int n, double t, const GridFunction& u0);

/// Truncated series evolution. Requires the rescaled K < 1 (otherwise throws
/// and the caller must go through split_schedule / staged_evolve). When
/// cfg.cross_check is set and the direction carries a density, the whole run
/// is repeated through the antiderivative path and the states must agree
/// within 1e-6 * (1 + state scale).
EvolutionResult dp_evolve(const GeneratorSpec& gen, const RankOnePerturbation& B,
                          const DpConfig& cfg, const GridFunction& u0,
                          const std::vector<double>& output_times);

/// (last term norm) * K/(1-K); throws unless 0 <= K < 1 and a term exists.
double dp_tail_bound(double rescaled_K, const std::vector<double>& term_norms);

/// Smallest lambda in {1/2, 1, 2, 4, ...} with K(lambda) <= target.
double choose_rescaling(const GeneratorSpec& gen, const RankOnePerturbation& B,
                        double target = 0.7);

/// int_0^tau e^{-lambda_shift r} T_{-1}(r) h dr as an element of the space.
GridFunction dp_orbit_integral(const GeneratorSpec& gen, const ExtrapolatedElement& h,
                               double lambda_shift, double tau, double dt);

}  // namespace sglab
