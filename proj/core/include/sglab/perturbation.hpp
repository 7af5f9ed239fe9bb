#pragma once

#include <stdexcept>

#include "sglab/extrapolation.hpp"

namespace sglab {

/// Bf = (int_0^1 w f dx) * h with direction h in the extrapolation space.
/// The weight is the density of the functional f -> int w f and is kept as a
/// plain node-sample vector, not as a space element: w == 1 is a legitimate
/// weight over the shift space although constants violate its boundary
/// condition. `positive` records whether both factors are positive
/// (w >= 0 node-wise exactly and is_positive(h)).
struct RankOnePerturbation {
  std::vector<double> weight;  // n_cells + 1 samples
  ExtrapolatedElement direction;
  bool positive;

  SpaceTag space_tag() const { return direction.space_tag(); }
  std::size_t n_cells() const { return direction.n_cells(); }
};

/// Builds the perturbation and derives the positivity flag.
RankOnePerturbation make_rank_one(std::vector<double> weight, ExtrapolatedElement direction);

/// B with the direction scaled by c (the weight is left untouched).
RankOnePerturbation scaled(const RankOnePerturbation& B, double c);

/// Bf as an extrapolation-space element.
ExtrapolatedElement apply_perturbation(const RankOnePerturbation& B, const GridFunction& f);

/// R(lambda, A_{-1}) B f = (int w f) * R(lambda, A_{-1}) h; lands in the
/// underlying space.
GridFunction resolvent_RB(const GeneratorSpec& gen, double lambda,
                          const RankOnePerturbation& B, const GridFunction& f);

/// Verdict of the generation condition at lambda.
///   K   = ||R(lambda, A_{-1}) B||  = sup|R(lambda,A_{-1})h| * ||w||_1
///   spr = spectral radius of R(lambda, A_{-1}) B = int w * R(lambda,A_{-1})h
/// (rank-one closed forms; spr additionally cross-checked by power iteration).
/// spr <= K always.
struct DeschReport {
  double lambda;
  double K;
  double spr;
  bool norm_condition_met;  // K < 1
  bool spr_condition_met;   // spr < 1
};

DeschReport desch_condition(const GeneratorSpec& gen, double lambda,
                            const RankOnePerturbation& B);

/// Thrown when the Neumann series is detected to diverge (the generation
/// condition fails at this lambda).
struct SeriesDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Diagnostics of the Neumann series for (lambda - A_{-1} - B)^{-1} f.
struct NeumannResult {
  GridFunction sum;
  GridFunction closed_form;  // rank-one geometric closed form, cross-check
  std::vector<double> term_norms;
  int terms_used;
  bool converged;
  bool diverged;
  double tail_bound;
};

/// Term-by-term Neumann series sum_n (R(lambda,A_{-1}) B)^n R(lambda,A) f.
/// Stops when the current term norm drops below tol; flags divergence when a
/// term norm exceeds 1e6 times the initial one.
NeumannResult perturbed_resolvent_series(const GeneratorSpec& gen, double lambda,
                                         const RankOnePerturbation& B, const GridFunction& f,
                                         double tol = 1e-10, int max_terms = 10000);

/// Convenience wrapper: returns the series sum, throws SeriesDivergence on
/// divergence and std::runtime_error when max_terms is exhausted.
GridFunction perturbed_resolvent(const GeneratorSpec& gen, double lambda,
                                 const RankOnePerturbation& B, const GridFunction& f,
                                 double tol = 1e-10, int max_terms = 10000);

/// (lambda - A_{-1} - sB)^{-1} applied to the direction h itself (the series
/// started from R(lambda,A_{-1})h); needed for operator norms of
/// (lambda - A_{-1} - sB)^{-1} B.
GridFunction perturbed_resolvent_of_direction(const GeneratorSpec& gen, double lambda,
                                              const RankOnePerturbation& B,
                                              double background_scale,
                                              double tol = 1e-12, int max_terms = 10000);

struct SplitStage {
  int index;
  RankOnePerturbation stage_perturbation;  // B / n_stages
  double stage_K;  // ||(lambda - A_{-1} - (index/n) B)^{-1} (B/n)||
};

struct SplitSchedule {
  int n_stages;
  double whole_norm;  // ||(lambda - A_{-1} - B)^{-1} B||
  std::vector<SplitStage> stages;
};

/// Splitting schedule when the norm condition K >= 1 but the spectral-radius
/// condition holds: n = 1 + floor(whole_norm) stages of B/n, each verified to
/// satisfy its stage norm condition. K < 1 returns the single-stage schedule.
SplitSchedule split_schedule(const GeneratorSpec& gen, double lambda,
                             const RankOnePerturbation& B);

}  // namespace sglab
