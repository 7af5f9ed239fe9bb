#pragma once

#include "sglab/dyson_phillips.hpp"

namespace sglab {

/// Result of the stage-by-stage semigroup construction along a splitting
/// schedule computed at cfg.lambda_shift.
struct StagedResult {
  SplitSchedule schedule;
  std::vector<double> times;
  std::vector<GridFunction> states;
  std::vector<int> terms_per_stage; // series terms used by each stage cascade
  double scalar_tail = 0.0;         // largest dropped scalar term, kappa-scaled
  bool positivity_ok = true;
};

/// Evolve u0 under A + B when only the spectral-radius condition holds at the
/// working lambda: split_schedule(cfg.lambda_shift) yields n stages of B/n,
/// and the perturbed semigroups of A + (j/n)B are built one on top of the
/// other, all in the common rescaled frame.
///
/// Through the rank-one structure every stage reduces to scalar Volterra
/// cascades: with q_j(r) = <w, e^{-lambda r} T^{(j)}_{-1}(r) h> (level j the
/// semigroup of A + (j/n)B), the Dyson-Phillips series of level j with
/// respect to level j-1 gives q_j as a geometric series of convolutions of
/// q_{j-1}, and likewise for the orbit masses m_j(s) = <w, T~^{(j)}(s) u0>.
/// The Duhamel corrections of all levels are then pushed down to the base
/// orbit of h and materialized in a single space quadrature.
///
/// A single admissible stage reproduces dp_evolve up to stopping rules.
StagedResult staged_evolve(const GeneratorSpec& gen, const RankOnePerturbation& B,
                           const DpConfig& cfg, const GridFunction& u0,
                           const std::vector<double>& output_times);

}  // namespace sglab
