#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sglab/dyson_phillips.hpp"
#include "sglab/report.hpp"
#include "sglab/staged_evolution.hpp"

namespace sglab {

/// A fully resolved run description. Precedence: scenario defaults, then the
/// config file, then command-line overrides.
struct ScenarioConfig {
  std::string name = "custom";
  SpaceTag space = SpaceTag::ShiftSpace;
  std::size_t n_cells = 2000;
  double dt = 2.5e-4;
  double lambda = 1.0;        // where the generation condition is reported
  double lambda_shift = 1.0;  // working rescaling of the series
  bool auto_shift = false;    // pick lambda_shift by halving/doubling instead
  double tau = 1.0;
  double tol_tail = 1e-8;
  int max_terms = 200;
  std::string u0_spec = "ramp";
  std::string weight_spec = "constant:1";
  std::string direction_spec = "constant:1";
  std::vector<double> output_times = {0.5};
  std::vector<double> probes = {0.0, 0.25, 0.5, 0.75};
  bool cross_check = false;
  bool parallel = false;
  std::vector<std::string> formats = {"json"};
  std::string out_dir = ".";
};

bool is_known_scenario(const std::string& name);

/// Baseline config of a named scenario; throws std::invalid_argument for an
/// unknown name. Known names: example-5-1, periodic-5-2, counterexample-5-3,
/// split-demo, custom.
ScenarioConfig scenario_defaults(const std::string& name);

/// Apply one "key = value" setting; throws std::invalid_argument on unknown
/// keys or malformed values.
void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Flat key = value file, '#' comments and blank lines ignored. A `scenario`
/// key selects the defaults (may appear anywhere; applied first).
ScenarioConfig load_config_file(const std::string& path);

/// Final validity check before any computation; throws std::invalid_argument.
void validate_config(const ScenarioConfig& cfg);

/// Everything a run produced, ready for emission.
struct RunArtifacts {
  std::string name;
  JsonValue report;
  std::vector<double> times;
  std::vector<GridFunction> states;
  std::vector<double> probes;
  int term_index_max = 0;
  double tail_bound = 0.0;
  std::vector<PlotSeries> state_plot;
  std::vector<PlotSeries> desch_plot;
  std::vector<std::pair<std::string, std::string>> extra_csv;  // suffix -> content
};

/// Execute the configured run. Configuration errors throw
/// std::invalid_argument before anything is computed; numerical failures
/// (divergence, exhausted series, inconsistent cross-checks) propagate as
/// SeriesDivergence / std::runtime_error. Negative mathematical verdicts are
/// recorded in the report, not thrown.
RunArtifacts run_scenario(const ScenarioConfig& cfg);

/// Write the requested formats into cfg.out_dir (created if missing); returns
/// the paths written. The report never mentions the output directory, so the
/// emitted bytes depend only on the run configuration.
std::vector<std::string> emit_artifacts(const RunArtifacts& art, const ScenarioConfig& cfg);

}  // namespace sglab
