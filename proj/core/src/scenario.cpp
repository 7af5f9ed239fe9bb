#include "sglab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sglab/extrapolation.hpp"
#include "sglab/perturbation.hpp"
#include "sglab/sampling.hpp"
#include "sglab/volterra_oracle.hpp"

namespace sglab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: bad boolean value for " + key + ": '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(v);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& tok : split_list(v)) out.push_back(parse_double(key, tok));
  return out;
}

bool aligned_to(double t, double dt) {
  const double pos = t / dt;
  return std::abs(pos - std::floor(pos + 0.5)) <= 1e-9 * (1.0 + std::abs(pos));
}

double weight_l1(const std::vector<double>& w) {
  std::vector<double> a(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) a[i] = std::abs(w[i]);
  return grid::trapezoid(a);
}

GeneratorSpec make_generator(const ScenarioConfig& cfg) {
  return cfg.space == SpaceTag::ShiftSpace ? GeneratorSpec::nilpotent_left_shift()
                                           : GeneratorSpec::periodic_rotation();
}

// "name" or "name:arg1,arg2"
std::pair<std::string, std::vector<std::string>> parse_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, {}};
  return {spec.substr(0, colon), split_list(spec.substr(colon + 1))};
}

GridFunction build_u0(const ScenarioConfig& cfg) {
  auto [name, args] = parse_spec(cfg.u0_spec);
  const std::size_t n = cfg.n_cells;
  if (name == "ramp") {
    if (cfg.space != SpaceTag::ShiftSpace)
      throw std::invalid_argument("u0 'ramp' lives on the shift space");
    return ramp_down(n);
  }
  if (name == "zero") return GridFunction::zero(cfg.space, n);
  if (name == "one-plus-half-cosine") {
    if (cfg.space != SpaceTag::PeriodicSpace)
      throw std::invalid_argument("u0 'one-plus-half-cosine' lives on the periodic space");
    return sample_periodic(n, [](double x) { return 1.0 + 0.5 * std::cos(2.0 * kPi * x); });
  }
  if (name == "constant") {
    if (args.size() != 1) throw std::invalid_argument("u0 'constant' takes one value");
    const double c = parse_double("u0", args[0]);
    if (cfg.space == SpaceTag::ShiftSpace && c != 0.0)
      throw std::invalid_argument("a nonzero constant violates the shift boundary condition");
    return cfg.space == SpaceTag::ShiftSpace
               ? GridFunction::zero(cfg.space, n)
               : sample_periodic(n, [c](double) { return c; });
  }
  throw std::invalid_argument("unknown u0 formula: " + cfg.u0_spec);
}

std::vector<double> build_weight(const ScenarioConfig& cfg) {
  auto [name, args] = parse_spec(cfg.weight_spec);
  const std::size_t n = cfg.n_cells;
  if (name == "constant") {
    if (args.size() != 1) throw std::invalid_argument("weight 'constant' takes one value");
    return std::vector<double>(n + 1, parse_double("weight", args[0]));
  }
  if (name == "indicator") {
    if (args.size() != 3) throw std::invalid_argument("weight 'indicator' takes a,b,height");
    return sample_indicator(n, parse_double("weight", args[0]), parse_double("weight", args[1]),
                            parse_double("weight", args[2]));
  }
  throw std::invalid_argument("unknown weight formula: " + cfg.weight_spec);
}

ExtrapolatedElement build_direction(const ScenarioConfig& cfg) {
  auto [name, args] = parse_spec(cfg.direction_spec);
  const std::size_t n = cfg.n_cells;
  if (name == "constant") {
    if (args.size() != 1) throw std::invalid_argument("direction 'constant' takes one value");
    return ExtrapolatedElement::from_density(
        cfg.space, std::vector<double>(n + 1, parse_double("direction", args[0])));
  }
  if (name == "indicator") {
    if (args.size() != 3) throw std::invalid_argument("direction 'indicator' takes a,b,height");
    return ExtrapolatedElement::from_density(
        cfg.space, sample_indicator(n, parse_double("direction", args[0]),
                                    parse_double("direction", args[1]),
                                    parse_double("direction", args[2])));
  }
  if (name == "step-updown") {
    if (cfg.space != SpaceTag::ShiftSpace)
      throw std::invalid_argument("direction 'step-updown' lives on the shift space");
    if (n % 2 != 0)
      throw std::invalid_argument("direction 'step-updown' needs an even cell count");
    return ExtrapolatedElement::from_antiderivative(sample_tent_negative(n));
  }
  if (name == "one-plus-half-sine") {
    return ExtrapolatedElement::from_density(cfg.space, sample_density(n, [](double x) {
                                               return 1.0 + 0.5 * std::sin(2.0 * kPi * x);
                                             }));
  }
  if (name == "antiderivative-file") {
    if (args.size() != 1) throw std::invalid_argument("direction 'antiderivative-file' takes a path");
    std::ifstream in(args[0]);
    if (!in) throw std::invalid_argument("cannot read antiderivative file: " + args[0]);
    std::vector<double> values;
    double x = 0.0;
    while (in >> x) values.push_back(x);
    if (values.size() != n + 1)
      throw std::invalid_argument("antiderivative file must hold n_cells+1 samples");
    return ExtrapolatedElement::from_antiderivative(GridFunction(cfg.space, std::move(values)));
  }
  throw std::invalid_argument("unknown direction formula: " + cfg.direction_spec);
}

const char* space_name(SpaceTag tag) {
  return tag == SpaceTag::ShiftSpace ? "shift" : "periodic";
}

JsonValue config_echo(const ScenarioConfig& cfg) {
  JsonValue c = JsonValue::object();
  c.set("n_cells", JsonValue::integer(static_cast<long long>(cfg.n_cells)));
  c.set("dt", JsonValue::number(cfg.dt));
  c.set("lambda", JsonValue::number(cfg.lambda));
  if (cfg.auto_shift)
    c.set("lambda_shift", JsonValue::string("auto"));
  else
    c.set("lambda_shift", JsonValue::number(cfg.lambda_shift));
  c.set("tau", JsonValue::number(cfg.tau));
  c.set("tol_tail", JsonValue::number(cfg.tol_tail));
  c.set("max_terms", JsonValue::integer(cfg.max_terms));
  c.set("u0", JsonValue::string(cfg.u0_spec));
  c.set("weight", JsonValue::string(cfg.weight_spec));
  c.set("direction", JsonValue::string(cfg.direction_spec));
  c.set("output_times", JsonValue::number_array(cfg.output_times));
  c.set("probes", JsonValue::number_array(cfg.probes));
  c.set("cross_check", JsonValue::boolean(cfg.cross_check));
  c.set("parallel", JsonValue::boolean(cfg.parallel));
  return c;
}

JsonValue desch_block(const DeschReport& d) {
  JsonValue j = JsonValue::object();
  j.set("lambda", JsonValue::number(d.lambda));
  j.set("K", JsonValue::number(d.K));
  j.set("spr", JsonValue::number(d.spr));
  j.set("norm_condition_met", JsonValue::boolean(d.norm_condition_met));
  j.set("spr_condition_met", JsonValue::boolean(d.spr_condition_met));
  return j;
}

void add_check(JsonValue& checks, bool& all_ok, const std::string& name, bool value) {
  checks.set(name, JsonValue::boolean(value));
  all_ok = all_ok && value;
}

std::vector<PlotSeries> states_plot(const std::vector<double>& times,
                                    const std::vector<GridFunction>& states) {
  std::vector<PlotSeries> out;
  for (std::size_t k = 0; k < states.size(); ++k) {
    PlotSeries s;
    char label[32];
    std::snprintf(label, sizeof label, "t=%g", times[k]);
    s.label = label;
    const std::size_t n = states[k].n_cells();
    const std::size_t stride = std::max<std::size_t>(1, n / 400);
    for (std::size_t i = 0; i <= n; i += stride)
      s.points.emplace_back(static_cast<double>(i) / static_cast<double>(n), states[k][i]);
    if ((n % stride) != 0) s.points.emplace_back(1.0, states[k][n]);
    out.push_back(std::move(s));
  }
  return out;
}

// Numerical sign probe for the periodic representation: solve F - F' = mu for
// nonnegative mu and look at which way e^{-x} F(x) moves.
Monotonicity periodic_sign_probe(std::size_t n) {
  const std::vector<double> mu = sample_density(n, [](double x) {
    return 1.0 + 0.5 * std::sin(2.0 * kPi * x);
  });
  const GridFunction F = antiderivative_of_density(SpaceTag::PeriodicSpace, mu);
  int up = 0, down = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::exp(-static_cast<double>(i) / n) * F[i];
    const double b = std::exp(-static_cast<double>(i + 1) / n) * F[i + 1];
    (b > a ? up : down)++;
  }
  if (up > 0 && down > 0)
    throw std::runtime_error("periodic sign probe: e^{-x}F not monotone for positive density");
  return up > 0 ? Monotonicity::NonDecreasing : Monotonicity::NonIncreasing;
}

struct EvolutionOutcome {
  bool ran = false;
  bool staged = false;
  bool positivity_ok = true;
  double max_state_sup = 0.0;
};

}  // namespace

bool is_known_scenario(const std::string& name) {
  return name == "example-5-1" || name == "periodic-5-2" || name == "counterexample-5-3" ||
         name == "split-demo" || name == "custom";
}

ScenarioConfig scenario_defaults(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  if (name == "custom") return cfg;
  if (name == "example-5-1") {
    cfg.space = SpaceTag::ShiftSpace;
    cfg.n_cells = 2000;
    cfg.dt = 2.5e-4;
    cfg.lambda = 1.0;
    cfg.lambda_shift = 1.0;
    cfg.tau = 1.0;
    cfg.u0_spec = "ramp";
    cfg.weight_spec = "constant:1";
    cfg.direction_spec = "constant:1";
    cfg.output_times = {0.25, 0.5, 1.0};
    cfg.cross_check = true;
    return cfg;
  }
  if (name == "periodic-5-2") {
    cfg.space = SpaceTag::PeriodicSpace;
    cfg.n_cells = 2000;
    cfg.dt = 5e-4;
    cfg.lambda = 2.0;
    cfg.lambda_shift = 2.0;
    cfg.tau = 1.0;
    cfg.u0_spec = "one-plus-half-cosine";
    cfg.weight_spec = "constant:1";
    cfg.direction_spec = "one-plus-half-sine";
    cfg.output_times = {0.5, 1.0};
    cfg.cross_check = true;
    return cfg;
  }
  if (name == "counterexample-5-3") {
    cfg.space = SpaceTag::ShiftSpace;
    cfg.n_cells = 1000;
    cfg.dt = 2.5e-4;
    cfg.lambda = 0.0;
    cfg.lambda_shift = 1.0;
    cfg.tau = 0.5;
    cfg.u0_spec = "ramp";
    cfg.weight_spec = "constant:1";
    cfg.direction_spec = "step-updown";
    cfg.output_times = {0.25, 0.5};
    cfg.cross_check = false;
    return cfg;
  }
  if (name == "split-demo") {
    cfg.space = SpaceTag::ShiftSpace;
    cfg.n_cells = 4000;
    cfg.dt = 2.5e-4;
    cfg.lambda = 0.0;
    cfg.lambda_shift = 0.0;
    cfg.tau = 0.5;
    cfg.u0_spec = "ramp";
    cfg.weight_spec = "constant:1";
    cfg.direction_spec = "indicator:0,0.25,8";
    cfg.output_times = {0.25, 0.5};
    cfg.cross_check = false;
    return cfg;
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "scenario")
    throw std::invalid_argument(
        "config: 'scenario' selects the defaults and cannot be reassigned here");
  if (key == "space") {
    if (value == "shift")
      cfg.space = SpaceTag::ShiftSpace;
    else if (value == "periodic")
      cfg.space = SpaceTag::PeriodicSpace;
    else
      throw std::invalid_argument("config: space must be 'shift' or 'periodic'");
  } else if (key == "n_cells") {
    const long n = parse_long(key, value);
    if (n < 4) throw std::invalid_argument("config: n_cells must be at least 4");
    cfg.n_cells = static_cast<std::size_t>(n);
  } else if (key == "dt") {
    cfg.dt = parse_double(key, value);
  } else if (key == "lambda") {
    cfg.lambda = parse_double(key, value);
  } else if (key == "lambda_shift") {
    if (value == "auto") {
      cfg.auto_shift = true;
    } else {
      cfg.auto_shift = false;
      cfg.lambda_shift = parse_double(key, value);
    }
  } else if (key == "tau") {
    cfg.tau = parse_double(key, value);
  } else if (key == "tol_tail" || key == "tol") {
    cfg.tol_tail = parse_double(key, value);
  } else if (key == "max_terms") {
    const long m = parse_long(key, value);
    if (m < 2) throw std::invalid_argument("config: max_terms must be at least 2");
    cfg.max_terms = static_cast<int>(m);
  } else if (key == "u0") {
    cfg.u0_spec = value;
  } else if (key == "weight") {
    cfg.weight_spec = value;
  } else if (key == "direction") {
    cfg.direction_spec = value;
  } else if (key == "output_times" || key == "outputs") {
    cfg.output_times = parse_double_list(key, value);
  } else if (key == "probes") {
    cfg.probes = parse_double_list(key, value);
  } else if (key == "cross_check") {
    cfg.cross_check = parse_bool(key, value);
  } else if (key == "parallel") {
    cfg.parallel = parse_bool(key, value);
  } else if (key == "format" || key == "formats") {
    cfg.formats = split_list(value);
  } else if (key == "out" || key == "out_dir") {
    cfg.out_dir = value;
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string scenario_name = "custom";
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " has an empty key or value");
    if (key == "scenario") {
      if (!is_known_scenario(value))
        throw std::invalid_argument("config: unknown scenario '" + value + "'");
      scenario_name = value;
    } else {
      entries.emplace_back(key, value);
    }
  }
  ScenarioConfig cfg = scenario_defaults(scenario_name);
  for (const auto& [k, v] : entries) apply_override(cfg, k, v);
  return cfg;
}

void validate_config(const ScenarioConfig& cfg) {
  if (!is_known_scenario(cfg.name)) throw std::invalid_argument("unknown scenario: " + cfg.name);
  if (cfg.name != "custom" && cfg.space != scenario_defaults(cfg.name).space)
    throw std::invalid_argument("config: the space is fixed by the scenario");
  if (cfg.n_cells < 4) throw std::invalid_argument("config: n_cells must be at least 4");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
  if (!(cfg.tau > 0.0)) throw std::invalid_argument("config: tau must be positive");
  if (!aligned_to(cfg.tau, cfg.dt) || cfg.tau < cfg.dt)
    throw std::invalid_argument("config: tau must be a positive multiple of dt");
  if (!(cfg.tol_tail > 0.0)) throw std::invalid_argument("config: tol_tail must be positive");
  if (cfg.max_terms < 2) throw std::invalid_argument("config: max_terms must be at least 2");
  for (double t : cfg.output_times) {
    if (t < 0.0 || t > cfg.tau + 1e-12)
      throw std::invalid_argument("config: output times must lie in [0, tau]");
    if (!aligned_to(t, cfg.dt))
      throw std::invalid_argument("config: output times must be multiples of dt");
  }
  for (double p : cfg.probes)
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("config: probes must lie in [0, 1]");
  for (const auto& f : cfg.formats)
    if (f != "json" && f != "csv" && f != "svg")
      throw std::invalid_argument("config: unknown format '" + f + "'");
  if (cfg.space == SpaceTag::PeriodicSpace) {
    if (!(cfg.lambda > 0.0))
      throw std::invalid_argument("config: the periodic resolvent needs lambda > 0");
    if (!cfg.auto_shift && !(cfg.lambda_shift > 0.0))
      throw std::invalid_argument("config: the periodic series needs lambda_shift > 0");
  }
}

RunArtifacts run_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const GeneratorSpec gen = make_generator(cfg);
  const GridFunction u0 = build_u0(cfg);
  const std::vector<double> w = build_weight(cfg);
  const ExtrapolatedElement h = build_direction(cfg);
  const RankOnePerturbation B = make_rank_one(w, h);
  const double w1 = weight_l1(w);

  RunArtifacts art;
  art.name = cfg.name;
  art.probes = cfg.probes;

  JsonValue rep = JsonValue::object();
  rep.set("scenario", JsonValue::string(cfg.name));
  rep.set("space", JsonValue::string(space_name(cfg.space)));
  rep.set("config", config_echo(cfg));

  JsonValue gb = JsonValue::object();
  gb.set("kind", JsonValue::string(cfg.space == SpaceTag::ShiftSpace ? "nilpotent-left-shift"
                                                                     : "periodic-rotation"));
  if (std::isfinite(gen.spectral_bound))
    gb.set("spectral_bound", JsonValue::number(gen.spectral_bound));
  else
    gb.set("spectral_bound", JsonValue::string("-inf"));
  rep.set("generator", gb);

  JsonValue pb = JsonValue::object();
  pb.set("weight_l1", JsonValue::number(w1));
  pb.set("b_positive", JsonValue::boolean(B.positive));
  pb.set("direction_positive", JsonValue::boolean(is_positive(h)));
  pb.set("direction_has_density", JsonValue::boolean(h.has_density()));
  rep.set("perturbation", pb);

  JsonValue checks = JsonValue::object();
  bool all_ok = true;

  double lam_s = cfg.lambda_shift;
  if (cfg.auto_shift) lam_s = choose_rescaling(gen, B);

  DeschReport desch{};
  bool have_desch = false;
  if (B.positive) {
    desch = desch_condition(gen, cfg.lambda, B);
    have_desch = true;
    rep.set("desch", desch_block(desch));

    const std::vector<double> sweep = cfg.space == SpaceTag::ShiftSpace
                                          ? std::vector<double>{0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}
                                          : std::vector<double>{0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> sweep_K, sweep_spr;
    for (double lam : sweep) {
      const DeschReport d = desch_condition(gen, lam, B);
      sweep_K.push_back(d.K);
      sweep_spr.push_back(d.spr);
    }
    JsonValue sw = JsonValue::object();
    sw.set("lambda", JsonValue::number_array(sweep));
    sw.set("K", JsonValue::number_array(sweep_K));
    sw.set("spr", JsonValue::number_array(sweep_spr));
    rep.set("desch_sweep", sw);
    PlotSeries sk{"K(lambda)", {}}, ss{"spr(lambda)", {}};
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      sk.points.emplace_back(sweep[i], sweep_K[i]);
      ss.points.emplace_back(sweep[i], sweep_spr[i]);
    }
    art.desch_plot = {std::move(sk), std::move(ss)};

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < sweep.size(); ++i)
      rows.push_back({format_double(sweep[i]), format_double(sweep_K[i]),
                      format_double(sweep_spr[i])});
    art.extra_csv.emplace_back("desch_sweep", csv_table({"lambda", "K", "spr"}, rows));
  }

  EvolutionOutcome evo_out;
  if (!cfg.output_times.empty()) {
    DpConfig dcfg;
    dcfg.lambda_shift = lam_s;
    dcfg.tau = cfg.tau;
    dcfg.dt = cfg.dt;
    dcfg.tol_tail = cfg.tol_tail;
    dcfg.max_terms = cfg.max_terms;
    dcfg.cross_check = cfg.cross_check;
    dcfg.parallel = cfg.parallel;

    const double kappa = sup_norm(extrapolated_resolvent(gen, lam_s, h));
    const double K_eff = kappa * w1;

    JsonValue evo = JsonValue::object();
    evo.set("lambda_shift", JsonValue::number(lam_s));
    evo_out.ran = true;
    if (K_eff < 1.0) {
      const EvolutionResult r = dp_evolve(gen, B, dcfg, u0, cfg.output_times);
      art.times = r.times;
      art.states = r.states;
      art.term_index_max = r.terms_used - 1;
      art.tail_bound = r.tail_bound;
      evo_out.positivity_ok = r.positivity_ok;
      evo.set("mode", JsonValue::string("single"));
      evo.set("rescaled_K", JsonValue::number(r.rescaled_K));
      evo.set("terms_used", JsonValue::integer(r.terms_used));
      evo.set("term_norms", JsonValue::number_array(r.term_norms));
      evo.set("tail_bound", JsonValue::number(r.tail_bound));
      evo.set("positivity_ok", JsonValue::boolean(r.positivity_ok));
      if (cfg.cross_check)
        evo.set("cross_check_max_diff", JsonValue::number(r.cross_check_max_diff));
      std::vector<std::vector<std::string>> rows;
      for (std::size_t i = 0; i < r.term_norms.size(); ++i)
        rows.push_back({std::to_string(i), format_double(r.term_norms[i])});
      art.extra_csv.emplace_back("terms", csv_table({"term_index", "term_norm"}, rows));
    } else if (B.positive) {
      const StagedResult r = staged_evolve(gen, B, dcfg, u0, cfg.output_times);
      art.times = r.times;
      art.states = r.states;
      int mx = 1;
      for (int tn : r.terms_per_stage) mx = std::max(mx, tn);
      art.term_index_max = mx - 1;
      art.tail_bound = r.scalar_tail;
      evo_out.staged = true;
      evo_out.positivity_ok = r.positivity_ok;
      evo.set("mode", JsonValue::string("staged"));
      evo.set("n_stages", JsonValue::integer(r.schedule.n_stages));
      evo.set("whole_norm", JsonValue::number(r.schedule.whole_norm));
      std::vector<double> stage_K;
      for (const auto& st : r.schedule.stages) stage_K.push_back(st.stage_K);
      evo.set("stage_K", JsonValue::number_array(stage_K));
      JsonValue tps = JsonValue::array();
      for (int tn : r.terms_per_stage) tps.push(JsonValue::integer(tn));
      evo.set("terms_per_stage", std::move(tps));
      evo.set("scalar_tail", JsonValue::number(r.scalar_tail));
      evo.set("positivity_ok", JsonValue::boolean(r.positivity_ok));
    } else {
      throw SeriesDivergence(
          "norm condition fails at lambda_shift and splitting needs a positive perturbation");
    }

    evo.set("times", JsonValue::number_array(art.times));
    double min_v = 0.0, max_s = 0.0;
    bool first = true;
    JsonValue pv = JsonValue::array();
    for (std::size_t k = 0; k < art.states.size(); ++k) {
      const double mv = grid::min_value(art.states[k].values());
      min_v = first ? mv : std::min(min_v, mv);
      first = false;
      max_s = std::max(max_s, sup_norm(art.states[k]));
      std::vector<double> vals;
      for (double p : cfg.probes) vals.push_back(interp_eval(art.states[k], p));
      pv.push(JsonValue::number_array(vals));
    }
    evo.set("min_state_value", JsonValue::number(min_v));
    evo.set("max_state_sup", JsonValue::number(max_s));
    evo.set("probe_values", std::move(pv));
    evo_out.max_state_sup = max_s;
    rep.set("evolution", evo);
    art.state_plot = states_plot(art.times, art.states);
  }

  // ---- scenario-specific sections ----------------------------------------
  if (cfg.name == "example-5-1") {
    if (!h.has_density())
      throw std::invalid_argument("example-5-1: the mass oracle needs a density direction");
    const VolterraSolution sol = volterra_mass(u0, h.density(), cfg.tau, 1e-4);
    std::vector<double> mass_at, errs;
    double max_err = 0.0;
    for (std::size_t k = 0; k < art.times.size(); ++k) {
      const double t = art.times[k];
      const auto idx = static_cast<std::size_t>(std::floor(t / sol.dt + 0.5));
      mass_at.push_back(sol.mass[idx]);
      const GridFunction ref = characteristics_solution(u0, h.density(), sol, t);
      errs.push_back(sup_distance(art.states[k], ref));
      max_err = std::max(max_err, errs.back());
    }
    JsonValue ob = JsonValue::object();
    ob.set("volterra_dt", JsonValue::number(sol.dt));
    ob.set("mass_at_outputs", JsonValue::number_array(mass_at));
    ob.set("dp_vs_characteristics_sup", JsonValue::number_array(errs));
    ob.set("max_error", JsonValue::number(max_err));
    rep.set("oracle", ob);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < errs.size(); ++k)
      rows.push_back({format_double(art.times[k]), format_double(errs[k])});
    art.extra_csv.emplace_back("oracle_errors", csv_table({"time", "oracle_error"}, rows));

    add_check(checks, all_ok, "desch_holds_at_lambda", have_desch && desch.norm_condition_met);
    add_check(checks, all_ok, "series_positive", evo_out.positivity_ok);
    add_check(checks, all_ok, "oracle_max_error_ok", max_err <= 1e-3);
  } else if (cfg.name == "periodic-5-2") {
    const double t1_err = sup_distance(apply_semigroup(gen, 1.0, u0), u0);
    const GridFunction ones = sample_periodic(cfg.n_cells, [](double) { return 1.0; });
    const double r1_err = sup_distance(resolvent(gen, 1.0, ones), ones);
    const Monotonicity probe = periodic_sign_probe(cfg.n_cells);
    const bool sign_agrees =
        probe == periodic_positive_direction &&
        is_positive(ExtrapolatedElement::from_density(SpaceTag::PeriodicSpace,
                                                      std::vector<double>(cfg.n_cells + 1, 1.0)));
    JsonValue pc = JsonValue::object();
    pc.set("t1_identity_error", JsonValue::number(t1_err));
    pc.set("r1_constant_error", JsonValue::number(r1_err));
    pc.set("sign_direction",
           JsonValue::string(periodic_positive_direction == Monotonicity::NonIncreasing
                                 ? "non-increasing"
                                 : "non-decreasing"));
    pc.set("sign_oracle_agrees", JsonValue::boolean(sign_agrees));
    rep.set("periodic_checks", pc);

    add_check(checks, all_ok, "t1_identity_exact", t1_err <= 1e-12);
    add_check(checks, all_ok, "resolvent_constant_exact", r1_err <= 1e-12);
    add_check(checks, all_ok, "sign_oracle_agrees", sign_agrees);
    add_check(checks, all_ok, "series_positive", evo_out.positivity_ok);
  } else if (cfg.name == "counterexample-5-3") {
    const GridFunction tent = sample_tent_negative(cfg.n_cells);
    const GridFunction neg_tent = scaled(tent, -1.0);
    const double err_anti =
        sup_distance(extrapolated_resolvent(gen, 0.0, h), neg_tent);
    const ExtrapolatedElement h_dens = ExtrapolatedElement::from_density(
        SpaceTag::ShiftSpace, sample_step_updown(cfg.n_cells));
    const double err_dens = sup_distance(extrapolated_resolvent(gen, 0.0, h_dens), neg_tent);

    std::mt19937_64 rng(20260823ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n_basis = 20;
    bool rb_positive = true;
    for (int b = 0; b < n_basis; ++b) {
      std::vector<double> v(cfg.n_cells + 1);
      for (auto& x : v) x = unif(rng);
      v.back() = 0.0;
      const GridFunction f(SpaceTag::ShiftSpace, std::move(v));
      const GridFunction rb = resolvent_RB(gen, 0.0, B, f);
      rb_positive = rb_positive && is_nonnegative(rb, positivity_tolerance(rb));
    }

    const double kappa0 = sup_norm(extrapolated_resolvent(gen, 0.0, h));
    const double spr0 = [&] {
      const GridFunction r0 = extrapolated_resolvent(gen, 0.0, h);
      std::vector<double> prod(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) prod[i] = w[i] * r0[i];
      return grid::trapezoid(prod);
    }();

    JsonValue cb = JsonValue::object();
    cb.set("is_positive_h", JsonValue::boolean(is_positive(h)));
    cb.set("rb_positive_on_basis", JsonValue::boolean(rb_positive));
    cb.set("n_basis", JsonValue::integer(n_basis));
    cb.set("resolvent_error_antiderivative", JsonValue::number(err_anti));
    cb.set("resolvent_error_density", JsonValue::number(err_dens));
    cb.set("K_at_zero", JsonValue::number(kappa0 * w1));
    cb.set("spr_at_zero", JsonValue::number(spr0));
    rep.set("counterexample", cb);

    const double tol_res = 2.0 / static_cast<double>(cfg.n_cells);
    add_check(checks, all_ok, "h_not_positive", !is_positive(h));
    add_check(checks, all_ok, "rb_positive_on_basis", rb_positive);
    add_check(checks, all_ok, "resolvent_matches_negative_tent",
              err_anti <= tol_res && err_dens <= tol_res);
  } else if (cfg.name == "split-demo") {
    const SplitSchedule sch = split_schedule(gen, lam_s, B);
    const double lam_single = choose_rescaling(gen, B);
    DpConfig scfg;
    scfg.lambda_shift = lam_single;
    scfg.tau = cfg.tau;
    scfg.dt = cfg.dt;
    scfg.tol_tail = cfg.tol_tail;
    scfg.max_terms = cfg.max_terms;
    scfg.parallel = cfg.parallel;
    const EvolutionResult single = dp_evolve(gen, B, scfg, u0, cfg.output_times);
    std::vector<double> diffs;
    double max_diff = 0.0;
    for (std::size_t k = 0; k < art.states.size(); ++k) {
      diffs.push_back(sup_distance(art.states[k], single.states[k]));
      max_diff = std::max(max_diff, diffs.back());
    }
    JsonValue sp = JsonValue::object();
    sp.set("schedule_lambda", JsonValue::number(lam_s));
    sp.set("n_stages", JsonValue::integer(sch.n_stages));
    sp.set("whole_norm", JsonValue::number(sch.whole_norm));
    std::vector<double> stage_K;
    for (const auto& st : sch.stages) stage_K.push_back(st.stage_K);
    sp.set("stage_K", JsonValue::number_array(stage_K));
    sp.set("single_lambda_shift", JsonValue::number(lam_single));
    sp.set("staged_vs_single_sup", JsonValue::number_array(diffs));
    sp.set("max_diff", JsonValue::number(max_diff));
    rep.set("split", sp);

    bool stages_ok = sch.n_stages >= 1;
    for (const auto& st : sch.stages) stages_ok = stages_ok && st.stage_K < 1.0;
    add_check(checks, all_ok, "norm_condition_fails", have_desch && !desch.norm_condition_met);
    add_check(checks, all_ok, "spr_condition_holds", have_desch && desch.spr_condition_met);
    add_check(checks, all_ok, "stage_norms_below_one", stages_ok);
    add_check(checks, all_ok, "staged_matches_single", max_diff <= 1e-3);
    add_check(checks, all_ok, "series_positive", evo_out.positivity_ok);
  } else {  // custom
    add_check(checks, all_ok, "completed", true);
    if (evo_out.ran && B.positive)
      add_check(checks, all_ok, "series_positive", evo_out.positivity_ok);
  }

  rep.set("checks", checks);
  rep.set("ok", JsonValue::boolean(all_ok));
  art.report = std::move(rep);
  return art;
}

std::vector<std::string> emit_artifacts(const RunArtifacts& art, const ScenarioConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const std::string base = (fs::path(cfg.out_dir) / art.name).string();
  const auto wants = [&cfg](const char* f) {
    return std::find(cfg.formats.begin(), cfg.formats.end(), f) != cfg.formats.end();
  };
  std::vector<std::string> written;
  if (wants("json")) {
    const std::string path = base + "_report.json";
    write_text_file(path, art.report.dump());
    written.push_back(path);
  }
  if (wants("csv")) {
    if (!art.times.empty()) {
      const std::string path = base + "_evolution.csv";
      write_text_file(path, evolution_csv(art.times, art.states, art.probes, art.term_index_max,
                                          art.tail_bound));
      written.push_back(path);
    }
    for (const auto& [suffix, content] : art.extra_csv) {
      const std::string path = base + "_" + suffix + ".csv";
      write_text_file(path, content);
      written.push_back(path);
    }
  }
  if (wants("svg")) {
    if (!art.state_plot.empty()) {
      const std::string path = base + "_states.svg";
      write_text_file(path, polyline_svg(art.name + ": states", art.state_plot));
      written.push_back(path);
    }
    if (!art.desch_plot.empty()) {
      const std::string path = base + "_desch.svg";
      write_text_file(path, polyline_svg(art.name + ": generation condition", art.desch_plot));
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace sglab
