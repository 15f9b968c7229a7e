// Command-line surface over the bnet library: score a structure, learn one,
// sample data from a network, and run structure-recovery experiments.
//
// Exit codes: 0 success, 2 malformed input, 3 dimension mismatch between
// inputs, 4 problem size above a method limit, 1 anything else.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bnet/bnet.hpp"
#include "bnet/json_io.hpp"

namespace {

using namespace bnet;

// All commands build their entire output in memory and write it in one shot
// (via a temp file + rename for paths), so a failure never leaves a partial
// output file behind.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write to '" + tmp.string() + "'");
    out << content;
  }
  std::filesystem::rename(tmp, target);
}

void check_same_variables(const std::vector<Variable>& data_vars,
                          const std::vector<Variable>& other_vars,
                          const std::string& what) {
  if (data_vars.size() != other_vars.size())
    throw DimensionError(what + " has " + std::to_string(other_vars.size()) +
                         " variables, dataset has " +
                         std::to_string(data_vars.size()));
  for (std::size_t i = 0; i < data_vars.size(); ++i) {
    if (data_vars[i].name != other_vars[i].name)
      throw DimensionError(what + ": variable " + std::to_string(i) + " is '" +
                           other_vars[i].name + "', dataset has '" +
                           data_vars[i].name + "'");
    if (data_vars[i].cardinality != other_vars[i].cardinality)
      throw DimensionError(what + ": variable '" + other_vars[i].name +
                           "' has cardinality " +
                           std::to_string(other_vars[i].cardinality) +
                           ", dataset has " +
                           std::to_string(data_vars[i].cardinality));
  }
}

struct SchemeFlags {
  std::string scheme = "bdeu";
  double ess = 1.0;
  bool ess_given = false;
  std::string net_path;  // hypothetical net for bde
};

HyperScheme make_scheme(const SchemeFlags& f,
                        const std::vector<Variable>* data_vars) {
  if (f.scheme == "bdeu") return BDeuScheme{f.ess};
  if (f.scheme == "k2") return K2Scheme{};
  if (f.scheme == "data-ratio")
    return DataRatioScheme{f.ess_given ? f.ess : 1.0 / 3.0};
  if (f.scheme == "bde") {
    if (f.net_path.empty())
      throw ParseError("the bde scheme needs --net with the hypothetical network");
    BayesNet net = bayes_net_from_json(load_json_file(f.net_path));
    if (data_vars)
      check_same_variables(*data_vars, net.variables(), "hypothetical net");
    return BDeScheme{f.ess, std::move(net)};
  }
  throw ParseError("unknown scheme '" + f.scheme +
                   "'; expected bdeu, bde, k2 or data-ratio");
}

void warn_ignored_ess(ScoreKind kind, const SchemeFlags& f) {
  if (!kind_uses_scheme(kind) && kind != ScoreKind::bdeu_asymptotic && f.ess_given)
    std::cerr << "warning: --kind " << to_string(kind) << " ignores --ess\n";
}

BayesNet load_generator(const std::string& net_path, const std::string& preset_name) {
  if (!preset_name.empty() && !net_path.empty())
    throw ParseError("give either --net or --preset, not both");
  if (!preset_name.empty()) return preset(preset_name);
  if (!net_path.empty()) return bayes_net_from_json(load_json_file(net_path));
  throw ParseError("need --net or --preset");
}

std::vector<double> parse_alpha_range(const std::string& spec) {
  const std::size_t dots = spec.find("..");
  if (dots == std::string::npos)
    throw ParseError("--alpha-star expects lo..hi, got '" + spec + "'");
  long lo = 0, hi = 0;
  try {
    lo = std::stol(spec.substr(0, dots));
    hi = std::stol(spec.substr(dots + 2));
  } catch (const std::exception&) {
    throw ParseError("--alpha-star expects integer bounds, got '" + spec + "'");
  }
  if (lo < 1 || hi < lo)
    throw ParseError("--alpha-star needs 1 <= lo <= hi, got '" + spec + "'");
  std::vector<double> out;
  for (long a = lo; a <= hi; ++a) out.push_back(static_cast<double>(a));
  return out;
}

// options shared by experiment and sweep
struct ExperimentFlags {
  std::string net_path, preset_name;
  std::string kind = "exact-ml";
  SchemeFlags scheme;
  std::vector<double> ess_list;
  int trials = 100;
  std::vector<std::int64_t> sizes{100, 500, 1000, 5000, 10000};
  std::uint64_t seed = 0;
  std::string method = "auto";
  int max_parents = -1;
  std::string arc_compare = "directed";
  std::string alpha_star_range;
  std::string format = "csv";
  std::string out;
};

TrialConfig make_trial_config(const ExperimentFlags& f) {
  BayesNet net = load_generator(f.net_path, f.preset_name);
  TrialConfig cfg{std::move(net)};
  cfg.sizes = f.sizes;
  cfg.trials = f.trials;
  cfg.kind = parse_score_kind(f.kind);
  SchemeFlags sf = f.scheme;
  if (sf.scheme == "bde" && sf.net_path.empty()) {
    // For experiments the generating net doubles as the bde prior.
    cfg.scheme = BDeScheme{sf.ess, cfg.net};
  } else {
    cfg.scheme = make_scheme(sf, nullptr);
  }
  cfg.base_seed = f.seed;
  cfg.compare = parse_arc_compare(f.arc_compare);
  cfg.method = parse_search_method(f.method);
  cfg.max_parents = f.max_parents;
  warn_ignored_ess(cfg.kind, sf);
  validate_kind_scheme(cfg.kind, cfg.scheme);
  return cfg;
}

std::string render_table(const ExperimentFlags& f, const TrialConfig& cfg,
                         const std::vector<SweepRow>& rows,
                         const std::vector<AlphaStarRow>* alpha) {
  const std::string label = score_label(cfg.kind, cfg.scheme);
  const bool ess_meaningful =
      kind_uses_scheme(cfg.kind) || cfg.kind == ScoreKind::bdeu_asymptotic;
  if (f.format == "json")
    return cells_to_json(label, rows, ess_meaningful, alpha).dump(2) + "\n";
  if (f.format != "csv")
    throw ParseError("unknown format '" + f.format + "'; expected csv or json");
  std::ostringstream os;
  write_cells_csv(os, label, rows, ess_meaningful, alpha);
  return os.str();
}

int cmd_score(const std::string& data_path, const std::string& structure_path,
              const std::string& kind_name, const SchemeFlags& scheme_flags,
              const std::string& out) {
  const CategoricalDataset data = CategoricalDataset::from_csv_file(data_path);
  const Structure st = structure_from_json(load_json_file(structure_path));
  check_same_variables(data.variables(), st.variables, "structure");
  const ScoreKind kind = parse_score_kind(kind_name);
  warn_ignored_ess(kind, scheme_flags);
  const HyperScheme scheme = make_scheme(scheme_flags, &data.variables());
  const ScoreReport rep = score(data, st.dag, kind, scheme);
  write_output(out, score_report_to_json(rep).dump(2) + "\n");
  return 0;
}

int cmd_learn(const std::string& data_path, const std::string& kind_name,
              const SchemeFlags& scheme_flags, const std::string& method_name,
              int max_parents, const std::string& out) {
  const CategoricalDataset data = CategoricalDataset::from_csv_file(data_path);
  const ScoreKind kind = parse_score_kind(kind_name);
  warn_ignored_ess(kind, scheme_flags);
  const HyperScheme scheme = make_scheme(scheme_flags, &data.variables());
  SearchMethod method = parse_search_method(method_name);
  if (method == SearchMethod::automatic)
    method = data.num_vars() <= kMaxExhaustiveVars ? SearchMethod::exhaustive
                                                   : SearchMethod::dp;
  SearchResult res =
      method == SearchMethod::exhaustive
          ? exhaustive_best(data, kind, scheme)
          : exact_dp_best(data, kind, scheme, max_parents);
  json j = structure_to_json(data.variables(), res.dag);
  j["score_bits"] = res.score_bits;
  j["kind"] = to_string(kind);
  if (kind_uses_scheme(kind) || kind == ScoreKind::bdeu_asymptotic) {
    j["scheme"] = scheme_name(scheme);
    if (auto p = scheme_parameter(scheme)) j["ess"] = *p;
  }
  j["method"] = to_string(method);
  j["candidates_examined"] = res.candidates_examined;
  j["ties_at_optimum"] = res.ties_at_optimum;
  write_output(out, j.dump(2) + "\n");
  return 0;
}

int cmd_sample(const std::string& net_path, const std::string& preset_name,
               std::int64_t n, std::uint64_t seed, const std::string& out) {
  const BayesNet net = load_generator(net_path, preset_name);
  const CategoricalDataset data = forward_sample(net, n, seed);
  std::ostringstream os;
  data.to_csv(os);
  write_output(out, os.str());
  return 0;
}

int cmd_experiment(const ExperimentFlags& f) {
  const TrialConfig cfg = make_trial_config(f);
  std::vector<SweepRow> rows;
  const std::optional<double> p = scheme_parameter(cfg.scheme);
  for (std::int64_t n : cfg.sizes)
    rows.push_back(SweepRow{p.value_or(0.0), run_cell(cfg, n)});
  std::optional<std::vector<AlphaStarRow>> alpha;
  if (!f.alpha_star_range.empty())
    alpha = alpha_star(cfg, parse_alpha_range(f.alpha_star_range));
  write_output(f.out, render_table(f, cfg, rows, alpha ? &*alpha : nullptr));
  return 0;
}

int cmd_sweep(const ExperimentFlags& f) {
  const TrialConfig cfg = make_trial_config(f);
  std::vector<double> ess_values = f.ess_list;
  if (ess_values.empty())
    ess_values = {1e-6, 0.01, 0.1, 1.0, 10.0, 100.0, 1e6};
  const std::vector<SweepRow> rows = ess_sweep(cfg, ess_values);
  std::optional<std::vector<AlphaStarRow>> alpha;
  if (!f.alpha_star_range.empty())
    alpha = alpha_star(cfg, parse_alpha_range(f.alpha_star_range));
  write_output(f.out, render_table(f, cfg, rows, alpha ? &*alpha : nullptr));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian-network structure scores, exact search and experiments"};
  app.require_subcommand(1);

  // score
  auto* sc = app.add_subcommand("score", "Score a structure against a dataset");
  std::string sc_data, sc_structure, sc_kind = "exact-ml", sc_out;
  SchemeFlags sc_scheme;
  sc->add_option("--data", sc_data, "dataset CSV")->required();
  sc->add_option("--structure", sc_structure, "structure JSON")->required();
  sc->add_option("--kind", sc_kind,
                 "exact-ml | asymptotic-ml | bdeu-asymptotic | aic | bic");
  sc->add_option("--scheme", sc_scheme.scheme, "bdeu | bde | k2 | data-ratio");
  auto* sc_ess = sc->add_option("--ess", sc_scheme.ess,
                                "scheme parameter (alpha, or c for data-ratio)");
  sc->add_option("--net", sc_scheme.net_path, "hypothetical net JSON for bde");
  sc->add_option("--out", sc_out, "output path (default stdout)");

  // learn
  auto* ln = app.add_subcommand("learn", "Find the best-scoring structure");
  std::string ln_data, ln_kind = "exact-ml", ln_method = "auto", ln_out;
  SchemeFlags ln_scheme;
  int ln_max_parents = -1;
  ln->add_option("--data", ln_data, "dataset CSV")->required();
  ln->add_option("--kind", ln_kind,
                 "exact-ml | asymptotic-ml | bdeu-asymptotic | aic | bic");
  ln->add_option("--scheme", ln_scheme.scheme, "bdeu | bde | k2 | data-ratio");
  auto* ln_ess = ln->add_option("--ess", ln_scheme.ess, "scheme parameter");
  ln->add_option("--net", ln_scheme.net_path, "hypothetical net JSON for bde");
  ln->add_option("--method", ln_method, "exhaustive | dp | auto");
  ln->add_option("--max-parents", ln_max_parents,
                 "cap on parent-set size for dp (-1 = none)");
  ln->add_option("--out", ln_out, "output path (default stdout)");

  // sample
  auto* sm = app.add_subcommand("sample", "Draw records from a network");
  std::string sm_net, sm_preset, sm_out;
  std::int64_t sm_n = 0;
  std::uint64_t sm_seed = 0;
  sm->add_option("--net", sm_net, "network JSON with CPTs");
  sm->add_option("--preset", sm_preset,
                 "structure1-skewed | structure2-nonskewed");
  sm->add_option("-n,--num-records", sm_n, "number of records")->required();
  sm->add_option("--seed", sm_seed, "generator seed");
  sm->add_option("--out", sm_out, "output path (default stdout)");

  // experiment / sweep share flags
  ExperimentFlags ex, sw;
  auto add_experiment_flags = [](CLI::App* cmd, ExperimentFlags& f,
                                 bool ess_is_list) {
    cmd->add_option("--net", f.net_path, "generating network JSON");
    cmd->add_option("--preset", f.preset_name,
                    "structure1-skewed | structure2-nonskewed");
    cmd->add_option("--kind", f.kind,
                    "exact-ml | asymptotic-ml | bdeu-asymptotic | aic | bic");
    cmd->add_option("--scheme", f.scheme.scheme, "bdeu | bde | k2 | data-ratio");
    CLI::Option* essopt = nullptr;
    if (ess_is_list)
      essopt = cmd->add_option("--ess", f.ess_list,
                               "ESS values to sweep (default the 1e-6..1e6 grid)")
                   ->delimiter(',');
    else
      essopt = cmd->add_option("--ess", f.scheme.ess, "scheme parameter");
    cmd->add_option("--trials", f.trials, "trials per cell")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--sizes", f.sizes, "sample sizes")->delimiter(',');
    cmd->add_option("--seed", f.seed, "base seed");
    cmd->add_option("--method", f.method, "exhaustive | dp | auto");
    cmd->add_option("--max-parents", f.max_parents, "parent cap for dp");
    cmd->add_option("--arc-compare", f.arc_compare, "directed | cpdag");
    cmd->add_option("--alpha-star", f.alpha_star_range,
                    "append the best alpha per n over an integer grid lo..hi");
    cmd->add_option("--format", f.format, "csv | json");
    cmd->add_option("--out", f.out, "output path (default stdout)");
    return essopt;
  };
  auto* exp = app.add_subcommand(
      "experiment", "Repeated sample/learn/compare over the sample sizes");
  auto* ex_ess = add_experiment_flags(exp, ex, false);
  auto* swp = app.add_subcommand(
      "sweep", "The experiment grid across a list of ESS values");
  add_experiment_flags(swp, sw, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sc) {
      sc_scheme.ess_given = sc_ess->count() > 0;
      return cmd_score(sc_data, sc_structure, sc_kind, sc_scheme, sc_out);
    }
    if (*ln) {
      ln_scheme.ess_given = ln_ess->count() > 0;
      return cmd_learn(ln_data, ln_kind, ln_scheme, ln_method, ln_max_parents,
                       ln_out);
    }
    if (*sm) return cmd_sample(sm_net, sm_preset, sm_n, sm_seed, sm_out);
    if (*exp) {
      ex.scheme.ess_given = ex_ess->count() > 0;
      return cmd_experiment(ex);
    }
    if (*swp) return cmd_sweep(sw);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    // bad flag values and kind/scheme combinations are usage errors
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const LimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
