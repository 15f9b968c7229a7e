#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "bnet/bayes_net.hpp"
#include "bnet/equivalence.hpp"
#include "bnet/errors.hpp"
#include "bnet/hyper.hpp"
#include "bnet/scores.hpp"
#include "bnet/search.hpp"

namespace bnet {

/// Directed mode counts arc-set differences, so a reversed arc is one extra
/// plus one missing. CPDAG mode compares skeletons and calls a match equality
/// of the Markov equivalence classes.
enum class ArcCompareMode { directed, cpdag };

inline std::string to_string(ArcCompareMode m) {
  return m == ArcCompareMode::directed ? "directed" : "cpdag";
}

inline ArcCompareMode parse_arc_compare(const std::string& s) {
  if (s == "directed") return ArcCompareMode::directed;
  if (s == "cpdag") return ArcCompareMode::cpdag;
  throw ParseError("unknown arc comparison mode '" + s + "'");
}

struct ArcDiff {
  int extra = 0;
  int missing = 0;
  bool exact_match = false;
};

inline ArcDiff arc_diff(const Dag& truth, const Dag& learned,
                        ArcCompareMode mode = ArcCompareMode::directed) {
  if (truth.num_vars() != learned.num_vars())
    throw DimensionError("structures compare over different variable sets");
  ArcDiff d;
  if (mode == ArcCompareMode::directed) {
    for (const auto& [p, c] : learned.arcs())
      if (!truth.has_arc(p, c)) ++d.extra;
    for (const auto& [p, c] : truth.arcs())
      if (!learned.has_arc(p, c)) ++d.missing;
    d.exact_match = (d.extra == 0 && d.missing == 0);
  } else {
    const EquivalenceClass et = equivalence_class(truth);
    const EquivalenceClass el = equivalence_class(learned);
    for (const auto& e : el.skeleton)
      if (!std::binary_search(et.skeleton.begin(), et.skeleton.end(), e)) ++d.extra;
    for (const auto& e : et.skeleton)
      if (!std::binary_search(el.skeleton.begin(), el.skeleton.end(), e)) ++d.missing;
    d.exact_match = (et == el);
  }
  return d;
}

enum class SearchMethod { automatic, exhaustive, dp };

inline std::string to_string(SearchMethod m) {
  switch (m) {
    case SearchMethod::automatic: return "auto";
    case SearchMethod::exhaustive: return "exhaustive";
    case SearchMethod::dp: return "dp";
  }
  return "?";
}

inline SearchMethod parse_search_method(const std::string& s) {
  if (s == "auto") return SearchMethod::automatic;
  if (s == "exhaustive") return SearchMethod::exhaustive;
  if (s == "dp") return SearchMethod::dp;
  throw ParseError("unknown search method '" + s + "'");
}

/// One repeated sample/learn/compare protocol: which net generates, how many
/// records per cell, how many trials, which score drives the search.
struct TrialConfig {
  BayesNet net;
  std::vector<std::int64_t> sizes{100, 500, 1000, 5000, 10000};
  int trials = 100;
  ScoreKind kind = ScoreKind::exact_ml;
  HyperScheme scheme = BDeuScheme{1.0};
  std::uint64_t base_seed = 0;
  ArcCompareMode compare = ArcCompareMode::directed;
  SearchMethod method = SearchMethod::automatic;
  int max_parents = -1;
};

/// Aggregates over the trials of one (configuration, sample size) cell:
/// correct = exact recoveries, extra/missing = summed arc differences.
struct CellResult {
  std::int64_t sample_size = 0;
  int correct = 0;
  std::int64_t extra = 0;
  std::int64_t missing = 0;
  int trials = 0;
};

struct SweepRow {
  double ess = 0.0;
  CellResult cell;
};

struct AlphaStarRow {
  std::int64_t sample_size = 0;
  double alpha = 0.0;
  CellResult cell;
};

namespace detail {

// Decorrelates cells: trials shift the seed by 1, sample sizes by a large
// prime, so no two (size, trial) pairs share a generator stream. Independent
// of the scheme, so a sweep scores identical datasets at every ESS value.
inline constexpr std::uint64_t kSizeSeedPrime = 2654435761ULL;

inline std::uint64_t trial_seed(std::uint64_t base, std::size_t size_index,
                                int trial) {
  return base + static_cast<std::uint64_t>(trial) +
         kSizeSeedPrime * static_cast<std::uint64_t>(size_index);
}

inline void validate_config(const TrialConfig& config) {
  if (config.trials < 1)
    throw std::invalid_argument("need at least one trial per cell");
  for (std::int64_t s : config.sizes)
    if (s < 1) throw std::invalid_argument("sample sizes must be positive");
}

inline std::size_t size_index_of(const TrialConfig& config, std::int64_t n) {
  const auto it = std::find(config.sizes.begin(), config.sizes.end(), n);
  return it == config.sizes.end()
             ? 0
             : static_cast<std::size_t>(it - config.sizes.begin());
}

inline Dag learn_one(const CategoricalDataset& data, const TrialConfig& config,
                     const HyperScheme& scheme, CountCache* counts) {
  SearchMethod m = config.method;
  if (m == SearchMethod::automatic)
    m = data.num_vars() <= kMaxExhaustiveVars ? SearchMethod::exhaustive
                                              : SearchMethod::dp;
  const FamilyScoreCache cache(data, config.kind, scheme, config.max_parents,
                               counts);
  return (m == SearchMethod::exhaustive ? exhaustive_best(cache)
                                        : exact_dp_best(cache))
      .dag;
}

// Shared core: every scheme in `schemes` is run against the same per-trial
// datasets, counting each dataset's family tables once.
inline std::vector<CellResult> run_cell_multi(const TrialConfig& config,
                                              std::int64_t n,
                                              const std::vector<HyperScheme>& schemes) {
  validate_config(config);
  const std::size_t size_idx = size_index_of(config, n);
  std::vector<CellResult> out(schemes.size());
  for (CellResult& c : out) {
    c.sample_size = n;
    c.trials = config.trials;
  }
  for (int t = 0; t < config.trials; ++t) {
    const CategoricalDataset data = forward_sample(
        config.net, n, trial_seed(config.base_seed, size_idx, t));
    CountCache counts(data);
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      const Dag learned = learn_one(data, config, schemes[s], &counts);
      const ArcDiff d = arc_diff(config.net.dag(), learned, config.compare);
      out[s].correct += d.exact_match ? 1 : 0;
      out[s].extra += d.extra;
      out[s].missing += d.missing;
    }
  }
  return out;
}

inline HyperScheme with_ess(const HyperScheme& scheme, double ess) {
  if (std::holds_alternative<BDeuScheme>(scheme)) return BDeuScheme{ess};
  if (const auto* b = std::get_if<BDeScheme>(&scheme))
    return BDeScheme{ess, b->hypothetical};
  throw std::invalid_argument("an ESS sweep needs the bdeu or bde scheme");
}

}  // namespace detail

/// Runs config.trials independent sample -> learn -> compare rounds at sample
/// size n and aggregates the recovery counts. Deterministic in the base seed.
inline CellResult run_cell(const TrialConfig& config, std::int64_t n) {
  return detail::run_cell_multi(config, n, {config.scheme})[0];
}

/// The full (ess, sample size) grid, ess-major. All ESS values see identical
/// per-trial datasets.
inline std::vector<SweepRow> ess_sweep(const TrialConfig& config,
                                       const std::vector<double>& ess_values) {
  detail::validate_config(config);
  std::vector<HyperScheme> schemes;
  schemes.reserve(ess_values.size());
  for (double e : ess_values) {
    if (!(e > 0.0)) throw std::invalid_argument("ESS values must be positive");
    schemes.push_back(detail::with_ess(config.scheme, e));
  }
  std::vector<SweepRow> grid(ess_values.size() * config.sizes.size());
  for (std::size_t ni = 0; ni < config.sizes.size(); ++ni) {
    const std::vector<CellResult> cells =
        detail::run_cell_multi(config, config.sizes[ni], schemes);
    for (std::size_t ei = 0; ei < ess_values.size(); ++ei)
      grid[ei * config.sizes.size() + ni] = SweepRow{ess_values[ei], cells[ei]};
  }
  return grid;
}

/// Best ESS per sample size over the candidate list: most exact recoveries,
/// ties to the larger extra-arc total, remaining ties to the smaller alpha.
inline std::vector<AlphaStarRow> alpha_star(const TrialConfig& config,
                                            const std::vector<double>& candidates) {
  if (candidates.empty())
    throw std::invalid_argument("alpha-star needs at least one candidate");
  const std::vector<SweepRow> grid = ess_sweep(config, candidates);
  std::vector<AlphaStarRow> out;
  const std::size_t ns = config.sizes.size();
  for (std::size_t ni = 0; ni < ns; ++ni) {
    const SweepRow* best = nullptr;
    for (std::size_t ei = 0; ei < candidates.size(); ++ei) {
      const SweepRow& row = grid[ei * ns + ni];
      if (!best) { best = &row; continue; }
      if (row.cell.correct != best->cell.correct) {
        if (row.cell.correct > best->cell.correct) best = &row;
      } else if (row.cell.extra != best->cell.extra) {
        if (row.cell.extra > best->cell.extra) best = &row;
      } else if (row.ess < best->ess) {
        best = &row;
      }
    }
    out.push_back(AlphaStarRow{config.sizes[ni], best->ess, best->cell});
  }
  return out;
}

/// Fixed-order CSV emission: scheme,ess,n,correct,extra,missing,trials. The
/// scheme column carries the score label (scheme name when the kind takes
/// one, otherwise the kind); the ess column stays empty for parameter-free
/// scores. When alpha-star values are supplied they appear as one trailing
/// column keyed by sample size.
inline void write_cells_csv(std::ostream& out, const std::string& label,
                            const std::vector<SweepRow>& rows,
                            bool ess_meaningful,
                            const std::vector<AlphaStarRow>* alpha = nullptr) {
  out << "scheme,ess,n,correct,extra,missing,trials";
  if (alpha) out << ",alpha_star";
  out << '\n';
  for (const SweepRow& r : rows) {
    out << label << ',';
    if (ess_meaningful) out << r.ess;
    out << ',' << r.cell.sample_size << ',' << r.cell.correct << ','
        << r.cell.extra << ',' << r.cell.missing << ',' << r.cell.trials;
    if (alpha) {
      out << ',';
      for (const AlphaStarRow& a : *alpha)
        if (a.sample_size == r.cell.sample_size) { out << a.alpha; break; }
    }
    out << '\n';
  }
}

inline std::string score_label(ScoreKind kind, const HyperScheme& scheme) {
  return kind_uses_scheme(kind) ? scheme_name(scheme) : to_string(kind);
}

}  // namespace bnet
