#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bnet/dag.hpp"
#include "bnet/data.hpp"
#include "bnet/errors.hpp"
#include "bnet/scores.hpp"
#include "bnet/stats.hpp"

namespace bnet {

/// Scores closer than this (in bits) are treated as tied and resolved by the
/// deterministic rule: fewer arcs first, then the lexicographically smallest
/// tuple of per-variable parent bitmasks. Markov-equivalent structures score
/// equal only up to floating-point rounding, so exact comparison would make
/// the winner platform-dependent.
inline constexpr double kScoreTieBits = 1e-9;
inline constexpr double kScoreTieNats = kScoreTieBits * kLn2;

inline constexpr int kMaxExhaustiveVars = 5;
inline constexpr int kMaxDpVars = 20;

namespace detail {

inline bool masks_acyclic(const std::vector<std::uint32_t>& masks) {
  const int n = static_cast<int>(masks.size());
  std::uint32_t remaining = (n == 32) ? ~0u : ((1u << n) - 1);
  while (remaining) {
    std::uint32_t removed = 0;
    for (int i = 0; i < n; ++i)
      if ((remaining >> i & 1u) && (masks[i] & remaining) == 0) removed |= 1u << i;
    if (!removed) return false;
    remaining &= ~removed;
  }
  return true;
}

inline std::vector<int> mask_to_parents(std::uint32_t mask) {
  std::vector<int> ps;
  while (mask) {
    const int b = std::countr_zero(mask);
    ps.push_back(b);
    mask &= mask - 1;
  }
  return ps;
}

// Drop bit `var` from a mask over all variables, giving an index over the
// remaining N-1 variables (and back).
inline std::uint32_t squeeze_mask(std::uint32_t mask, int var) {
  const std::uint32_t low = (1u << var) - 1;
  return (mask & low) | ((mask >> (var + 1)) << var);
}
inline std::uint32_t unsqueeze_mask(std::uint32_t packed, int var) {
  const std::uint32_t low = (1u << var) - 1;
  return (packed & low) | ((packed & ~low) << 1);
}

}  // namespace detail

/// Visits every labeled DAG on n nodes exactly once, as a vector of parent
/// bitmasks. Enumerates all 2^(n(n-1)) directed graphs and keeps the acyclic
/// ones, which is why the exhaustive limit sits at n = 5.
template <class F>
void for_each_dag(int n, F&& fn) {
  if (n < 1) throw LimitError("need at least one variable");
  if (n > kMaxExhaustiveVars)
    throw LimitError("exhaustive enumeration is limited to " +
                     std::to_string(kMaxExhaustiveVars) + " variables, got " +
                     std::to_string(n));
  std::vector<std::pair<int, int>> pairs;  // (parent, child)
  for (int p = 0; p < n; ++p)
    for (int c = 0; c < n; ++c)
      if (p != c) pairs.emplace_back(p, c);
  const int m = static_cast<int>(pairs.size());
  std::vector<std::uint32_t> masks(n);
  for (std::uint64_t bits = 0; bits < (1ull << m); ++bits) {
    std::fill(masks.begin(), masks.end(), 0u);
    std::uint64_t b = bits;
    while (b) {
      const int a = std::countr_zero(b);
      masks[pairs[a].second] |= 1u << pairs[a].first;
      b &= b - 1;
    }
    if (detail::masks_acyclic(masks)) fn(masks);
  }
}

inline std::vector<Dag> enumerate_dags(int n) {
  std::vector<Dag> out;
  for_each_dag(n, [&](const std::vector<std::uint32_t>& masks) {
    out.push_back(Dag::from_parent_masks(masks));
  });
  return out;
}

inline std::int64_t count_dags(int n) {
  std::int64_t c = 0;
  for_each_dag(n, [&](const std::vector<std::uint32_t>&) { ++c; });
  return c;
}

/// Lazily counted family tables shared across repeated scorings of the same
/// dataset (for instance one dataset swept over many ESS values).
class CountCache {
public:
  explicit CountCache(const CategoricalDataset& data)
      : data_(&data), maps_(data.num_vars()) {}

  const CountTable& get(int var, std::uint32_t mask) {
    auto [it, inserted] = maps_[var].try_emplace(mask);
    if (inserted) {
      const std::vector<int> parents = detail::mask_to_parents(mask);
      it->second = count_family(*data_, var, parents);
    }
    return it->second;
  }

private:
  const CategoricalDataset* data_;
  std::vector<std::unordered_map<std::uint32_t, CountTable>> maps_;
};

/// Family scores keyed by (variable, parent bitmask), precomputed for every
/// candidate parent set up to the cap. Read-only after construction, so
/// concurrent scoring queries are safe. Population order is irrelevant to the
/// result, which is what makes it parallelizable in principle.
class FamilyScoreCache {
public:
  FamilyScoreCache(const CategoricalDataset& data, ScoreKind kind,
                   const HyperScheme& scheme, int max_parents = -1,
                   CountCache* shared_counts = nullptr)
      : num_vars_(data.num_vars()) {
    validate_kind_scheme(kind, scheme);
    if (num_vars_ > kMaxDpVars)
      throw LimitError("family cache is limited to " +
                       std::to_string(kMaxDpVars) + " variables, got " +
                       std::to_string(num_vars_));
    cap_ = (max_parents < 0) ? num_vars_ - 1 : max_parents;
    const std::uint32_t subsets = 1u << (num_vars_ - 1);
    scores_.assign(num_vars_, std::vector<double>(
        subsets, -std::numeric_limits<double>::infinity()));
    const std::int64_t n = data.num_records();
    for (int i = 0; i < num_vars_; ++i) {
      for (std::uint32_t packed = 0; packed < subsets; ++packed) {
        if (std::popcount(packed) > cap_) continue;
        const std::uint32_t mask = detail::unsqueeze_mask(packed, i);
        const std::vector<int> parents = detail::mask_to_parents(mask);
        if (shared_counts) {
          scores_[i][packed] = family_score_nats(kind, scheme,
                                                 shared_counts->get(i, mask), i,
                                                 parents, n);
        } else {
          scores_[i][packed] = family_score_nats(kind, scheme,
                                                 count_family(data, i, parents),
                                                 i, parents, n);
        }
        ++computed_;
      }
    }
  }

  int num_vars() const { return num_vars_; }
  int max_parents() const { return cap_; }
  std::int64_t num_family_scores() const { return computed_; }

  bool allowed(std::uint32_t mask) const {
    return std::popcount(mask) <= cap_;
  }

  /// Score in natural log of family (var, mask); mask must not contain var.
  double family_nats(int var, std::uint32_t mask) const {
    return scores_[var][detail::squeeze_mask(mask, var)];
  }

private:
  int num_vars_;
  int cap_ = 0;
  std::int64_t computed_ = 0;
  std::vector<std::vector<double>> scores_;
};

struct SearchResult {
  Dag dag;
  double score_bits = 0.0;
  std::int64_t candidates_examined = 0;  // DAGs for exhaustive, sink
                                         // decompositions for the DP
  std::int64_t ties_at_optimum = 0;
};

namespace detail {

inline bool tie_break_prefers(int arcs_a, const std::vector<std::uint32_t>& a,
                              int arcs_b, const std::vector<std::uint32_t>& b) {
  if (arcs_a != arcs_b) return arcs_a < arcs_b;
  return a < b;
}

}  // namespace detail

/// Argmax over every labeled DAG, scores taken from a prebuilt cache. Ties
/// within kScoreTieBits go to the fewest arcs, then the lexicographically
/// smallest parent-mask tuple.
inline SearchResult exhaustive_best(const FamilyScoreCache& cache) {
  const int n = cache.num_vars();
  if (n > kMaxExhaustiveVars)
    throw LimitError("exhaustive search is limited to " +
                     std::to_string(kMaxExhaustiveVars) + " variables, got " +
                     std::to_string(n));

  std::vector<std::uint32_t> best_masks;
  double best_nats = 0.0;
  int best_arcs = 0;
  std::int64_t candidates = 0, ties = 0;

  for_each_dag(n, [&](const std::vector<std::uint32_t>& masks) {
    ++candidates;
    double nats = 0.0;
    int arcs = 0;
    for (int i = 0; i < n; ++i) {
      nats += cache.family_nats(i, masks[i]);
      arcs += std::popcount(masks[i]);
    }
    if (best_masks.empty() || nats > best_nats + kScoreTieNats) {
      best_masks = masks;
      best_nats = nats;
      best_arcs = arcs;
      ties = 1;
    } else if (nats >= best_nats - kScoreTieNats) {
      ++ties;
      if (detail::tie_break_prefers(arcs, masks, best_arcs, best_masks)) {
        best_masks = masks;
        best_arcs = arcs;
      }
      if (nats > best_nats) best_nats = nats;
    }
  });

  SearchResult res{Dag::from_parent_masks(best_masks), 0.0, candidates, ties};
  // Re-accumulate per family in variable order so the reported value matches
  // a fresh score() of the winner exactly.
  double bits = 0.0;
  for (int i = 0; i < n; ++i)
    bits += cache.family_nats(i, best_masks[i]) * kInvLn2;
  res.score_bits = bits;
  return res;
}

inline SearchResult exhaustive_best(const CategoricalDataset& data, ScoreKind kind,
                                    const HyperScheme& scheme) {
  if (data.num_vars() > kMaxExhaustiveVars)
    throw LimitError("exhaustive search is limited to " +
                     std::to_string(kMaxExhaustiveVars) + " variables, got " +
                     std::to_string(data.num_vars()));
  return exhaustive_best(FamilyScoreCache(data, kind, scheme));
}

/// Exact optimum by dynamic programming over variable subsets: best parent
/// set per (variable, candidate set), then best sink per subset. Memory and
/// time grow as 2^N; the same tie-break rule as exhaustive_best is threaded
/// through both tables, so the two searches return identical structures.
inline SearchResult exact_dp_best(const FamilyScoreCache& cache) {
  const int n = cache.num_vars();

  // Best family per (variable, squeezed candidate-parent set), tie-broken by
  // (score, parent count, mask value). Increasing packed order visits every
  // subset before its supersets.
  struct BpEntry {
    double nats;
    std::uint32_t mask;  // over all variables
  };
  const std::uint32_t half = 1u << (n - 1);
  std::vector<std::vector<BpEntry>> bp(n, std::vector<BpEntry>(half));
  for (int i = 0; i < n; ++i) {
    for (std::uint32_t packed = 0; packed < half; ++packed) {
      const std::uint32_t full = detail::unsqueeze_mask(packed, i);
      BpEntry best{-std::numeric_limits<double>::infinity(), 0};
      bool have = false;
      auto consider = [&](double nats, std::uint32_t mask) {
        if (!have || nats > best.nats + kScoreTieNats) {
          best = {nats, mask};
          have = true;
          return;
        }
        if (nats < best.nats - kScoreTieNats) return;
        const int pa = std::popcount(mask), pb = std::popcount(best.mask);
        if (pa < pb || (pa == pb && mask < best.mask)) best.mask = mask;
        if (nats > best.nats) best.nats = nats;
      };
      if (cache.allowed(full)) consider(cache.family_nats(i, full), full);
      for (std::uint32_t rest = packed; rest;) {
        const std::uint32_t bit = rest & (~rest + 1);
        rest ^= bit;
        const BpEntry& sub = bp[i][packed ^ bit];
        consider(sub.nats, sub.mask);
      }
      bp[i][packed] = best;
    }
  }

  // Best network per subset W, decomposed over the choice of a sink.
  struct DpEntry {
    double nats = 0.0;
    int arcs = 0;
    int sink = -1;
    std::uint32_t sink_mask = 0;
  };
  const std::uint32_t full_set = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<DpEntry> dp(static_cast<std::size_t>(full_set) + 1);

  auto materialize = [&](std::uint32_t w, int extra_var, std::uint32_t extra_mask) {
    std::vector<std::uint32_t> masks(n, 0);
    while (w) {
      const DpEntry& e = dp[w];
      masks[e.sink] = e.sink_mask;
      w &= ~(1u << e.sink);
    }
    if (extra_var >= 0) masks[extra_var] = extra_mask;
    return masks;
  };

  std::int64_t candidates = 0, final_ties = 0;
  for (std::uint32_t w = 1; w <= full_set; ++w) {
    DpEntry best;
    bool have = false;
    std::int64_t ties = 0;
    for (std::uint32_t rest0 = w; rest0;) {
      const std::uint32_t bit = rest0 & (~rest0 + 1);
      rest0 ^= bit;
      const int sink = std::countr_zero(bit);
      const std::uint32_t prev = w ^ bit;
      const BpEntry& fam = bp[sink][detail::squeeze_mask(prev, sink)];
      const DpEntry& sub = dp[prev];
      DpEntry cand{sub.nats + fam.nats, sub.arcs + std::popcount(fam.mask),
                   sink, fam.mask};
      ++candidates;
      if (!have || cand.nats > best.nats + kScoreTieNats) {
        best = cand;
        have = true;
        ties = 1;
        continue;
      }
      if (cand.nats < best.nats - kScoreTieNats) continue;
      ++ties;
      const std::vector<std::uint32_t> cm =
          materialize(w ^ (1u << cand.sink), cand.sink, cand.sink_mask);
      const std::vector<std::uint32_t> bm =
          materialize(w ^ (1u << best.sink), best.sink, best.sink_mask);
      const double top = std::max(cand.nats, best.nats);
      if (detail::tie_break_prefers(cand.arcs, cm, best.arcs, bm)) best = cand;
      best.nats = top;
    }
    dp[w] = best;
    if (w == full_set) final_ties = ties;
  }

  const std::vector<std::uint32_t> masks = materialize(full_set, -1, 0);
  SearchResult res{Dag::from_parent_masks(masks), 0.0, candidates, final_ties};
  double bits = 0.0;
  for (int i = 0; i < n; ++i) bits += cache.family_nats(i, masks[i]) * kInvLn2;
  res.score_bits = bits;
  return res;
}

inline SearchResult exact_dp_best(const CategoricalDataset& data, ScoreKind kind,
                                  const HyperScheme& scheme, int max_parents = -1) {
  return exact_dp_best(FamilyScoreCache(data, kind, scheme, max_parents));
}

}  // namespace bnet
