#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "bnet/dag.hpp"
#include "bnet/data.hpp"
#include "bnet/errors.hpp"

namespace bnet {

inline constexpr double kLn2 = 0.6931471805599453094;

/// Bijection between parent state vectors and configuration indices
/// j in 0..q-1. Mixed radix with the FIRST-listed parent as the most
/// significant digit; q = 1 for the empty parent set.
class ParentConfigIndexer {
public:
  ParentConfigIndexer() = default;

  explicit ParentConfigIndexer(std::vector<int> parent_cards)
      : cards_(std::move(parent_cards)), strides_(cards_.size()) {
    size_ = 1;
    for (int t = static_cast<int>(cards_.size()) - 1; t >= 0; --t) {
      strides_[t] = size_;
      size_ *= cards_[t];
    }
  }

  std::int64_t size() const { return size_; }
  int num_parents() const { return static_cast<int>(cards_.size()); }
  const std::vector<int>& cardinalities() const { return cards_; }

  std::int64_t index_of(std::span<const int> states) const {
    std::int64_t j = 0;
    for (std::size_t t = 0; t < cards_.size(); ++t) j += strides_[t] * states[t];
    return j;
  }

  std::vector<int> states_of(std::int64_t j) const {
    std::vector<int> s(cards_.size());
    for (std::size_t t = 0; t < cards_.size(); ++t) {
      s[t] = static_cast<int>(j / strides_[t]);
      j %= strides_[t];
    }
    return s;
  }

private:
  std::vector<int> cards_;
  std::vector<std::int64_t> strides_;
  std::int64_t size_ = 1;
};

/// q x r table, row-major by parent configuration, with materialized row sums.
template <class T>
struct FamilyTable {
  std::int64_t q = 1;
  int r = 0;
  std::vector<T> cells;  // q * r
  std::vector<T> rows;   // q

  FamilyTable() = default;
  FamilyTable(std::int64_t q_, int r_)
      : q(q_), r(r_), cells(static_cast<std::size_t>(q_) * r_, T{}),
        rows(static_cast<std::size_t>(q_), T{}) {}

  T at(std::int64_t j, int k) const { return cells[static_cast<std::size_t>(j) * r + k]; }
  T& at(std::int64_t j, int k) { return cells[static_cast<std::size_t>(j) * r + k]; }

  void recompute_rows() {
    rows.assign(static_cast<std::size_t>(q), T{});
    for (std::int64_t j = 0; j < q; ++j)
      for (int k = 0; k < r; ++k) rows[j] += at(j, k);
  }
};

using CountTable = FamilyTable<std::int64_t>;
using RealTable = FamilyTable<double>;

/// Joint counts n_ijk for every family of a structure; rows[j] holds n_ij and
/// every family's cells sum to the record count.
struct SufficientStats {
  std::vector<CountTable> families;
  std::int64_t n = 0;

  int num_vars() const { return static_cast<int>(families.size()); }
};

/// Per-cell Dirichlet hyperparameters with the same shape as the counts.
using HyperTable = std::vector<RealTable>;

inline ParentConfigIndexer family_indexer(const std::vector<Variable>& vars,
                                          std::span<const int> parents) {
  std::vector<int> cards;
  cards.reserve(parents.size());
  for (int p : parents) cards.push_back(vars[p].cardinality);
  return ParentConfigIndexer(std::move(cards));
}

/// Counts for one candidate family (child, parents) regardless of any Dag.
inline CountTable count_family(const CategoricalDataset& data, int child,
                               std::span<const int> parents) {
  const auto& vars = data.variables();
  const ParentConfigIndexer idx = family_indexer(vars, parents);
  CountTable t(idx.size(), vars[child].cardinality);
  const std::int64_t n = data.num_records();
  std::vector<int> pstate(parents.size());
  for (std::int64_t rec = 0; rec < n; ++rec) {
    for (std::size_t p = 0; p < parents.size(); ++p)
      pstate[p] = data.value(rec, parents[p]);
    const std::int64_t j = idx.index_of(pstate);
    ++t.at(j, data.value(rec, child));
  }
  t.recompute_rows();
  return t;
}

inline SufficientStats count_stats(const CategoricalDataset& data, const Dag& dag) {
  if (data.num_vars() != dag.num_vars())
    throw DimensionError("dataset has " + std::to_string(data.num_vars()) +
                         " variables, structure has " +
                         std::to_string(dag.num_vars()));
  SufficientStats s;
  s.n = data.num_records();
  s.families.reserve(dag.num_vars());
  for (int i = 0; i < dag.num_vars(); ++i)
    s.families.push_back(count_family(data, i, dag.parents(i)));
  return s;
}

/// Posterior-mean parameter estimates (alpha_ijk + n_ijk) / (alpha_ij + n_ij).
inline std::vector<RealTable> eap_estimate(const SufficientStats& stats,
                                           const HyperTable& hyper) {
  if (hyper.size() != stats.families.size())
    throw DimensionError("hyperparameter table shape mismatch");
  std::vector<RealTable> theta;
  theta.reserve(stats.families.size());
  for (std::size_t i = 0; i < stats.families.size(); ++i) {
    const CountTable& c = stats.families[i];
    const RealTable& a = hyper[i];
    if (a.q != c.q || a.r != c.r)
      throw DimensionError("hyperparameter table shape mismatch at variable " +
                           std::to_string(i));
    RealTable th(c.q, c.r);
    for (std::int64_t j = 0; j < c.q; ++j) {
      const double denom = a.rows[j] + static_cast<double>(c.rows[j]);
      for (int k = 0; k < c.r; ++k) {
        const double num = a.at(j, k);
        if (num <= 0.0)
          throw std::invalid_argument("EAP estimation needs positive hyperparameters");
        th.at(j, k) = (num + static_cast<double>(c.at(j, k))) / denom;
      }
    }
    th.recompute_rows();
    theta.push_back(std::move(th));
  }
  return theta;
}

/// Maximum-likelihood data fit in bits: sum of n_ijk * log2(n_ijk / n_ij),
/// with empty cells and empty rows contributing zero. Never positive.
inline double log_likelihood(const SufficientStats& stats) {
  double nats = 0.0;
  for (const CountTable& c : stats.families) {
    for (std::int64_t j = 0; j < c.q; ++j) {
      const std::int64_t nij = c.rows[j];
      if (nij == 0) continue;
      const double lrow = std::log(static_cast<double>(nij));
      for (int k = 0; k < c.r; ++k) {
        const std::int64_t nijk = c.at(j, k);
        if (nijk == 0) continue;
        nats += static_cast<double>(nijk) *
                (std::log(static_cast<double>(nijk)) - lrow);
      }
    }
  }
  return nats / kLn2;
}

}  // namespace bnet
