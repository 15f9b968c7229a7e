// Shared test-side generators and independent oracles. Everything here stays
// deliberately naive: the oracles recompute quantities from first principles
// (running predictive products, explicit recurrences, hand-rolled indexing)
// so they share no scoring code with the library paths under test.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bnet/bnet.hpp"

namespace testutil {

using namespace bnet;

// Sequential product of EAP one-step predictive probabilities, in bits.
// Counting is done with plain maps keyed by explicitly built parent-state
// vectors; hyperparameters come in as a per-cell table.
inline double prequential_log2(const CategoricalDataset& data, const Dag& dag,
                               const HyperTable& hyper) {
  const int nv = data.num_vars();
  std::vector<std::map<std::vector<int>, std::vector<std::int64_t>>> counts(nv);
  double nats = 0.0;
  for (std::int64_t t = 0; t < data.num_records(); ++t) {
    for (int i = 0; i < nv; ++i) {
      std::vector<int> pstate;
      for (int p : dag.parents(i)) pstate.push_back(data.value(t, p));
      auto& cell = counts[i][pstate];
      if (cell.empty()) cell.assign(data.variables()[i].cardinality, 0);

      // mixed radix by hand, first parent most significant
      std::int64_t j = 0;
      for (std::size_t d = 0; d < pstate.size(); ++d) {
        const int card = data.variables()[dag.parents(i)[d]].cardinality;
        j = j * card + pstate[d];
      }
      const int k = data.value(t, i);
      double arow = 0.0;
      std::int64_t nrow = 0;
      for (int kk = 0; kk < data.variables()[i].cardinality; ++kk) {
        arow += hyper[i].at(j, kk);
        nrow += cell[kk];
      }
      nats += std::log((hyper[i].at(j, k) + static_cast<double>(cell[k])) /
                       (arow + static_cast<double>(nrow)));
      ++cell[k];
    }
  }
  return nats / std::log(2.0);
}

// Number of labeled DAGs on n nodes by the alternating-sum recurrence
// a(n) = sum_k (-1)^(k+1) C(n,k) 2^(k(n-k)) a(n-k).
inline long long labeled_dag_count(int n) {
  std::vector<long long> a{1};
  auto choose = [](int nn, int kk) {
    long long c = 1;
    for (int i = 1; i <= kk; ++i) c = c * (nn - kk + i) / i;
    return c;
  };
  for (int m = 1; m <= n; ++m) {
    long long s = 0;
    for (int k = 1; k <= m; ++k) {
      const long long term = choose(m, k) * (1LL << (k * (m - k))) * a[m - k];
      s += (k % 2 == 1) ? term : -term;
    }
    a.push_back(s);
  }
  return a[n];
}

inline std::vector<Variable> make_vars(const std::vector<int>& cards) {
  std::vector<Variable> v;
  for (std::size_t i = 0; i < cards.size(); ++i)
    v.push_back({"v" + std::to_string(i), cards[i]});
  return v;
}

inline CategoricalDataset random_dataset(SplitMix64& rng, int num_vars,
                                         int max_card, std::int64_t n) {
  std::vector<int> cards;
  for (int i = 0; i < num_vars; ++i)
    cards.push_back(2 + static_cast<int>(rng.next() % (max_card - 1)));
  const std::vector<Variable> vars = make_vars(cards);
  std::vector<std::vector<int>> recs;
  for (std::int64_t t = 0; t < n; ++t) {
    std::vector<int> r(num_vars);
    for (int i = 0; i < num_vars; ++i)
      r[i] = static_cast<int>(rng.next() % cards[i]);
    recs.push_back(std::move(r));
  }
  return CategoricalDataset(vars, recs);
}

// Random structure: each earlier variable is a parent with probability 1/2.
inline Dag random_dag(SplitMix64& rng, int num_vars) {
  std::vector<std::pair<int, int>> arcs;
  for (int c = 1; c < num_vars; ++c)
    for (int p = 0; p < c; ++p)
      if (rng.next() % 2) arcs.emplace_back(p, c);
  return Dag(num_vars, arcs);
}

// Random net over the given variables with generic CPT rows in [0.1, 0.9].
inline BayesNet random_net(SplitMix64& rng, const std::vector<int>& cards) {
  const std::vector<Variable> vars = make_vars(cards);
  const Dag dag = random_dag(rng, static_cast<int>(cards.size()));
  std::vector<RealTable> cpts;
  for (int i = 0; i < dag.num_vars(); ++i) {
    const ParentConfigIndexer idx = family_indexer(vars, dag.parents(i));
    RealTable t(idx.size(), cards[i]);
    for (std::int64_t j = 0; j < t.q; ++j) {
      double sum = 0.0;
      for (int k = 0; k < t.r; ++k) {
        t.at(j, k) = 0.1 + 0.9 * rng.next_unit();
        sum += t.at(j, k);
      }
      for (int k = 0; k < t.r; ++k) t.at(j, k) /= sum;
    }
    t.recompute_rows();
    cpts.push_back(std::move(t));
  }
  return BayesNet(vars, dag, cpts);
}

// A dataset containing every joint configuration `reps` times plus `extras`
// random records, so every family count of any structure is positive.
inline CategoricalDataset all_configs_dataset(SplitMix64& rng,
                                              const std::vector<int>& cards,
                                              int reps, int extras) {
  const std::vector<Variable> vars = make_vars(cards);
  std::vector<std::vector<int>> recs;
  std::vector<int> a(cards.size(), 0);
  for (;;) {
    for (int rep = 0; rep < reps; ++rep) recs.push_back(a);
    int pos = static_cast<int>(cards.size()) - 1;
    while (pos >= 0 && ++a[pos] == cards[pos]) a[pos--] = 0;
    if (pos < 0) break;
  }
  for (int t = 0; t < extras; ++t) {
    std::vector<int> r(cards.size());
    for (std::size_t i = 0; i < cards.size(); ++i)
      r[i] = static_cast<int>(rng.next() % cards[i]);
    recs.push_back(std::move(r));
  }
  return CategoricalDataset(vars, recs);
}

}  // namespace testutil
