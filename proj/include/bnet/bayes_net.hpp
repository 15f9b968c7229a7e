#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bnet/dag.hpp"
#include "bnet/data.hpp"
#include "bnet/errors.hpp"
#include "bnet/rng.hpp"
#include "bnet/stats.hpp"

namespace bnet {

/// A structure plus its conditional probability tables; the generative object
/// for sampling. CPT rows are indexed by the parent-configuration encoding of
/// ParentConfigIndexer (first-listed parent most significant).
class BayesNet {
public:
  BayesNet(std::vector<Variable> variables, Dag dag, std::vector<RealTable> cpts)
      : vars_(std::move(variables)), dag_(std::move(dag)), cpts_(std::move(cpts)) {
    detail::validate_variables(vars_);
    if (static_cast<int>(vars_.size()) != dag_.num_vars())
      throw DimensionError("variable list and structure disagree on N");
    if (cpts_.size() != vars_.size())
      throw DimensionError("need one CPT per variable");
    idx_.reserve(vars_.size());
    for (int i = 0; i < dag_.num_vars(); ++i) {
      idx_.push_back(family_indexer(vars_, dag_.parents(i)));
      const RealTable& t = cpts_[i];
      if (t.q != idx_[i].size() || t.r != vars_[i].cardinality)
        throw DimensionError("CPT of variable '" + vars_[i].name +
                             "' has shape " + std::to_string(t.q) + "x" +
                             std::to_string(t.r) + ", expected " +
                             std::to_string(idx_[i].size()) + "x" +
                             std::to_string(vars_[i].cardinality));
      for (std::int64_t j = 0; j < t.q; ++j) {
        double sum = 0.0;
        for (int k = 0; k < t.r; ++k) {
          const double p = t.at(j, k);
          if (p < 0.0 || p > 1.0)
            throw DimensionError("CPT entry out of [0,1] for variable '" +
                                 vars_[i].name + "'");
          sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
          throw DimensionError("CPT row " + std::to_string(j) +
                               " of variable '" + vars_[i].name +
                               "' sums to " + std::to_string(sum));
      }
      cpts_[i].recompute_rows();
    }
  }

  const std::vector<Variable>& variables() const { return vars_; }
  const Dag& dag() const { return dag_; }
  int num_vars() const { return dag_.num_vars(); }
  const RealTable& cpt(int i) const { return cpts_[i]; }
  const ParentConfigIndexer& indexer(int i) const { return idx_[i]; }

  /// Probability of a full assignment: product of one CPT entry per variable.
  double joint_probability(std::span<const int> assignment) const {
    if (static_cast<int>(assignment.size()) != num_vars())
      throw DimensionError("assignment length does not match N");
    double p = 1.0;
    std::vector<int> pstate;
    for (int i = 0; i < num_vars(); ++i) {
      const auto& parents = dag_.parents(i);
      pstate.clear();
      for (int par : parents) pstate.push_back(assignment[par]);
      const std::int64_t j = idx_[i].index_of(pstate);
      p *= cpts_[i].at(j, assignment[i]);
    }
    return p;
  }

  /// Number of joint configurations (product of all cardinalities).
  std::int64_t joint_size() const {
    std::int64_t s = 1;
    for (const Variable& v : vars_) s *= v.cardinality;
    return s;
  }

private:
  std::vector<Variable> vars_;
  Dag dag_;
  std::vector<RealTable> cpts_;
  std::vector<ParentConfigIndexer> idx_;
};

/// Ancestral sampling in the net's topological order, one SplitMix64 stream
/// for the whole dataset, records drawn in order. Each draw inverts the CPT
/// row CDF with states visited in ascending index order, so a given
/// (net, n, seed) always produces the identical dataset.
inline CategoricalDataset forward_sample(const BayesNet& net, std::int64_t n,
                                         std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("sample count must be >= 0");
  SplitMix64 rng(seed);
  const std::vector<int>& order = net.dag().topo_order();
  const int nv = net.num_vars();
  std::vector<std::vector<int>> records(static_cast<std::size_t>(n),
                                        std::vector<int>(nv));
  std::vector<int> pstate;
  for (std::int64_t t = 0; t < n; ++t) {
    std::vector<int>& rec = records[t];
    for (int i : order) {
      pstate.clear();
      for (int par : net.dag().parents(i)) pstate.push_back(rec[par]);
      const std::int64_t j = net.indexer(i).index_of(pstate);
      const double u = rng.next_unit();
      double acc = 0.0;
      int drawn = net.cpt(i).r - 1;
      for (int k = 0; k < net.cpt(i).r; ++k) {
        acc += net.cpt(i).at(j, k);
        if (u < acc) { drawn = k; break; }
      }
      rec[i] = drawn;
    }
  }
  return CategoricalDataset(net.variables(), records);
}

namespace detail {

inline RealTable cpt_from_rows(std::int64_t q, int r,
                               const std::vector<std::vector<double>>& rows) {
  RealTable t(q, r);
  for (std::int64_t j = 0; j < q; ++j)
    for (int k = 0; k < r; ++k) t.at(j, k) = rows[j][k];
  t.recompute_rows();
  return t;
}

}  // namespace detail

/// The two built-in 4-variable generating networks. Both share the arc set
/// {x1->x2, x1->x3, x2->x3, x2->x4, x3->x4}; they differ only in how strongly
/// the conditional rows react to the parent states.
///
///   structure1-skewed    root (0.8,0.2); one-parent rows 0.9 / 0.1;
///                        two-parent rows 0.9 / 0.7 / 0.3 / 0.1 by config.
///   structure2-nonskewed root (0.55,0.45); one-parent rows 0.55 / 0.45;
///                        two-parent rows 0.55 / 0.53 / 0.47 / 0.45.
inline BayesNet preset(std::string_view name) {
  const std::vector<Variable> vars{{"x1", 2}, {"x2", 2}, {"x3", 2}, {"x4", 2}};
  Dag dag(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});

  auto rows1 = [](double a, double b) {
    return std::vector<std::vector<double>>{{a, 1 - a}, {b, 1 - b}};
  };
  auto rows2 = [](double a, double b, double c, double d) {
    return std::vector<std::vector<double>>{
        {a, 1 - a}, {b, 1 - b}, {c, 1 - c}, {d, 1 - d}};
  };

  std::vector<RealTable> cpts;
  if (name == "structure1-skewed") {
    cpts.push_back(detail::cpt_from_rows(1, 2, {{0.8, 0.2}}));
    cpts.push_back(detail::cpt_from_rows(2, 2, rows1(0.9, 0.1)));
    cpts.push_back(detail::cpt_from_rows(4, 2, rows2(0.9, 0.7, 0.3, 0.1)));
    cpts.push_back(detail::cpt_from_rows(4, 2, rows2(0.9, 0.7, 0.3, 0.1)));
  } else if (name == "structure2-nonskewed") {
    cpts.push_back(detail::cpt_from_rows(1, 2, {{0.55, 0.45}}));
    cpts.push_back(detail::cpt_from_rows(2, 2, rows1(0.55, 0.45)));
    cpts.push_back(detail::cpt_from_rows(4, 2, rows2(0.55, 0.53, 0.47, 0.45)));
    cpts.push_back(detail::cpt_from_rows(4, 2, rows2(0.55, 0.53, 0.47, 0.45)));
  } else {
    throw ParseError("unknown preset '" + std::string(name) +
                     "'; expected structure1-skewed or structure2-nonskewed");
  }
  return BayesNet(vars, std::move(dag), std::move(cpts));
}

}  // namespace bnet
