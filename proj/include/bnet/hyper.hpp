#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bnet/bayes_net.hpp"
#include "bnet/dag.hpp"
#include "bnet/errors.hpp"
#include "bnet/stats.hpp"

namespace bnet {

/// alpha_ijk = ess / (r_i * q_i) for every cell of the scored structure.
struct BDeuScheme {
  double ess = 1.0;
};

/// alpha_ijk = ess * p(x_i = k, parents = j | hypothetical net), the joint
/// probability taken by exact marginalization of the hypothetical net.
struct BDeScheme {
  double ess = 1.0;
  BayesNet hypothetical;
};

/// alpha_ijk = 1 for every cell.
struct K2Scheme {};

/// alpha_ijk = c * n_ijk. Cells with zero counts get zero hyperparameters,
/// which excludes this scheme from the exact marginal likelihood.
struct DataRatioScheme {
  double c = 1.0 / 3.0;
};

using HyperScheme = std::variant<BDeuScheme, BDeScheme, K2Scheme, DataRatioScheme>;

inline std::string scheme_name(const HyperScheme& s) {
  struct V {
    std::string operator()(const BDeuScheme&) const { return "bdeu"; }
    std::string operator()(const BDeScheme&) const { return "bde"; }
    std::string operator()(const K2Scheme&) const { return "k2"; }
    std::string operator()(const DataRatioScheme&) const { return "data-ratio"; }
  };
  return std::visit(V{}, s);
}

/// The scalar parameter carried by the scheme: alpha for BDeu/BDe, c for
/// DataRatio, nothing for K2.
inline std::optional<double> scheme_parameter(const HyperScheme& s) {
  struct V {
    std::optional<double> operator()(const BDeuScheme& b) const { return b.ess; }
    std::optional<double> operator()(const BDeScheme& b) const { return b.ess; }
    std::optional<double> operator()(const K2Scheme&) const { return std::nullopt; }
    std::optional<double> operator()(const DataRatioScheme& d) const { return d.c; }
  };
  return std::visit(V{}, s);
}

namespace detail {

// Joint margins p(x_i = k, parents_i = j | net) for one family, by a single
// sweep over the net's full joint. Feasible while the joint stays small; the
// guard keeps the sweep under ~4M configurations.
inline RealTable bde_family_margin(const BayesNet& net, int child,
                                   std::span<const int> parents) {
  constexpr std::int64_t kMaxJoint = 1 << 22;
  if (net.joint_size() > kMaxJoint)
    throw LimitError("hypothetical net joint has " +
                     std::to_string(net.joint_size()) +
                     " configurations, enumeration limit is " +
                     std::to_string(kMaxJoint));
  const auto& vars = net.variables();
  const ParentConfigIndexer idx = family_indexer(vars, parents);
  RealTable m(idx.size(), vars[child].cardinality);

  const int nv = net.num_vars();
  std::vector<int> a(nv, 0);
  std::vector<int> pstate(parents.size());
  for (;;) {
    const double p = net.joint_probability(a);
    for (std::size_t t = 0; t < parents.size(); ++t) pstate[t] = a[parents[t]];
    m.at(idx.index_of(pstate), a[child]) += p;
    int pos = nv - 1;
    while (pos >= 0 && ++a[pos] == vars[pos].cardinality) a[pos--] = 0;
    if (pos < 0) break;
  }
  m.recompute_rows();
  return m;
}

}  // namespace detail

/// Hyperparameters for one candidate family (child, parents). The shape
/// arguments describe the scored family's count table.
inline RealTable family_hyperparameters(const HyperScheme& scheme,
                                        const CountTable& counts, int child,
                                        std::span<const int> parents) {
  struct V {
    const CountTable& counts;
    int child;
    std::span<const int> parents;

    RealTable operator()(const BDeuScheme& s) const {
      if (!(s.ess > 0.0))
        throw std::invalid_argument("BDeu requires a positive equivalent sample size");
      RealTable t(counts.q, counts.r);
      const double cell = s.ess / (static_cast<double>(counts.r) *
                                   static_cast<double>(counts.q));
      for (double& v : t.cells) v = cell;
      t.recompute_rows();
      return t;
    }
    RealTable operator()(const BDeScheme& s) const {
      if (!(s.ess > 0.0))
        throw std::invalid_argument("BDe requires a positive equivalent sample size");
      RealTable t = detail::bde_family_margin(s.hypothetical, child, parents);
      if (t.q != counts.q || t.r != counts.r)
        throw DimensionError("hypothetical net disagrees with the scored family shape");
      for (double& v : t.cells) v *= s.ess;
      t.recompute_rows();
      return t;
    }
    RealTable operator()(const K2Scheme&) const {
      RealTable t(counts.q, counts.r);
      for (double& v : t.cells) v = 1.0;
      t.recompute_rows();
      return t;
    }
    RealTable operator()(const DataRatioScheme& s) const {
      if (!(s.c > 0.0))
        throw std::invalid_argument("data-ratio requires a positive ratio");
      RealTable t(counts.q, counts.r);
      for (std::size_t idx = 0; idx < t.cells.size(); ++idx)
        t.cells[idx] = s.c * static_cast<double>(counts.cells[idx]);
      t.recompute_rows();
      return t;
    }
  };
  return std::visit(V{counts, child, parents}, scheme);
}

/// Per-cell alpha_ijk for every family of the scored structure.
inline HyperTable hyperparameters(const HyperScheme& scheme, const Dag& dag,
                                  const SufficientStats& stats) {
  if (dag.num_vars() != stats.num_vars())
    throw DimensionError("structure and sufficient statistics disagree on N");
  if (const auto* bde = std::get_if<BDeScheme>(&scheme)) {
    if (bde->hypothetical.num_vars() != dag.num_vars())
      throw DimensionError("hypothetical net has " +
                           std::to_string(bde->hypothetical.num_vars()) +
                           " variables, scored structure has " +
                           std::to_string(dag.num_vars()));
    for (int i = 0; i < dag.num_vars(); ++i)
      if (bde->hypothetical.variables()[i].cardinality != stats.families[i].r)
        throw DimensionError("hypothetical net cardinality mismatch at variable " +
                             std::to_string(i));
  }
  HyperTable h;
  h.reserve(stats.families.size());
  for (int i = 0; i < stats.num_vars(); ++i)
    h.push_back(family_hyperparameters(scheme, stats.families[i], i, dag.parents(i)));
  return h;
}

}  // namespace bnet
