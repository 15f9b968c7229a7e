#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "bnet/errors.hpp"

namespace bnet {

/// Directed acyclic structure over variables 0..N-1. Parent sets are kept
/// sorted ascending; the topological order is fixed at construction (Kahn's
/// algorithm, smallest eligible index first), so everything downstream of a
/// Dag is deterministic.
class Dag {
public:
  explicit Dag(int num_vars) : parents_(check_n(num_vars)) {
    topo_.resize(num_vars);
    for (int i = 0; i < num_vars; ++i) topo_[i] = i;
  }

  Dag(int num_vars, const std::vector<std::pair<int, int>>& arcs)
      : parents_(check_n(num_vars)) {
    for (const auto& [p, c] : arcs) {
      if (p < 0 || p >= num_vars || c < 0 || c >= num_vars)
        throw DimensionError("arc endpoint out of range");
      if (p == c) throw DimensionError("self-loop on variable " + std::to_string(p));
      parents_[c].push_back(p);
    }
    for (auto& ps : parents_) {
      std::sort(ps.begin(), ps.end());
      if (std::adjacent_find(ps.begin(), ps.end()) != ps.end())
        throw DimensionError("duplicate parent in arc list");
    }
    compute_topo_order();
  }

  static Dag from_parent_sets(std::vector<std::vector<int>> parent_sets) {
    Dag d(static_cast<int>(parent_sets.size()));
    for (int i = 0; i < d.num_vars(); ++i) {
      auto& ps = parent_sets[i];
      std::sort(ps.begin(), ps.end());
      if (std::adjacent_find(ps.begin(), ps.end()) != ps.end())
        throw DimensionError("duplicate parent of variable " + std::to_string(i));
      for (int p : ps) {
        if (p < 0 || p >= d.num_vars())
          throw DimensionError("parent index out of range");
        if (p == i) throw DimensionError("self-loop on variable " + std::to_string(i));
      }
    }
    d.parents_ = std::move(parent_sets);
    d.compute_topo_order();
    return d;
  }

  /// Parent sets given as bitmasks (bit p set <=> arc p -> i). N <= 32.
  static Dag from_parent_masks(const std::vector<std::uint32_t>& masks) {
    std::vector<std::vector<int>> ps(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i)
      for (int p = 0; p < static_cast<int>(masks.size()); ++p)
        if (masks[i] >> p & 1u) ps[i].push_back(p);
    return from_parent_sets(std::move(ps));
  }

  int num_vars() const { return static_cast<int>(parents_.size()); }
  const std::vector<int>& parents(int i) const { return parents_[i]; }
  const std::vector<int>& topo_order() const { return topo_; }

  int num_arcs() const {
    int a = 0;
    for (const auto& ps : parents_) a += static_cast<int>(ps.size());
    return a;
  }

  bool has_arc(int p, int c) const {
    const auto& ps = parents_[c];
    return std::binary_search(ps.begin(), ps.end(), p);
  }

  /// Arcs as (parent, child) pairs, child-major then parent order.
  std::vector<std::pair<int, int>> arcs() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(num_arcs());
    for (int c = 0; c < num_vars(); ++c)
      for (int p : parents_[c]) out.emplace_back(p, c);
    return out;
  }

  std::uint32_t parent_mask(int i) const {
    std::uint32_t m = 0;
    for (int p : parents_[i]) m |= 1u << p;
    return m;
  }

  std::vector<std::uint32_t> parent_masks() const {
    std::vector<std::uint32_t> m(num_vars());
    for (int i = 0; i < num_vars(); ++i) m[i] = parent_mask(i);
    return m;
  }

  bool operator==(const Dag& other) const { return parents_ == other.parents_; }

private:
  static int check_n(int n) {
    if (n < 1) throw DimensionError("a structure needs at least one variable");
    return n;
  }

  void compute_topo_order() {
    const int n = num_vars();
    std::vector<int> indegree(n);
    for (int i = 0; i < n; ++i) indegree[i] = static_cast<int>(parents_[i].size());
    std::vector<std::vector<int>> children(n);
    for (int c = 0; c < n; ++c)
      for (int p : parents_[c]) children[p].push_back(c);

    topo_.clear();
    topo_.reserve(n);
    std::vector<bool> placed(n, false);
    for (int step = 0; step < n; ++step) {
      int pick = -1;
      for (int i = 0; i < n; ++i)
        if (!placed[i] && indegree[i] == 0) { pick = i; break; }
      if (pick < 0) throw DimensionError("structure contains a cycle");
      placed[pick] = true;
      topo_.push_back(pick);
      for (int c : children[pick]) --indegree[c];
    }
  }

  std::vector<std::vector<int>> parents_;  // sorted ascending per variable
  std::vector<int> topo_;
};

}  // namespace bnet
