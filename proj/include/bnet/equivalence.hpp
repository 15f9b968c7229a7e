#pragma once

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "bnet/dag.hpp"

namespace bnet {

/// Canonical form of a Markov equivalence class: the undirected skeleton plus
/// the set of v-structures (a -> c <- b with a, b non-adjacent). Two DAGs are
/// Markov equivalent iff their canonical forms compare equal.
struct EquivalenceClass {
  int num_vars = 0;
  std::vector<std::pair<int, int>> skeleton;        // (a, b), a < b, sorted
  std::vector<std::array<int, 3>> v_structures;     // (a, b, c), a < b, sorted

  bool operator==(const EquivalenceClass&) const = default;
  auto operator<=>(const EquivalenceClass&) const = default;

  std::string to_string() const {
    std::ostringstream os;
    os << "skeleton{";
    for (std::size_t e = 0; e < skeleton.size(); ++e)
      os << (e ? "," : "") << skeleton[e].first << "-" << skeleton[e].second;
    os << "} v{";
    for (std::size_t v = 0; v < v_structures.size(); ++v)
      os << (v ? "," : "") << v_structures[v][0] << ">" << v_structures[v][2]
         << "<" << v_structures[v][1];
    os << "}";
    return os.str();
  }
};

inline EquivalenceClass equivalence_class(const Dag& dag) {
  EquivalenceClass ec;
  ec.num_vars = dag.num_vars();
  auto adjacent = [&](int a, int b) { return dag.has_arc(a, b) || dag.has_arc(b, a); };

  for (int b = 0; b < dag.num_vars(); ++b)
    for (int a : dag.parents(b))
      ec.skeleton.emplace_back(std::min(a, b), std::max(a, b));
  std::sort(ec.skeleton.begin(), ec.skeleton.end());

  for (int c = 0; c < dag.num_vars(); ++c) {
    const auto& ps = dag.parents(c);
    for (std::size_t s = 0; s < ps.size(); ++s)
      for (std::size_t t = s + 1; t < ps.size(); ++t)
        if (!adjacent(ps[s], ps[t]))
          ec.v_structures.push_back({ps[s], ps[t], c});
  }
  std::sort(ec.v_structures.begin(), ec.v_structures.end());
  return ec;
}

}  // namespace bnet
