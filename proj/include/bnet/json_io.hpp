#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bnet/bayes_net.hpp"
#include "bnet/dag.hpp"
#include "bnet/data.hpp"
#include "bnet/errors.hpp"
#include "bnet/experiments.hpp"
#include "bnet/scores.hpp"

namespace bnet {

using nlohmann::json;

/// A structure file: variables plus arcs, no parameters.
struct Structure {
  std::vector<Variable> variables;
  Dag dag;
};

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

namespace detail {

inline std::vector<Variable> variables_from_json(const json& j) {
  if (!j.contains("variables") || !j["variables"].is_array())
    throw ParseError("missing 'variables' array");
  std::vector<Variable> vars;
  for (const json& v : j["variables"]) {
    if (!v.contains("name") || !v["name"].is_string())
      throw ParseError("variable entry missing string 'name'");
    if (!v.contains("cardinality") || !v["cardinality"].is_number_integer())
      throw ParseError("variable '" + v.value("name", std::string{}) +
                       "' missing integer 'cardinality'");
    vars.push_back({v["name"].get<std::string>(), v["cardinality"].get<int>()});
  }
  try {
    validate_variables(vars);
  } catch (const DimensionError& e) {
    throw ParseError(e.what());
  }
  return vars;
}

inline int var_index(const std::vector<Variable>& vars, const std::string& name) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<int>(i);
  throw ParseError("unknown variable name '" + name + "' in arcs");
}

inline Dag dag_from_json(const json& j, const std::vector<Variable>& vars) {
  std::vector<std::pair<int, int>> arcs;
  if (j.contains("arcs")) {
    if (!j["arcs"].is_array()) throw ParseError("'arcs' must be an array");
    for (const json& a : j["arcs"]) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_string() || !a[1].is_string())
        throw ParseError("each arc must be a [parent, child] name pair");
      arcs.emplace_back(var_index(vars, a[0].get<std::string>()),
                        var_index(vars, a[1].get<std::string>()));
    }
  }
  try {
    return Dag(static_cast<int>(vars.size()), arcs);
  } catch (const DimensionError& e) {
    throw ParseError(e.what());  // cycles, duplicates: the file is malformed
  }
}

inline json variables_to_json(const std::vector<Variable>& vars) {
  json arr = json::array();
  for (const Variable& v : vars)
    arr.push_back({{"name", v.name}, {"cardinality", v.cardinality}});
  return arr;
}

inline json arcs_to_json(const std::vector<Variable>& vars, const Dag& dag) {
  json arr = json::array();
  for (const auto& [p, c] : dag.arcs())
    arr.push_back(json::array({vars[p].name, vars[c].name}));
  return arr;
}

}  // namespace detail

inline json structure_to_json(const std::vector<Variable>& vars, const Dag& dag) {
  return json{{"variables", detail::variables_to_json(vars)},
              {"arcs", detail::arcs_to_json(vars, dag)}};
}

inline Structure structure_from_json(const json& j) {
  std::vector<Variable> vars = detail::variables_from_json(j);
  Dag dag = detail::dag_from_json(j, vars);
  return Structure{std::move(vars), std::move(dag)};
}

inline json bayes_net_to_json(const BayesNet& net) {
  json j = structure_to_json(net.variables(), net.dag());
  json cpts = json::object();
  for (int i = 0; i < net.num_vars(); ++i) {
    const RealTable& t = net.cpt(i);
    json rows = json::array();
    for (std::int64_t q = 0; q < t.q; ++q) {
      json row = json::array();
      for (int k = 0; k < t.r; ++k) row.push_back(t.at(q, k));
      rows.push_back(std::move(row));
    }
    cpts[net.variables()[i].name] = std::move(rows);
  }
  j["cpts"] = std::move(cpts);
  return j;
}

inline BayesNet bayes_net_from_json(const json& j) {
  Structure s = structure_from_json(j);
  if (!j.contains("cpts") || !j["cpts"].is_object())
    throw ParseError("missing 'cpts' object");
  std::vector<RealTable> cpts;
  for (std::size_t i = 0; i < s.variables.size(); ++i) {
    const Variable& v = s.variables[i];
    if (!j["cpts"].contains(v.name))
      throw ParseError("missing CPT for variable '" + v.name + "'");
    const json& rows = j["cpts"][v.name];
    const ParentConfigIndexer idx = family_indexer(s.variables, s.dag.parents((int)i));
    if (!rows.is_array() || static_cast<std::int64_t>(rows.size()) != idx.size())
      throw ParseError("CPT of '" + v.name + "' needs " +
                       std::to_string(idx.size()) + " rows");
    RealTable t(idx.size(), v.cardinality);
    for (std::int64_t q = 0; q < t.q; ++q) {
      const json& row = rows[static_cast<std::size_t>(q)];
      if (!row.is_array() || static_cast<int>(row.size()) != v.cardinality)
        throw ParseError("CPT row " + std::to_string(q) + " of '" + v.name +
                         "' needs " + std::to_string(v.cardinality) + " entries");
      for (int k = 0; k < v.cardinality; ++k) {
        if (!row[k].is_number())
          throw ParseError("CPT entry of '" + v.name + "' is not a number");
        t.at(q, k) = row[k].get<double>();
      }
    }
    t.recompute_rows();
    cpts.push_back(std::move(t));
  }
  try {
    return BayesNet(std::move(s.variables), std::move(s.dag), std::move(cpts));
  } catch (const DimensionError& e) {
    throw ParseError(e.what());
  }
}

inline json score_report_to_json(const ScoreReport& rep) {
  json j;
  j["kind"] = to_string(rep.kind);
  j["scheme"] = rep.scheme.empty() ? json(nullptr) : json(rep.scheme);
  j["ess"] = rep.ess ? json(*rep.ess) : json(nullptr);
  j["total_bits"] = rep.total_bits;
  json fams = json::array();
  for (const FamilyScoreEntry& f : rep.families)
    fams.push_back({{"variable", f.variable},
                    {"parents", f.parents},
                    {"value_bits", f.value_bits}});
  j["families"] = std::move(fams);
  return j;
}

inline json cells_to_json(const std::string& label,
                          const std::vector<SweepRow>& rows, bool ess_meaningful,
                          const std::vector<AlphaStarRow>* alpha = nullptr) {
  json arr = json::array();
  for (const SweepRow& r : rows) {
    json row{{"scheme", label},
             {"ess", ess_meaningful ? json(r.ess) : json(nullptr)},
             {"n", r.cell.sample_size},
             {"correct", r.cell.correct},
             {"extra", r.cell.extra},
             {"missing", r.cell.missing},
             {"trials", r.cell.trials}};
    if (alpha)
      for (const AlphaStarRow& a : *alpha)
        if (a.sample_size == r.cell.sample_size) {
          row["alpha_star"] = a.alpha;
          break;
        }
    arr.push_back(std::move(row));
  }
  return arr;
}

inline json alpha_star_to_json(const std::vector<AlphaStarRow>& rows) {
  json arr = json::array();
  for (const AlphaStarRow& r : rows)
    arr.push_back({{"n", r.sample_size},
                   {"alpha_star", r.alpha},
                   {"correct", r.cell.correct},
                   {"extra", r.cell.extra},
                   {"missing", r.cell.missing},
                   {"trials", r.cell.trials}});
  return arr;
}

}  // namespace bnet
