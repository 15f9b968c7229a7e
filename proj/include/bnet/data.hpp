#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bnet/errors.hpp"

namespace bnet {

/// A named discrete variable with states encoded 0..cardinality-1.
struct Variable {
  std::string name;
  int cardinality = 2;

  bool operator==(const Variable&) const = default;
};

namespace detail {

inline void validate_variables(const std::vector<Variable>& vars) {
  std::unordered_set<std::string> seen;
  for (const Variable& v : vars) {
    if (v.name.empty())
      throw DimensionError("variable with empty name");
    if (v.cardinality < 2)
      throw DimensionError("variable '" + v.name + "' has cardinality " +
                           std::to_string(v.cardinality) + ", need >= 2");
    if (!seen.insert(v.name).second)
      throw DimensionError("duplicate variable name '" + v.name + "'");
  }
}

}  // namespace detail

/// Complete-data table of categorical records. Immutable after construction;
/// missing values are rejected outright.
class CategoricalDataset {
public:
  CategoricalDataset(std::vector<Variable> variables,
                     const std::vector<std::vector<int>>& records)
      : vars_(std::move(variables)) {
    detail::validate_variables(vars_);
    const int nv = static_cast<int>(vars_.size());
    cells_.reserve(records.size() * static_cast<std::size_t>(nv));
    for (std::size_t t = 0; t < records.size(); ++t) {
      if (static_cast<int>(records[t].size()) != nv)
        throw DimensionError("record " + std::to_string(t) + " has " +
                             std::to_string(records[t].size()) +
                             " values, expected " + std::to_string(nv));
      for (int i = 0; i < nv; ++i) {
        const int v = records[t][i];
        if (v < 0 || v >= vars_[i].cardinality)
          throw DimensionError("record " + std::to_string(t) + ", variable '" +
                               vars_[i].name + "': state " + std::to_string(v) +
                               " out of range [0, " +
                               std::to_string(vars_[i].cardinality) + ")");
        cells_.push_back(v);
      }
    }
    n_ = static_cast<std::int64_t>(records.size());
  }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  std::int64_t num_records() const { return n_; }
  const std::vector<Variable>& variables() const { return vars_; }

  int value(std::int64_t record, int var) const {
    return cells_[static_cast<std::size_t>(record) * vars_.size() + var];
  }

  /// CSV layout: row 1 variable names, row 2 cardinalities, then one row of
  /// state indices per record.
  static CategoricalDataset from_csv(std::istream& in);

  static CategoricalDataset from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file '" + path + "'");
    return from_csv(in);
  }

  void to_csv(std::ostream& out) const {
    const int nv = num_vars();
    for (int i = 0; i < nv; ++i) out << (i ? "," : "") << vars_[i].name;
    out << '\n';
    for (int i = 0; i < nv; ++i) out << (i ? "," : "") << vars_[i].cardinality;
    out << '\n';
    for (std::int64_t t = 0; t < n_; ++t) {
      for (int i = 0; i < nv; ++i) out << (i ? "," : "") << value(t, i);
      out << '\n';
    }
  }

private:
  std::vector<Variable> vars_;
  std::vector<int> cells_;  // n x N, record-major
  std::int64_t n_ = 0;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline int parse_int_field(const std::string& s, const std::string& where) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(where + ": '" + s + "' is not an integer");
  }
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\r')) ++pos;
  if (pos != s.size())
    throw ParseError(where + ": '" + s + "' is not an integer");
  return v;
}

}  // namespace detail

inline CategoricalDataset CategoricalDataset::from_csv(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 2)
    throw ParseError("dataset CSV needs a name row and a cardinality row");

  const std::vector<std::string> names = detail::split_csv_line(lines[0]);
  const std::vector<std::string> cards = detail::split_csv_line(lines[1]);
  if (names.size() != cards.size())
    throw ParseError("cardinality row has " + std::to_string(cards.size()) +
                     " fields, name row has " + std::to_string(names.size()));

  std::vector<Variable> vars;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty())
      throw ParseError("column " + std::to_string(i + 1) + ": empty name");
    const int r = detail::parse_int_field(
        cards[i], "cardinality of variable '" + names[i] + "'");
    if (r < 2)
      throw ParseError("cardinality of variable '" + names[i] + "' is " +
                       std::to_string(r) + ", need >= 2");
    vars.push_back({names[i], r});
  }
  {
    std::unordered_set<std::string> seen;
    for (const Variable& v : vars)
      if (!seen.insert(v.name).second)
        throw ParseError("duplicate variable name '" + v.name + "'");
  }

  std::vector<std::vector<int>> records;
  records.reserve(lines.size() - 2);
  for (std::size_t t = 2; t < lines.size(); ++t) {
    const std::vector<std::string> row = detail::split_csv_line(lines[t]);
    if (row.size() != vars.size())
      throw ParseError("row " + std::to_string(t + 1) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(vars.size()));
    std::vector<int> rec(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (row[i].empty())
        throw ParseError("row " + std::to_string(t + 1) + ", variable '" +
                         vars[i].name + "': missing value");
      const int v = detail::parse_int_field(
          row[i], "row " + std::to_string(t + 1) + ", variable '" +
                      vars[i].name + "'");
      if (v < 0 || v >= vars[i].cardinality)
        throw ParseError("row " + std::to_string(t + 1) + ", variable '" +
                         vars[i].name + "': state " + std::to_string(v) +
                         " out of range [0, " +
                         std::to_string(vars[i].cardinality) + ")");
      rec[i] = v;
    }
    records.push_back(std::move(rec));
  }
  return CategoricalDataset(std::move(vars), records);
}

}  // namespace bnet
