#pragma once

#include <stdexcept>
#include <string>

namespace bnet {

/// Malformed input text (CSV cell, JSON field, flag value).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally valid inputs that do not fit together (variable sets,
/// cardinalities, table shapes).
class DimensionError : public std::runtime_error {
public:
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

/// Problem size exceeds a method's documented limit.
class LimitError : public std::runtime_error {
public:
  explicit LimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bnet
