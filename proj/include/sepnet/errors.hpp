#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sepnet {

/// Default bound on the number of outcomes any enumeration or search may touch.
inline constexpr std::size_t kDefaultCap = std::size_t{1} << 20;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed net document. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class CapExceeded : public Error {
 public:
  CapExceeded(std::size_t required, std::size_t cap)
      : Error("outcome space too large: needs " + std::to_string(required) + " nodes, cap is " +
              std::to_string(cap)),
        required_(required),
        cap_(cap) {}

  /// Lower bound on the number of nodes the operation needed.
  std::size_t required() const noexcept { return required_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t required_;
  std::size_t cap_;
};

/// An outcome or assignment that does not fit the net it is used with.
class InvalidOutcome : public Error {
 public:
  using Error::Error;
};

/// The dependency graph has a cycle where an operation needs a topological order.
class CyclicDependency : public Error {
 public:
  using Error::Error;
};

/// The optimal-value sweep met a context whose best value is not unique.
class AmbiguousTop : public Error {
 public:
  AmbiguousTop(std::string variable, std::vector<std::string> context, std::vector<std::string> tied)
      : Error(describe(variable, context, tied)),
        variable_(std::move(variable)),
        context_(std::move(context)),
        tied_(std::move(tied)) {}

  const std::string& variable() const noexcept { return variable_; }
  const std::vector<std::string>& context() const noexcept { return context_; }
  /// Values that are tied for the top. Every domain value when the statement is missing.
  const std::vector<std::string>& tied() const noexcept { return tied_; }

 private:
  static std::string describe(const std::string& variable, const std::vector<std::string>& context,
                              const std::vector<std::string>& tied) {
    std::string msg = "ambiguous top for '" + variable + "' in context (";
    for (std::size_t i = 0; i < context.size(); ++i) msg += (i ? "," : "") + context[i];
    msg += "): {";
    for (std::size_t i = 0; i < tied.size(); ++i) msg += (i ? "," : "") + tied[i];
    return msg + "}";
  }

  std::string variable_;
  std::vector<std::string> context_;
  std::vector<std::string> tied_;
};

/// An evaluation function has no entry for the context it was asked about.
class MissingEfEntry : public Error {
 public:
  MissingEfEntry(std::string variable, std::vector<std::string> context)
      : Error(describe(variable, context)), variable_(std::move(variable)), context_(std::move(context)) {}

  const std::string& variable() const noexcept { return variable_; }
  const std::vector<std::string>& context() const noexcept { return context_; }

 private:
  static std::string describe(const std::string& variable, const std::vector<std::string>& context) {
    std::string msg = "no evaluation entry for '" + variable + "' in context (";
    for (std::size_t i = 0; i < context.size(); ++i) msg += (i ? "," : "") + context[i];
    return msg + ")";
  }

  std::string variable_;
  std::vector<std::string> context_;
};

}  // namespace sepnet
