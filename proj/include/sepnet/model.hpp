#pragma once

// Core value types shared by CP-nets and SEP-nets: variables and their
// classes, cp-statements, evaluation functions, the net document and outcomes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sepnet/detail/text.hpp"
#include "sepnet/errors.hpp"

namespace sepnet {

enum class VarClass { Scenario, Evaluation, Preference };

inline std::string_view to_string(VarClass c) {
  switch (c) {
    case VarClass::Scenario: return "scenario";
    case VarClass::Evaluation: return "evaluation";
    case VarClass::Preference: return "preference";
  }
  return "?";
}

inline std::optional<VarClass> parse_var_class(std::string_view s) {
  if (s == "scenario") return VarClass::Scenario;
  if (s == "evaluation") return VarClass::Evaluation;
  if (s == "preference") return VarClass::Preference;
  return std::nullopt;
}

/// Closed numeric range of an evaluation variable.
struct Range {
  double min = 0.0;
  double max = 0.0;

  bool contains(double v) const { return v >= min && v <= max; }
  friend bool operator==(const Range&, const Range&) = default;
};

/// Quartile boundaries (q1, q2, q3) used to discretize an evaluation variable.
using BucketBounds = std::array<double, 3>;

inline constexpr std::array<std::string_view, 4> kBucketLabels{"Q1", "Q2", "Q3", "Q4"};

/// Bucket index in [0, 3]; a value equal to a boundary goes to the lower bucket.
inline std::size_t bucket_of(double v, const BucketBounds& b) {
  if (v <= b[0]) return 0;
  if (v <= b[1]) return 1;
  if (v <= b[2]) return 2;
  return 3;
}

inline std::optional<std::size_t> parse_bucket_label(std::string_view s) {
  for (std::size_t i = 0; i < kBucketLabels.size(); ++i)
    if (kBucketLabels[i] == s) return i;
  return std::nullopt;
}

struct VariableSpec {
  std::string name;
  VarClass var_class = VarClass::Preference;
  /// Value labels in declaration order (scenario and preference variables).
  std::vector<std::string> labels;
  /// Numeric range (evaluation variables).
  Range range;
  /// Boundaries used when a context conditions on this evaluation variable.
  std::optional<BucketBounds> buckets;
  std::vector<std::string> parents;

  bool discrete() const { return var_class != VarClass::Evaluation; }

  std::optional<std::size_t> label_index(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return i;
    return std::nullopt;
  }

  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

/// A group of mutually indifferent values.
using Stratum = std::vector<std::string>;

/// One row of a cp-table: given `context` (one label per parent, in parent
/// order), the strata are listed best first. Values in no stratum are missing.
struct CpStatement {
  std::vector<std::string> context;
  std::vector<Stratum> strata;
  /// Free numeric annotation; the learner stores the empirical yes-rate here.
  std::optional<double> annotation;

  std::optional<std::size_t> stratum_of(std::string_view value) const {
    for (std::size_t s = 0; s < strata.size(); ++s)
      if (std::find(strata[s].begin(), strata[s].end(), value) != strata[s].end()) return s;
    return std::nullopt;
  }

  friend bool operator==(const CpStatement&, const CpStatement&) = default;
};

struct EvalEntry {
  std::vector<std::string> context;
  double value = 0.0;

  friend bool operator==(const EvalEntry&, const EvalEntry&) = default;
};

/// Per-context point estimate of an evaluation variable. The context holds
/// scenario labels, or bucket labels for evaluation parents.
struct EvaluationFunction {
  std::string owner;
  std::vector<EvalEntry> table;

  const EvalEntry* find(const std::vector<std::string>& context) const {
    for (const auto& e : table)
      if (e.context == context) return &e;
    return nullptr;
  }

  friend bool operator==(const EvaluationFunction&, const EvaluationFunction&) = default;
};

struct NetDocument {
  std::string name;
  std::string description;
  std::vector<VariableSpec> variables;
  std::map<std::string, std::vector<CpStatement>> cp_tables;
  std::map<std::string, EvaluationFunction> eval_functions;

  std::optional<std::size_t> index_of(std::string_view var) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
      if (variables[i].name == var) return i;
    return std::nullopt;
  }

  const VariableSpec* find(std::string_view var) const {
    auto i = index_of(var);
    return i ? &variables[*i] : nullptr;
  }

  const std::vector<CpStatement>* cp_table(std::string_view var) const {
    auto it = cp_tables.find(std::string(var));
    return it == cp_tables.end() ? nullptr : &it->second;
  }

  std::size_t count(VarClass c) const {
    return static_cast<std::size_t>(std::count_if(variables.begin(), variables.end(),
                                                  [c](const VariableSpec& v) { return v.var_class == c; }));
  }

  friend bool operator==(const NetDocument&, const NetDocument&) = default;
};

/// Labels a context may use for `parent`: its domain, or bucket labels for an
/// evaluation variable.
inline std::vector<std::string> context_labels(const VariableSpec& parent) {
  if (parent.discrete()) return parent.labels;
  return {kBucketLabels.begin(), kBucketLabels.end()};
}

// ---------------------------------------------------------------------------
// Outcomes

/// Label index for scenario/preference variables, number for evaluation ones.
using Value = std::variant<std::size_t, double>;

/// One value per variable of a net, in declaration order.
struct Outcome {
  std::vector<Value> values;

  std::size_t label(std::size_t var) const { return std::get<std::size_t>(values[var]); }
  double number(std::size_t var) const { return std::get<double>(values[var]); }

  friend bool operator==(const Outcome&, const Outcome&) = default;
  friend bool operator<(const Outcome& a, const Outcome& b) { return a.values < b.values; }
};

/// Partial assignment by variable name to label (scenario fixing, contexts).
using Assignment = std::map<std::string, std::string>;

/// Finite value lists for evaluation variables, used wherever outcomes are enumerated.
using EvalGrid = std::map<std::string, std::vector<double>>;

inline std::string format_value(const VariableSpec& var, const Value& v) {
  if (var.discrete()) return var.labels.at(std::get<std::size_t>(v));
  return detail::format_number(std::get<double>(v));
}

/// Comma-joined values in declaration order, e.g. "a,o,c_bar".
inline std::string format_outcome(const NetDocument& net, const Outcome& o, std::string_view sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < net.variables.size(); ++i) {
    if (i) out += sep;
    out += format_value(net.variables[i], o.values.at(i));
  }
  return out;
}

/// Throws InvalidOutcome unless `o` assigns one in-domain value to every variable.
inline void check_outcome(const NetDocument& net, const Outcome& o) {
  if (o.values.size() != net.variables.size())
    throw InvalidOutcome("outcome has " + std::to_string(o.values.size()) + " values, net has " +
                         std::to_string(net.variables.size()) + " variables");
  for (std::size_t i = 0; i < o.values.size(); ++i) {
    const auto& var = net.variables[i];
    if (var.discrete()) {
      const auto* idx = std::get_if<std::size_t>(&o.values[i]);
      if (!idx || *idx >= var.labels.size())
        throw InvalidOutcome("value for '" + var.name + "' is not in its domain");
    } else {
      const auto* num = std::get_if<double>(&o.values[i]);
      if (!num || !std::isfinite(*num) || !var.range.contains(*num))
        throw InvalidOutcome("value for '" + var.name + "' is outside its range");
    }
  }
}

namespace detail {

inline std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (b != 0 && a > static_cast<std::size_t>(-1) / b) return static_cast<std::size_t>(-1);
  return a * b;
}

inline Value parse_value(const VariableSpec& var, std::string_view text) {
  if (var.discrete()) {
    auto idx = var.label_index(text);
    if (!idx) throw InvalidOutcome("unknown value '" + std::string(text) + "' for '" + var.name + "'");
    return *idx;
  }
  auto num = parse_number(text);
  if (!num) throw InvalidOutcome("'" + std::string(text) + "' is not a number for '" + var.name + "'");
  return *num;
}

}  // namespace detail

/// Parses "v1,v2,..." (declaration order) or "X=v1,Y=v2,..." (any order, complete).
inline Outcome parse_outcome(const NetDocument& net, std::string_view text) {
  auto parts = detail::split(text, ',');
  if (net.variables.empty() && detail::trim(text).empty()) return {};
  Outcome o;
  o.values.resize(net.variables.size());
  bool named = !parts.empty() && parts.front().find('=') != std::string::npos;
  if (parts.size() != net.variables.size())
    throw InvalidOutcome("expected " + std::to_string(net.variables.size()) + " values in '" + std::string(text) +
                         "'");
  if (!named) {
    for (std::size_t i = 0; i < parts.size(); ++i)
      o.values[i] = detail::parse_value(net.variables[i], detail::trim(parts[i]));
  } else {
    std::vector<bool> seen(net.variables.size(), false);
    for (const auto& part : parts) {
      auto eq = part.find('=');
      if (eq == std::string::npos) throw InvalidOutcome("mixed positional and named values in '" + std::string(text) + "'");
      auto name = detail::trim(std::string_view(part).substr(0, eq));
      auto idx = net.index_of(name);
      if (!idx) throw InvalidOutcome("unknown variable '" + std::string(name) + "'");
      if (seen[*idx]) throw InvalidOutcome("variable '" + std::string(name) + "' assigned twice");
      seen[*idx] = true;
      o.values[*idx] = detail::parse_value(net.variables[*idx], detail::trim(std::string_view(part).substr(eq + 1)));
    }
  }
  check_outcome(net, o);
  return o;
}

// ---------------------------------------------------------------------------
// Dependency structure

/// Parent indices per variable; unknown parent names are skipped.
inline std::vector<std::vector<std::size_t>> parent_indices(const NetDocument& net) {
  std::vector<std::vector<std::size_t>> out(net.variables.size());
  for (std::size_t i = 0; i < net.variables.size(); ++i)
    for (const auto& p : net.variables[i].parents)
      if (auto j = net.index_of(p)) out[i].push_back(*j);
  return out;
}

/// Kahn's algorithm, lowest declaration index first. Empty optional on a cycle.
inline std::optional<std::vector<std::size_t>> topological_order(const NetDocument& net) {
  auto parents = parent_indices(net);
  const std::size_t n = net.variables.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto p : parents[i]) {
      ++indegree[i];
      children[p].push_back(i);
    }
  std::vector<std::size_t> order;
  std::vector<bool> done(n, false);
  while (order.size() < n) {
    std::size_t next = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && indegree[i] == 0) {
        next = i;
        break;
      }
    if (next == n) return std::nullopt;
    done[next] = true;
    order.push_back(next);
    for (auto c : children[next]) --indegree[c];
  }
  return order;
}

/// Some dependency cycle as a list of variable names (first == last), or empty.
inline std::vector<std::string> find_dependency_cycle(const NetDocument& net) {
  auto parents = parent_indices(net);
  const std::size_t n = net.variables.size();
  enum Mark : char { White, Grey, Black };
  std::vector<Mark> mark(n, White);
  std::vector<std::size_t> stack;
  std::vector<std::string> cycle;

  // Iterative DFS along parent edges.
  for (std::size_t root = 0; root < n && cycle.empty(); ++root) {
    if (mark[root] != White) continue;
    std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
    mark[root] = Grey;
    stack = {root};
    while (!frames.empty() && cycle.empty()) {
      auto& [v, next] = frames.back();
      if (next < parents[v].size()) {
        auto p = parents[v][next++];
        if (mark[p] == Grey) {
          auto it = std::find(stack.begin(), stack.end(), p);
          for (; it != stack.end(); ++it) cycle.push_back(net.variables[*it].name);
          cycle.push_back(net.variables[p].name);
          // The walk followed parent edges; report in dependency direction.
          std::reverse(cycle.begin(), cycle.end());
        } else if (mark[p] == White) {
          mark[p] = Grey;
          stack.push_back(p);
          frames.emplace_back(p, 0);
        }
      } else {
        mark[v] = Black;
        stack.pop_back();
        frames.pop_back();
      }
    }
  }
  return cycle;
}

/// Every complete assignment to `var`'s parents, lexicographic in parent order.
inline std::vector<std::vector<std::string>> parent_contexts(const NetDocument& net, const VariableSpec& var,
                                                             std::size_t cap = kDefaultCap) {
  std::vector<std::vector<std::string>> domains;
  std::size_t total = 1;
  for (const auto& p : var.parents) {
    const auto* spec = net.find(p);
    if (!spec) throw InvalidOutcome("unknown parent '" + p + "'");
    domains.push_back(context_labels(*spec));
    if (domains.back().empty()) return {};
    if (total > cap / domains.back().size())
      throw CapExceeded(detail::saturating_mul(total, domains.back().size()), cap);
    total *= domains.back().size();
  }
  std::vector<std::vector<std::string>> out;
  out.reserve(total);
  std::vector<std::size_t> idx(domains.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<std::string> ctx;
    for (std::size_t d = 0; d < domains.size(); ++d) ctx.push_back(domains[d][idx[d]]);
    out.push_back(std::move(ctx));
    for (std::size_t d = domains.size(); d-- > 0;) {
      if (++idx[d] < domains[d].size()) break;
      idx[d] = 0;
    }
  }
  return out;
}

namespace detail {

/// Cartesian product of per-variable value lists, first list most significant.
inline std::vector<Outcome> enumerate_product(const std::vector<std::vector<Value>>& domains, std::size_t cap) {
  std::size_t total = 1;
  for (const auto& dom : domains) {
    if (dom.empty()) return {};
    if (total > cap / dom.size()) throw CapExceeded(saturating_mul(total, dom.size()), cap);
    total *= dom.size();
  }
  std::vector<Outcome> out;
  out.reserve(total);
  std::vector<std::size_t> idx(domains.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    Outcome o;
    o.values.reserve(domains.size());
    for (std::size_t d = 0; d < domains.size(); ++d) o.values.push_back(domains[d][idx[d]]);
    out.push_back(std::move(o));
    for (std::size_t d = domains.size(); d-- > 0;) {
      if (++idx[d] < domains[d].size()) break;
      idx[d] = 0;
    }
  }
  return out;
}

/// Grid values for an evaluation variable, rejecting missing or duplicate grids.
inline std::vector<Value> grid_values(const VariableSpec& var, const EvalGrid& grid) {
  auto it = grid.find(var.name);
  if (it == grid.end()) throw InvalidOutcome("no grid given for evaluation variable '" + var.name + "'");
  auto sorted = it->second;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidOutcome("grid for '" + var.name + "' has duplicate values");
  std::vector<Value> dom;
  for (double v : it->second) {
    if (!var.range.contains(v)) throw InvalidOutcome("grid value for '" + var.name + "' is outside its range");
    dom.emplace_back(v);
  }
  return dom;
}

}  // namespace detail

/// All outcomes of `net` in lexicographic order (first variable most
/// significant); evaluation variables range over `grid`.
inline std::vector<Outcome> enumerate_outcomes(const NetDocument& net, const EvalGrid& grid = {},
                                               std::size_t cap = kDefaultCap) {
  std::vector<std::vector<Value>> domains;
  for (const auto& var : net.variables) {
    if (var.discrete()) {
      std::vector<Value> dom;
      for (std::size_t i = 0; i < var.labels.size(); ++i) dom.emplace_back(i);
      domains.push_back(std::move(dom));
    } else {
      domains.push_back(detail::grid_values(var, grid));
    }
  }
  return detail::enumerate_product(domains, cap);
}

}  // namespace sepnet
