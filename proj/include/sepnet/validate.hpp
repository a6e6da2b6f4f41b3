#pragma once

#include <set>
#include <string>
#include <vector>

#include "sepnet/model.hpp"

namespace sepnet {

enum class Severity { Violation, Info };

struct Finding {
  Severity severity = Severity::Violation;
  std::string code;
  std::string variable;
  std::string message;
};

/// Violations make a net unusable; notes record legal gaps such as missing
/// cp-statements.
struct ValidationReport {
  std::vector<Finding> violations;
  std::vector<Finding> notes;

  bool ok() const { return violations.empty(); }

  bool has_violation(std::string_view code) const {
    for (const auto& f : violations)
      if (f.code == code) return true;
    return false;
  }
  bool has_note(std::string_view code) const {
    for (const auto& f : notes)
      if (f.code == code) return true;
    return false;
  }
};

namespace detail {

class ReportBuilder {
 public:
  void violation(std::string code, std::string variable, std::string message) {
    report_.violations.push_back({Severity::Violation, std::move(code), std::move(variable), std::move(message)});
  }
  void note(std::string code, std::string variable, std::string message) {
    report_.notes.push_back({Severity::Info, std::move(code), std::move(variable), std::move(message)});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

inline std::string context_text(const std::vector<std::string>& ctx) { return "(" + join(ctx, ",") + ")"; }

/// Checks one context against the parent list; returns false after reporting.
inline bool check_context(const NetDocument& net, const VariableSpec& var, const std::vector<std::string>& ctx,
                          ReportBuilder& out) {
  if (ctx.size() != var.parents.size()) {
    out.violation("context-arity", var.name,
                  "context " + context_text(ctx) + " has " + std::to_string(ctx.size()) + " labels, '" + var.name +
                      "' has " + std::to_string(var.parents.size()) + " parents");
    return false;
  }
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto* parent = net.find(var.parents[i]);
    if (!parent) return false;  // reported as unknown-parent
    auto labels = context_labels(*parent);
    if (std::find(labels.begin(), labels.end(), ctx[i]) == labels.end()) {
      out.violation("context-label", var.name,
                    "'" + ctx[i] + "' is not a value of parent '" + parent->name + "' in context " + context_text(ctx));
      return false;
    }
  }
  return true;
}

/// Number of complete parent contexts, saturating.
inline std::size_t context_space_size(const NetDocument& net, const VariableSpec& var) {
  std::size_t total = 1;
  for (const auto& p : var.parents) {
    const auto* parent = net.find(p);
    if (!parent) return 0;
    total = saturating_mul(total, context_labels(*parent).size());
  }
  return total;
}

}  // namespace detail

/// Reports every structural problem of `net`. Never throws.
inline ValidationReport validate(const NetDocument& net) {
  detail::ReportBuilder out;

  std::set<std::string> names;
  for (const auto& var : net.variables) {
    if (!names.insert(var.name).second)
      out.violation("duplicate-variable", var.name, "variable '" + var.name + "' declared more than once");
  }

  for (const auto& var : net.variables) {
    if (var.discrete()) {
      if (var.labels.empty()) out.violation("empty-domain", var.name, "'" + var.name + "' has an empty domain");
      std::set<std::string> seen;
      for (const auto& l : var.labels)
        if (!seen.insert(l).second)
          out.violation("duplicate-label", var.name, "'" + var.name + "' lists value '" + l + "' twice");
      if (var.buckets)
        out.violation("buckets-on-discrete", var.name, "bucket boundaries only apply to evaluation variables");
    } else {
      if (!std::isfinite(var.range.min) || !std::isfinite(var.range.max) || !(var.range.min < var.range.max))
        out.violation("bad-range", var.name, "'" + var.name + "' needs min < max");
      if (var.buckets) {
        const auto& b = *var.buckets;
        if (!(b[0] <= b[1] && b[1] <= b[2]) || !var.range.contains(b[0]) || !var.range.contains(b[2]))
          out.violation("bad-buckets", var.name, "bucket boundaries of '" + var.name + "' must be ordered and in range");
      }
    }

    std::set<std::string> seen_parents;
    for (const auto& p : var.parents) {
      if (!seen_parents.insert(p).second)
        out.violation("duplicate-parent", var.name, "'" + var.name + "' lists parent '" + p + "' twice");
      if (p == var.name) out.violation("self-parent", var.name, "'" + var.name + "' is its own parent");
      const auto* parent = net.find(p);
      if (!parent) {
        out.violation("unknown-parent", var.name, "'" + var.name + "' has undeclared parent '" + p + "'");
        continue;
      }
      switch (var.var_class) {
        case VarClass::Scenario:
          out.violation("scenario-parent", var.name,
                        "scenario variable '" + var.name + "' cannot have parent '" + p + "'");
          break;
        case VarClass::Evaluation:
          if (parent->var_class == VarClass::Preference)
            out.violation("layering", var.name,
                          "evaluation variable '" + var.name + "' cannot depend on preference variable '" + p + "'");
          break;
        case VarClass::Preference: break;
      }
      if (parent->var_class == VarClass::Evaluation && !parent->buckets)
        out.violation("missing-buckets", var.name,
                      "'" + var.name + "' conditions on '" + p + "', which declares no bucket boundaries");
    }
  }

  if (auto cycle = find_dependency_cycle(net); !cycle.empty())
    out.violation("cycle", cycle.front(), "dependency cycle " + detail::join(cycle, " -> "));

  for (const auto& [name, table] : net.cp_tables) {
    const auto* var = net.find(name);
    if (!var) {
      out.violation("unknown-cptable", name, "cp-table for undeclared variable '" + name + "'");
      continue;
    }
    if (var->var_class != VarClass::Preference) {
      out.violation("cptable-class", name, "only preference variables carry cp-tables; '" + name + "' is " +
                                               std::string(to_string(var->var_class)));
      continue;
    }
    std::set<std::vector<std::string>> contexts;
    for (const auto& st : table) {
      bool valid_ctx = detail::check_context(net, *var, st.context, out);
      if (valid_ctx && !contexts.insert(st.context).second)
        out.violation("duplicate-context", name, "context " + detail::context_text(st.context) + " appears twice");
      std::set<std::string> covered;
      for (const auto& stratum : st.strata) {
        if (stratum.empty())
          out.violation("empty-stratum", name, "empty stratum in context " + detail::context_text(st.context));
        for (const auto& v : stratum) {
          if (!var->label_index(v))
            out.violation("unknown-value", name, "'" + v + "' is not a value of '" + name + "'");
          else if (!covered.insert(v).second)
            out.violation("value-in-two-strata", name,
                          "'" + v + "' appears twice in context " + detail::context_text(st.context));
        }
      }
      if (covered.size() < var->labels.size())
        out.note("uncovered-values", name,
                 std::to_string(var->labels.size() - covered.size()) + " value(s) of '" + name +
                     "' have no statement in context " + detail::context_text(st.context));
    }
    auto space = detail::context_space_size(net, *var);
    if (contexts.size() < space)
      out.note("missing-statements", name,
               "'" + name + "' has statements for " + std::to_string(contexts.size()) + " of " + std::to_string(space) +
                   " parent contexts");
  }

  for (const auto& [name, ef] : net.eval_functions) {
    const auto* var = net.find(name);
    if (!var) {
      out.violation("unknown-ef", name, "evaluation function for undeclared variable '" + name + "'");
      continue;
    }
    if (var->var_class != VarClass::Evaluation) {
      out.violation("ef-class", name, "only evaluation variables carry evaluation functions; '" + name + "' is " +
                                          std::string(to_string(var->var_class)));
      continue;
    }
    std::set<std::vector<std::string>> contexts;
    for (const auto& e : ef.table) {
      bool valid_ctx = detail::check_context(net, *var, e.context, out);
      if (valid_ctx && !contexts.insert(e.context).second)
        out.violation("ef-duplicate-context", name, "context " + detail::context_text(e.context) + " appears twice");
      if (!std::isfinite(e.value) || !var->range.contains(e.value))
        out.violation("ef-out-of-range", name,
                      "value " + detail::format_number(e.value) + " in context " + detail::context_text(e.context) +
                          " is outside [" + detail::format_number(var->range.min) + ", " +
                          detail::format_number(var->range.max) + "]");
    }
    auto space = detail::context_space_size(net, *var);
    if (contexts.size() < space)
      out.note("missing-ef-entries", name,
               "'" + name + "' has estimates for " + std::to_string(contexts.size()) + " of " + std::to_string(space) +
                   " parent contexts");
  }

  for (const auto& var : net.variables) {
    switch (var.var_class) {
      case VarClass::Scenario:
        out.note("scenario-no-cptable", var.name, "no cp-table for scenario variable '" + var.name + "'");
        break;
      case VarClass::Preference:
        if (!net.cp_tables.count(var.name))
          out.note("missing-statements", var.name, "preference variable '" + var.name + "' has no cp-table");
        break;
      case VarClass::Evaluation:
        if (!net.eval_functions.count(var.name))
          out.note("no-evalfunction", var.name, "evaluation variable '" + var.name + "' has no evaluation function");
        break;
    }
  }
  return out.take();
}

}  // namespace sepnet
